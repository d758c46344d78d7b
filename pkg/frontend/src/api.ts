/**
 * Typed client for the ff-advisor HTTP API.
 *
 * All probabilities arrive as JSON numbers produced by the server; the
 * client hands them through untouched so anything the UI displays is
 * exactly what the solver computed.
 */

export type Outcome = "win" | "draw" | "loss";

export interface HeroStats {
  skill: number;
  stamina: number;
  luck: number;
}

export interface OpponentStats {
  skill: number;
  stamina: number;
}

export interface CombatState {
  s_h: number;
  s_o: number;
  l: number;
  ongoing: boolean;
  hero_won: boolean;
  hero_lost: boolean;
}

export interface WhatIfEntry {
  outcome: Outcome;
  use_luck: boolean;
  v_p: number;
}

export interface Advice {
  use_luck_on_win: boolean | null;
  use_luck_on_loss: boolean | null;
  strategy_code: number | null;
  v_p: number;
  v_p_no_luck: number;
  what_ifs: WhatIfEntry[];
}

/** Fields common to every per-session response. */
export interface SessionSnapshot {
  schema_version: number;
  session_id: string;
  hero: HeroStats;
  opponent: OpponentStats;
  dk: number;
  round_count: number;
  state: CombatState;
}

export interface SessionPayload extends SessionSnapshot {
  advice: Advice;
}

export interface RoundInput {
  outcome: Outcome;
  luck_used?: boolean;
  luck_test_success?: boolean | null;
}

export interface WhatIfPayload extends SessionSnapshot {
  what_if: WhatIfEntry;
}

export interface LogEntry {
  outcome: Outcome;
  luck_used: boolean;
  luck_test_success: boolean | null;
}

export interface LogPayload extends SessionSnapshot {
  rounds: LogEntry[];
}

export interface ServiceInfo {
  schema_version: number;
  service: string;
}

/** Error carrying the HTTP status and the server's detail payload. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(typeof detail === "string" ? detail : JSON.stringify(detail));
    this.name = "ApiError";
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const detail =
      body && typeof body === "object" && "detail" in body
        ? (body as { detail: unknown }).detail
        : response.statusText;
    throw new ApiError(response.status, detail);
  }
  return body as T;
}

export class AdvisorClient {
  constructor(readonly baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  private get<T>(path: string): Promise<T> {
    return fetch(this.url(path)).then((r) => unwrap<T>(r));
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return fetch(this.url(path), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    }).then((r) => unwrap<T>(r));
  }

  info(): Promise<ServiceInfo> {
    return this.get("/");
  }

  createSession(hero: HeroStats, opponent: OpponentStats): Promise<SessionPayload> {
    return this.post("/sessions", { hero, opponent });
  }

  getSession(sessionId: string): Promise<SessionPayload> {
    return this.get(`/sessions/${sessionId}`);
  }

  getAdvice(sessionId: string): Promise<SessionPayload> {
    return this.get(`/sessions/${sessionId}/advice`);
  }

  recordRound(sessionId: string, round: RoundInput): Promise<SessionPayload> {
    return this.post(`/sessions/${sessionId}/rounds`, round);
  }

  undo(sessionId: string): Promise<SessionPayload> {
    return this.post(`/sessions/${sessionId}/undo`);
  }

  whatIf(
    sessionId: string,
    outcome: Outcome,
    useLuck: boolean,
  ): Promise<WhatIfPayload> {
    const flag = useLuck ? "true" : "false";
    return this.get(
      `/sessions/${sessionId}/what-if?outcome=${outcome}&use_luck=${flag}`,
    );
  }

  getLog(sessionId: string): Promise<LogPayload> {
    return this.get(`/sessions/${sessionId}/log`);
  }
}
