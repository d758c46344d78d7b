/**
 * View state for one tracked combat.
 *
 * Everything here is a pure function of API responses: reducers fold
 * server payloads into a `SessionView`, and the derived helpers only
 * rephrase fields for display.  No probability or damage is ever
 * computed client-side.
 *
 * What-if grids are cached by combat state.  Within a session the grid
 * is a pure function of (s_h, s_o, l), so the cache never goes stale,
 * and an undo restores the exact view that was on screen before the
 * round, open panel included.
 */

import type {
  Advice,
  CombatState,
  RoundInput,
  SessionPayload,
  WhatIfEntry,
} from "./api.js";

export interface HistoryPoint {
  round: number;
  note: string;
  v_p: number;
}

export interface WhatIfGrid {
  /** v_p after each hypothetical branch; null marks an illegal branch. */
  win: { plain: number | null; luck: number | null };
  loss: { plain: number | null; luck: number | null };
}

export interface SessionView {
  session: SessionPayload;
  history: HistoryPoint[];
  whatIf: WhatIfGrid | null;
  whatIfCache: Record<string, WhatIfGrid>;
}

function stateKey(state: CombatState): string {
  return `${state.s_h}:${state.s_o}:${state.l}`;
}

export function describeRound(round: RoundInput): string {
  if (!round.luck_used) {
    return round.outcome;
  }
  const test = round.luck_test_success ? "luck held" : "luck failed";
  return `${round.outcome}, ${test}`;
}

export function sessionCreated(payload: SessionPayload): SessionView {
  return {
    session: payload,
    history: [{ round: 0, note: "start", v_p: payload.advice.v_p }],
    whatIf: null,
    whatIfCache: {},
  };
}

export function roundRecorded(
  view: SessionView,
  payload: SessionPayload,
  round: RoundInput,
): SessionView {
  return {
    session: payload,
    history: [
      ...view.history,
      {
        round: payload.round_count,
        note: describeRound(round),
        v_p: payload.advice.v_p,
      },
    ],
    whatIf: view.whatIfCache[stateKey(payload.state)] ?? null,
    whatIfCache: view.whatIfCache,
  };
}

export function roundUndone(
  view: SessionView,
  payload: SessionPayload,
): SessionView {
  return {
    session: payload,
    history: view.history.slice(0, -1),
    whatIf: view.whatIfCache[stateKey(payload.state)] ?? null,
    whatIfCache: view.whatIfCache,
  };
}

/**
 * Fold the four what-if branch results into the view.  Entries are raw
 * API responses; a null entry marks a branch the server rejected as
 * illegal (for example the gamble branches of a luckless hero).
 */
export function whatIfLoaded(
  view: SessionView,
  entries: {
    outcome: "win" | "loss";
    use_luck: boolean;
    result: WhatIfEntry | null;
  }[],
): SessionView {
  const grid: WhatIfGrid = {
    win: { plain: null, luck: null },
    loss: { plain: null, luck: null },
  };
  for (const entry of entries) {
    grid[entry.outcome][entry.use_luck ? "luck" : "plain"] =
      entry.result?.v_p ?? null;
  }
  const key = stateKey(view.session.state);
  return {
    ...view,
    whatIf: grid,
    whatIfCache: { ...view.whatIfCache, [key]: grid },
  };
}

export function recommendationText(advice: Advice): string {
  if (advice.use_luck_on_win === null || advice.use_luck_on_loss === null) {
    return "combat is over";
  }
  if (advice.use_luck_on_win && advice.use_luck_on_loss) {
    return "spend luck after any decisive round";
  }
  if (advice.use_luck_on_loss) {
    return "spend luck only after a lost round";
  }
  if (advice.use_luck_on_win) {
    return "spend luck only after a won round";
  }
  return "hold your luck";
}

export function roundControlsEnabled(state: CombatState): boolean {
  return state.ongoing;
}

/** Luck controls need an ongoing combat, luck to spend, and a decisive outcome. */
export function luckControlsEnabled(
  state: CombatState,
  outcome: RoundInput["outcome"],
): boolean {
  return state.ongoing && state.l >= 1 && outcome !== "draw";
}

export function banner(state: CombatState): string | null {
  if (state.hero_won) {
    return "victory";
  }
  if (state.hero_lost) {
    return "defeat";
  }
  return null;
}
