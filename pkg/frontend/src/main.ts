/**
 * Page wiring: reads the forms, drives the API client, folds responses
 * through the state reducers and re-renders.  All decisions and
 * numbers come from the server.
 */

import { AdvisorClient, ApiError, type Outcome } from "./api.js";
import {
  roundRecorded,
  roundUndone,
  sessionCreated,
  whatIfLoaded,
  type SessionView,
} from "./state.js";
import { renderSession } from "./ui.js";

const $ = <T extends HTMLElement>(selector: string): T => {
  const node = document.querySelector<T>(selector);
  if (!node) {
    throw new Error(`missing element ${selector}`);
  }
  return node;
};

let client = new AdvisorClient("http://127.0.0.1:8765");
let view: SessionView | null = null;
let selectedOutcome: Outcome = "win";
let luckUsed = false;

const sessionPane = $("#session");
const errorPane = $("#error");
const logPane = $("#log");

function showError(err: unknown): void {
  const text =
    err instanceof ApiError ? `${err.status}: ${err.message}` : String(err);
  errorPane.textContent = text;
  errorPane.hidden = false;
}

function render(): void {
  errorPane.hidden = true;
  if (view === null) {
    return;
  }
  if (!view.session.state.ongoing || view.session.state.l < 1) {
    luckUsed = false;
  }
  sessionPane.innerHTML = renderSession(view, selectedOutcome, luckUsed);
  wireSessionControls();
}

function wireSessionControls(): void {
  sessionPane
    .querySelectorAll<HTMLInputElement>("input[name=outcome]")
    .forEach((input) =>
      input.addEventListener("change", () => {
        selectedOutcome = input.value as Outcome;
        if (selectedOutcome === "draw") {
          luckUsed = false;
        }
        render();
      }),
    );
  const luckBox = sessionPane.querySelector<HTMLInputElement>("#luck-used");
  luckBox?.addEventListener("change", () => {
    luckUsed = luckBox.checked;
    render();
  });
  sessionPane
    .querySelector<HTMLButtonElement>("#record")
    ?.addEventListener("click", () => void recordRound());
  sessionPane
    .querySelector<HTMLButtonElement>("#undo")
    ?.addEventListener("click", () => void undoRound());
}

async function createSession(event: Event): Promise<void> {
  event.preventDefault();
  const num = (id: string) => Number($<HTMLInputElement>(id).value);
  client = new AdvisorClient($<HTMLInputElement>("#api-base").value);
  try {
    const payload = await client.createSession(
      { skill: num("#hero-skill"), stamina: num("#hero-stamina"), luck: num("#hero-luck") },
      { skill: num("#opp-skill"), stamina: num("#opp-stamina") },
    );
    view = sessionCreated(payload);
    logPane.textContent = "";
    render();
  } catch (err) {
    showError(err);
  }
}

async function recordRound(): Promise<void> {
  if (view === null) {
    return;
  }
  const success = sessionPane.querySelector<HTMLInputElement>(
    "input[name=luck-test][value=success]",
  );
  const round = {
    outcome: selectedOutcome,
    luck_used: luckUsed,
    luck_test_success: luckUsed ? success?.checked === true : null,
  };
  try {
    const payload = await client.recordRound(view.session.session_id, round);
    view = roundRecorded(view, payload, round);
    render();
  } catch (err) {
    showError(err);
  }
}

async function undoRound(): Promise<void> {
  if (view === null) {
    return;
  }
  try {
    const payload = await client.undo(view.session.session_id);
    view = roundUndone(view, payload);
    render();
  } catch (err) {
    showError(err);
  }
}

async function loadWhatIf(): Promise<void> {
  if (view === null) {
    return;
  }
  const sid = view.session.session_id;
  const branches: { outcome: "win" | "loss"; use_luck: boolean }[] = [
    { outcome: "win", use_luck: false },
    { outcome: "win", use_luck: true },
    { outcome: "loss", use_luck: false },
    { outcome: "loss", use_luck: true },
  ];
  try {
    const entries = await Promise.all(
      branches.map(async (branch) => {
        try {
          const payload = await client.whatIf(sid, branch.outcome, branch.use_luck);
          return { ...branch, result: payload.what_if };
        } catch (err) {
          if (err instanceof ApiError && err.status === 422) {
            return { ...branch, result: null };
          }
          throw err;
        }
      }),
    );
    view = whatIfLoaded(view, entries);
    render();
  } catch (err) {
    showError(err);
  }
}

async function exportLog(): Promise<void> {
  if (view === null) {
    return;
  }
  try {
    const log = await client.getLog(view.session.session_id);
    logPane.textContent = JSON.stringify(log, null, 2);
  } catch (err) {
    showError(err);
  }
}

$("#create-form").addEventListener("submit", (event) => void createSession(event));
$("#what-if-button").addEventListener("click", () => void loadWhatIf());
$("#export-button").addEventListener("click", () => void exportLog());
