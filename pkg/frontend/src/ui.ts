/**
 * HTML render functions: view state in, markup strings out.
 *
 * Kept free of DOM access so they are trivially testable.  Probability
 * text always comes from `fmtProb`, which prints the API's number
 * as-is; history bar widths are computed by the CSS engine from the
 * raw value, so not even presentation math happens in script.
 */

import type { Advice, CombatState, Outcome } from "./api.js";
import {
  banner,
  luckControlsEnabled,
  recommendationText,
  roundControlsEnabled,
  type HistoryPoint,
  type SessionView,
  type WhatIfGrid,
} from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Shortest round-trip decimal of the API's number, unmodified. */
export function fmtProb(v: number): string {
  return String(v);
}

export function renderHeader(view: SessionView): string {
  const { hero, opponent, dk, round_count } = view.session;
  return (
    `<h2>skill ${hero.skill} / stamina ${hero.stamina} / luck ${hero.luck}` +
    ` vs skill ${opponent.skill} / stamina ${opponent.stamina}</h2>` +
    `<p class="meta">skill difference ${dk}, round ${round_count}</p>`
  );
}

export function renderState(state: CombatState): string {
  const flag = banner(state);
  const closing = flag === null ? "" : `<div class="banner ${flag}">${flag}!</div>`;
  return (
    `<dl class="stats">` +
    `<dt>hero stamina</dt><dd>${state.s_h}</dd>` +
    `<dt>opponent stamina</dt><dd>${state.s_o}</dd>` +
    `<dt>luck</dt><dd>${state.l}</dd>` +
    `</dl>` +
    closing
  );
}

export function renderAdvice(advice: Advice): string {
  const code =
    advice.strategy_code === null
      ? ""
      : ` <span class="code">(strategy ${advice.strategy_code})</span>`;
  return (
    `<p class="vp">victory probability <code>${fmtProb(advice.v_p)}</code></p>` +
    `<p class="vp-baseline">without luck <code>${fmtProb(advice.v_p_no_luck)}</code></p>` +
    `<p class="recommendation">${escapeHtml(recommendationText(advice))}${code}</p>`
  );
}

export function renderHistory(history: HistoryPoint[]): string {
  const items = history
    .map(
      (point) =>
        `<li style="--p: ${fmtProb(point.v_p)}">` +
        `<span class="note">${escapeHtml(point.note)}</span>` +
        `<code>${fmtProb(point.v_p)}</code></li>`,
    )
    .join("");
  return `<ol class="history" start="0">${items}</ol>`;
}

export function renderControls(
  state: CombatState,
  selectedOutcome: Outcome,
  luckUsed: boolean,
): string {
  const roundsOff = roundControlsEnabled(state) ? "" : " disabled";
  const luckOff = luckControlsEnabled(state, selectedOutcome) ? "" : " disabled";
  const testOff = luckOff || !luckUsed ? " disabled" : "";
  const outcomes = (["win", "draw", "loss"] as const)
    .map((outcome) => {
      const checked = outcome === selectedOutcome ? " checked" : "";
      return (
        `<label><input type="radio" name="outcome" value="${outcome}"` +
        `${checked}${roundsOff}> ${outcome}</label>`
      );
    })
    .join("");
  return (
    `<fieldset class="outcomes">${outcomes}</fieldset>` +
    `<label class="luck"><input type="checkbox" id="luck-used"` +
    `${luckOff}${luckUsed && !luckOff ? " checked" : ""}> test your luck</label>` +
    `<fieldset class="luck-test"${testOff}>` +
    `<label><input type="radio" name="luck-test" value="success"${testOff}> lucky</label>` +
    `<label><input type="radio" name="luck-test" value="failure"${testOff}> unlucky</label>` +
    `</fieldset>` +
    `<button id="record"${roundsOff}>record round</button>` +
    `<button id="undo">undo</button>`
  );
}

export function renderWhatIf(grid: WhatIfGrid | null): string {
  if (grid === null) {
    return `<p class="what-if-empty">no what-if loaded</p>`;
  }
  const cell = (v: number | null) =>
    v === null ? `<td class="illegal">&mdash;</td>` : `<td><code>${fmtProb(v)}</code></td>`;
  return (
    `<table class="what-if">` +
    `<tr><th></th><th>keep luck</th><th>spend luck</th></tr>` +
    `<tr><th>won round</th>${cell(grid.win.plain)}${cell(grid.win.luck)}</tr>` +
    `<tr><th>lost round</th>${cell(grid.loss.plain)}${cell(grid.loss.luck)}</tr>` +
    `</table>`
  );
}

export function renderSession(
  view: SessionView,
  selectedOutcome: Outcome,
  luckUsed: boolean,
): string {
  return (
    renderHeader(view) +
    renderState(view.session.state) +
    renderAdvice(view.session.advice) +
    renderControls(view.session.state, selectedOutcome, luckUsed) +
    renderHistory(view.history) +
    renderWhatIf(view.whatIf)
  );
}
