"""Executable model of the combat loop with pluggable luck policies.

One attack round: both sides roll 2d6, the higher total plus skill
wins, and the winner's opponent takes damage that the hero may gamble
on with a luck test.  All randomness flows through an explicit numpy
Generator so runs are reproducible and trials independent.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np


class InvalidStateError(ValueError):
    """An operation was applied to a finished combat."""


class RoundOutcome(str, Enum):
    WIN = "win"
    DRAW = "draw"
    LOSS = "loss"


@dataclass(frozen=True)
class GameState:
    """Combat state: staminas, remaining luck and the fixed skill edge."""

    s_h: int
    s_o: int
    l: int
    dk: int = 0

    def __post_init__(self):
        if self.l < 0:
            raise ValueError("luck cannot be negative")

    @property
    def ongoing(self) -> bool:
        return self.s_h >= 1 and self.s_o >= 1

    @property
    def hero_won(self) -> bool:
        return self.s_o <= 0 < self.s_h

    @property
    def hero_lost(self) -> bool:
        return self.s_h <= 0 < self.s_o


@dataclass(frozen=True)
class RoundRecord:
    """One resolved attack round.

    Attack strengths are the 2d6 rolls; absolute strengths are these
    plus each side's skill, and the comparison only needs the skill
    difference carried by the state.
    """

    index: int
    hero_roll: int
    opp_roll: int
    outcome: RoundOutcome
    luck_used: bool
    luck_roll: int | None
    luck_success: bool | None
    hero_delta: int
    opp_delta: int


def rng_stream(master_seed: int, trial_index: int) -> np.random.Generator:
    """Counter-based stream for one trial; streams never collide across
    (master_seed, trial_index) keys and need no sequential spawning."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence((master_seed, trial_index)))
    )


def roll_2d6(rng: np.random.Generator) -> int:
    return int(rng.integers(1, 7) + rng.integers(1, 7))


def apply_round_outcome(
    state: GameState,
    outcome: RoundOutcome,
    use_luck: bool = False,
    luck_success: bool | None = None,
) -> tuple[GameState, int, int]:
    """Pure damage table: returns (next state, hero delta, opp delta).

    The caller resolves the luck test itself; this function only needs
    its result.  Staminas may go negative, termination reads <= 0.
    """
    if not state.ongoing:
        raise InvalidStateError("combat already decided")
    if use_luck:
        if outcome is RoundOutcome.DRAW:
            raise ValueError("a drawn round admits no luck decision")
        if state.l < 1:
            raise ValueError("no luck left to spend")
        if luck_success is None:
            raise ValueError("luck use requires a test result")
    elif luck_success is not None:
        raise ValueError("test result given without luck use")

    hero_delta = 0
    opp_delta = 0
    if outcome is RoundOutcome.WIN:
        if use_luck:
            opp_delta = -4 if luck_success else -1
        else:
            opp_delta = -2
    elif outcome is RoundOutcome.LOSS:
        if use_luck:
            hero_delta = -1 if luck_success else -3
        else:
            hero_delta = -2
    next_state = GameState(
        s_h=state.s_h + hero_delta,
        s_o=state.s_o + opp_delta,
        l=state.l - (1 if use_luck else 0),
        dk=state.dk,
    )
    return next_state, hero_delta, opp_delta


def play_round(
    state: GameState, policy, rng: np.random.Generator, index: int = 0
) -> tuple[GameState, RoundRecord]:
    """Resolve one attack round under ``policy``.

    Draw order is fixed (hero 2d6, opponent 2d6, then the luck test if
    taken) so a seed fully determines the transcript.  A luck request
    at l = 0 is coerced to no.
    """
    if not state.ongoing:
        raise InvalidStateError("combat already decided")
    hero_roll = roll_2d6(rng)
    opp_roll = roll_2d6(rng)
    if hero_roll + state.dk > opp_roll:
        outcome = RoundOutcome.WIN
    elif hero_roll + state.dk < opp_roll:
        outcome = RoundOutcome.LOSS
    else:
        outcome = RoundOutcome.DRAW

    use_luck = False
    luck_roll = None
    luck_success = None
    if outcome is not RoundOutcome.DRAW and state.l >= 1:
        if policy.decide(state, outcome):
            use_luck = True
            luck_roll = roll_2d6(rng)
            luck_success = luck_roll <= state.l
    next_state, hero_delta, opp_delta = apply_round_outcome(
        state, outcome, use_luck, luck_success
    )
    record = RoundRecord(
        index=index,
        hero_roll=hero_roll,
        opp_roll=opp_roll,
        outcome=outcome,
        luck_used=use_luck,
        luck_roll=luck_roll,
        luck_success=luck_success,
        hero_delta=hero_delta,
        opp_delta=opp_delta,
    )
    return next_state, record


def play_combat(
    initial: GameState,
    policy,
    rng: np.random.Generator,
    max_rounds: int | None = None,
) -> tuple[GameState, list[RoundRecord]]:
    """Run rounds until one side drops; returns the final state and the
    full transcript."""
    if not initial.ongoing:
        raise InvalidStateError("combat already decided")
    state = initial
    transcript: list[RoundRecord] = []
    while state.ongoing:
        if max_rounds is not None and len(transcript) >= max_rounds:
            raise RuntimeError(f"combat exceeded {max_rounds} rounds")
        state, record = play_round(state, policy, rng, index=len(transcript))
        transcript.append(record)
    return state, transcript


# Heuristic strategy ids: which outcomes gamble, plus any state gate.
# Gates receive (s_h, s_o) and work elementwise on arrays too.
_STRATEGY_RULES = {
    0: (False, False, None),
    1: (True, True, None),
    2: (False, True, None),
    3: (True, False, None),
    4: (False, True, lambda s_h, s_o: s_h < 6),
    5: (True, False, lambda s_h, s_o: s_o > 6),
    6: (True, True, lambda s_h, s_o: s_h < 6),
    7: (True, True, lambda s_h, s_o: s_h < 4),
    8: (True, True, lambda s_h, s_o: s_h < s_o),
}


@dataclass(frozen=True)
class HeuristicPolicy:
    """Threshold strategies: gamble on the gated outcomes while l >= tau.

    ``tau`` may be an integer or, for batch evaluation, a column vector
    broadcastable against the state arrays.
    """

    strategy_id: int
    tau: object = 0

    def __post_init__(self):
        if self.strategy_id not in _STRATEGY_RULES:
            raise ValueError(f"unknown strategy id {self.strategy_id!r}")

    def decide(self, state: GameState, outcome: RoundOutcome) -> bool:
        on_win, on_loss, gate = _STRATEGY_RULES[self.strategy_id]
        wants = on_win if outcome is RoundOutcome.WIN else on_loss
        if not wants or state.l < 1 or state.l < self.tau:
            return False
        return gate is None or bool(gate(state.s_h, state.s_o))

    def decide_batch(self, s_h, s_o, luck, is_win, is_loss):
        """Vectorized decision over parallel state arrays."""
        on_win, on_loss, gate = _STRATEGY_RULES[self.strategy_id]
        prompted = np.zeros(np.broadcast(is_win, is_loss).shape, dtype=bool)
        if on_win:
            prompted |= is_win
        if on_loss:
            prompted |= is_loss
        allowed = prompted & (luck >= 1) & (luck >= self.tau)
        if gate is not None:
            allowed &= gate(s_h, s_o)
        return allowed


def heuristic_policy(strategy_id: int, tau: int = 0) -> HeuristicPolicy:
    """Build one of the nine threshold strategies."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    return HeuristicPolicy(strategy_id=strategy_id, tau=tau)


def transcript_to_jsonl(transcript: list[RoundRecord]) -> str:
    """One JSON object per line, in round order."""
    lines = []
    for record in transcript:
        payload = asdict(record)
        payload["outcome"] = record.outcome.value
        lines.append(json.dumps(payload, separators=(",", ":")))
    return "\n".join(lines) + ("\n" if lines else "")


def transcript_from_jsonl(text: str) -> list[RoundRecord]:
    records = []
    for line in text.splitlines():
        if not line.strip():
            continue
        payload = json.loads(line)
        payload["outcome"] = RoundOutcome(payload["outcome"])
        records.append(RoundRecord(**payload))
    return records
