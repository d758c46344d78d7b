"""Live combat tracking: a session wraps a game state, its round log
and the solved table for its skill difference.

The session never rolls dice.  The player reports what happened at the
table (round outcome, whether luck was spent, how the test went) and
the session applies the damage rules and serves optimal-play advice.
"""

import uuid
from dataclasses import dataclass, field

from .engine import GameState, RoundOutcome, apply_round_outcome
from .solver import (
    PolicyTable,
    TableStore,
    loss_propagators,
    no_luck_continuation,
    query,
    win_propagators,
)

DEFAULT_MAX_STAMINA = 24
DEFAULT_MAX_LUCK = 12


class IllegalTransition(Exception):
    """A round entry or undo that the rules do not allow."""


class UnknownSession(KeyError):
    """Session id with no live session behind it."""


@dataclass(frozen=True)
class CombatantStats:
    skill: int
    stamina: int
    luck: int = 0

    def __post_init__(self):
        if self.skill < 1:
            raise ValueError("skill must be positive")
        if self.stamina < 1:
            raise ValueError("stamina must be positive")
        if self.luck < 0:
            raise ValueError("luck cannot be negative")


@dataclass(frozen=True)
class SessionRound:
    """One logged round as the player reported it."""

    outcome: RoundOutcome
    luck_used: bool = False
    luck_test_success: bool | None = None


@dataclass(frozen=True)
class WhatIf:
    """Value after one hypothetical transition from the current state."""

    outcome: RoundOutcome
    use_luck: bool
    v_p: float


@dataclass(frozen=True)
class AdviceResponse:
    """Optimal play at the current state, with the branch values that
    justify it."""

    use_luck_on_win: bool | None
    use_luck_on_loss: bool | None
    strategy_code: int | None
    v_p: float
    v_p_no_luck: float
    what_ifs: tuple[WhatIf, ...]


def _advise(table: PolicyTable, state: GameState) -> AdviceResponse:
    if not state.ongoing:
        won = float(state.hero_won)
        return AdviceResponse(
            use_luck_on_win=None,
            use_luck_on_loss=None,
            strategy_code=None,
            v_p=won,
            v_p_no_luck=won,
            what_ifs=(),
        )
    looked = query(table, state.s_h, state.s_o, state.l)
    what_ifs = [
        WhatIf(outcome=RoundOutcome.DRAW, use_luck=False, v_p=looked.value),
        WhatIf(
            RoundOutcome.WIN,
            False,
            no_luck_continuation(table, state.s_h, state.s_o, state.l, RoundOutcome.WIN),
        ),
        WhatIf(
            RoundOutcome.LOSS,
            False,
            no_luck_continuation(table, state.s_h, state.s_o, state.l, RoundOutcome.LOSS),
        ),
    ]
    if state.l >= 1:
        win_y, _ = win_propagators(table, state.s_h, state.s_o, state.l)
        loss_y, _ = loss_propagators(table, state.s_h, state.s_o, state.l)
        what_ifs.append(WhatIf(RoundOutcome.WIN, True, win_y))
        what_ifs.append(WhatIf(RoundOutcome.LOSS, True, loss_y))
    return AdviceResponse(
        use_luck_on_win=looked.use_luck_on_win,
        use_luck_on_loss=looked.use_luck_on_loss,
        strategy_code=looked.strategy_code,
        v_p=looked.value,
        v_p_no_luck=looked.no_luck_value,
        what_ifs=tuple(what_ifs),
    )


@dataclass
class CombatSession:
    """One hero-versus-opponent combat tracked round by round.

    The invariant maintained everywhere: replaying the round log from
    the initial stats reproduces the current state, so the log is the
    session and undo is replay-minus-one.
    """

    session_id: str
    hero: CombatantStats
    opponent: CombatantStats
    table: PolicyTable
    rounds: list[SessionRound] = field(default_factory=list)
    state: GameState = None

    def __post_init__(self):
        if self.state is None:
            self.state = self.initial_state()

    @classmethod
    def start(
        cls,
        hero: CombatantStats,
        opponent: CombatantStats,
        store: TableStore | None = None,
    ) -> "CombatSession":
        store = store if store is not None else TableStore()
        table = store.get(
            dk=hero.skill - opponent.skill,
            max_s_h=max(DEFAULT_MAX_STAMINA, hero.stamina),
            max_s_o=max(DEFAULT_MAX_STAMINA, opponent.stamina),
            max_l=max(DEFAULT_MAX_LUCK, hero.luck),
        )
        return cls(
            session_id=uuid.uuid4().hex,
            hero=hero,
            opponent=opponent,
            table=table,
        )

    def initial_state(self) -> GameState:
        return GameState(
            s_h=self.hero.stamina,
            s_o=self.opponent.stamina,
            l=self.hero.luck,
            dk=self.hero.skill - self.opponent.skill,
        )

    def replayed_state(self, rounds=None) -> GameState:
        state = self.initial_state()
        for entry in self.rounds if rounds is None else rounds:
            state, _, _ = apply_round_outcome(
                state, entry.outcome, entry.luck_used, entry.luck_test_success
            )
        return state

    def record_round(
        self,
        outcome: RoundOutcome,
        luck_used: bool = False,
        luck_test_success: bool | None = None,
    ) -> GameState:
        if not self.state.ongoing:
            raise IllegalTransition("combat already decided")
        try:
            next_state, _, _ = apply_round_outcome(
                self.state, outcome, luck_used, luck_test_success
            )
        except ValueError as exc:
            raise IllegalTransition(str(exc)) from exc
        self.rounds.append(
            SessionRound(
                outcome=outcome,
                luck_used=luck_used,
                luck_test_success=luck_test_success,
            )
        )
        self.state = next_state
        return self.state

    def undo(self) -> GameState:
        if not self.rounds:
            raise IllegalTransition("nothing to undo")
        self.rounds.pop()
        self.state = self.replayed_state()
        return self.state

    def advice(self) -> AdviceResponse:
        return _advise(self.table, self.state)

    def what_if(self, outcome: RoundOutcome, use_luck: bool) -> float:
        """Value after one hypothetical round, without touching the
        session."""
        if not self.state.ongoing:
            raise IllegalTransition("combat already decided")
        if outcome is RoundOutcome.DRAW:
            if use_luck:
                raise IllegalTransition("a drawn round admits no luck decision")
            return self.table.pre_round_value(
                self.state.s_h, self.state.s_o, self.state.l
            )
        if not use_luck:
            return no_luck_continuation(
                self.table, self.state.s_h, self.state.s_o, self.state.l, outcome
            )
        if self.state.l < 1:
            raise IllegalTransition("no luck left to spend")
        propagators = win_propagators if outcome is RoundOutcome.WIN else loss_propagators
        p_y, _ = propagators(
            self.table, self.state.s_h, self.state.s_o, self.state.l
        )
        return p_y
