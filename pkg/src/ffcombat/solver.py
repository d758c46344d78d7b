"""Backward-induction solver for the optimal luck policy.

The decision state is (s_h, s_o, l, pending outcome): the round has
already been won or lost and the player must choose whether to gamble
luck on the damage.  Draws return to an identical situation, so the
draw self-loop is eliminated exactly by renormalizing the round odds
over non-draw outcomes; a raw-odds mode is kept behind a flag for
comparison.

Values are computed layer by layer: luck ascending (the gamble branch
spends one luck), and within a layer by ascending total stamina (the
no-gamble branch only loses stamina).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analytic import DegenerateOddsError
from .dice import DiceModel, RoundOdds, build_dice_model, round_odds
from .engine import GameState, RoundOutcome

LOSS_IDX = 0
WIN_IDX = 1

POLICY_TABLE_FORMAT_VERSION = 1
CACHE_ENV_VAR = "FF_ADVISOR_CACHE"


class MissingSuccessorError(RuntimeError):
    """A propagator read a state the sweep has not solved yet."""


class TableBoundsError(ValueError):
    """A query fell outside the solved state space."""


@dataclass(frozen=True)
class SolverConfig:
    dk: int
    max_s_h: int = 24
    max_s_o: int = 24
    max_l: int = 12
    tie_epsilon: float = 1e-10
    renormalize_draws: bool = True

    def __post_init__(self):
        if self.max_s_h < 1 or self.max_s_o < 1 or self.max_l < 0:
            raise ValueError("stamina bounds must be >= 1 and luck bound >= 0")
        if self.tie_epsilon <= 0:
            raise ValueError("tie_epsilon must be positive")


@dataclass(frozen=True)
class ValueQuery:
    """Answer to a state lookup: optimal actions, value and the no-luck
    baseline (the same table's l = 0 value, for bit-consistency)."""

    s_h: int
    s_o: int
    l: int
    outcome: RoundOutcome | None
    value: float
    no_luck_value: float
    use_luck_on_win: bool
    use_luck_on_loss: bool
    strategy_code: int

    @property
    def use_luck(self) -> bool:
        if self.outcome is RoundOutcome.WIN:
            return self.use_luck_on_win
        if self.outcome is RoundOutcome.LOSS:
            return self.use_luck_on_loss
        raise ValueError("no single action for a pre-round query")


@dataclass(frozen=True)
class PolicyTable:
    """Optimal action and value for every in-bounds decision state.

    ``value[s_h, s_o, l, i]`` and ``use_luck[s_h, s_o, l, i]`` hold the
    outcome-pending entries with i = 0 for a pending loss and i = 1 for
    a pending win; index 0 rows along the stamina axes are unused (the
    absorbing boundaries are virtual).
    """

    config: SolverConfig
    odds: RoundOdds
    rho_w: float
    rho_l: float
    value: np.ndarray = field(repr=False)
    use_luck: np.ndarray = field(repr=False)

    def in_bounds(self, s_h: int, s_o: int, l: int) -> bool:
        return (
            1 <= s_h <= self.config.max_s_h
            and 1 <= s_o <= self.config.max_s_o
            and 0 <= l <= self.config.max_l
        )

    def pre_round_value(self, s_h: int, s_o: int, l: int) -> float:
        """Value before the next round is rolled."""
        if not self.in_bounds(s_h, s_o, l):
            raise TableBoundsError(f"state ({s_h}, {s_o}, {l}) outside table")
        return float(
            self.rho_w * self.value[s_h, s_o, l, WIN_IDX]
            + self.rho_l * self.value[s_h, s_o, l, LOSS_IDX]
        )

    def strategy_code(self, s_h: int, s_o: int, l: int) -> int:
        """Figure encoding: 1 both outcomes, 2 loss only, 3 win only, 0 never."""
        if not self.in_bounds(s_h, s_o, l):
            raise TableBoundsError(f"state ({s_h}, {s_o}, {l}) outside table")
        on_win = bool(self.use_luck[s_h, s_o, l, WIN_IDX])
        on_loss = bool(self.use_luck[s_h, s_o, l, LOSS_IDX])
        if on_win and on_loss:
            return 1
        if on_loss:
            return 2
        if on_win:
            return 3
        return 0

    def strategy_codes(self, l: int) -> np.ndarray:
        """Code grid for one luck layer; index [s_h, s_o], row/col 0 unused."""
        on_win = self.use_luck[:, :, l, WIN_IDX]
        on_loss = self.use_luck[:, :, l, LOSS_IDX]
        codes = np.zeros(on_win.shape, dtype=np.int8)
        codes[on_win & on_loss] = 1
        codes[~on_win & on_loss] = 2
        codes[on_win & ~on_loss] = 3
        return codes

    def as_policy(self) -> "TablePolicy":
        return TablePolicy(table=self)


def _effective_odds(odds: RoundOdds, renormalize: bool) -> tuple[float, float]:
    p_w = float(odds.p_w)
    p_l = float(odds.p_l)
    if p_w + p_l == 0.0:
        raise DegenerateOddsError("rounds always draw; no decision problem")
    if renormalize:
        return p_w / (p_w + p_l), p_l / (p_w + p_l)
    return p_w, p_l


def solve(
    config: SolverConfig,
    odds: RoundOdds | None = None,
    dice: DiceModel | None = None,
) -> PolicyTable:
    """Solve every state by backward induction.

    For each (state, pending outcome) the gamble propagator p_y mixes
    the test's success and failure damage over the next round's odds
    one luck layer down, the no-gamble propagator p_n applies the flat
    2 damage in the same layer, and the action is gamble iff
    p_y > (1 + tie_epsilon) * p_n, so exact ties conserve luck.
    """
    if odds is None:
        odds = round_odds(config.dk)
    if dice is None:
        dice = build_dice_model()
    rho_w, rho_l = _effective_odds(odds, config.renormalize_draws)
    max_h, max_o, max_l = config.max_s_h, config.max_s_o, config.max_l
    q_of = [float(dice.luck_success(l)) for l in range(max_l + 1)]

    shape = (max_h + 1, max_o + 1, max_l + 1, 2)
    value = np.zeros(shape)
    use_luck = np.zeros(shape, dtype=bool)
    computed = np.zeros(shape, dtype=bool)

    def lookup(h: int, o: int, l: int, out: int) -> float:
        if h <= 0:
            return 0.0
        if o <= 0:
            return 1.0
        if not computed[h, o, l, out]:
            raise MissingSuccessorError(f"state ({h}, {o}, {l}, {out}) not solved")
        return value[h, o, l, out]

    for l in range(max_l + 1):
        q = q_of[l]
        for total in range(2, max_h + max_o + 1):
            for h in range(max(1, total - max_o), min(max_h, total - 1) + 1):
                o = total - h
                for out in (LOSS_IDX, WIN_IDX):
                    p_n, p_y = _propagators(
                        lookup, rho_w, rho_l, q, h, o, l, out, with_gamble=l >= 1
                    )
                    if p_y is None:
                        value[h, o, l, out] = p_n
                    else:
                        # The stored value is the true optimum; the
                        # recommended action additionally demands a
                        # relative edge so near-ties conserve luck.
                        value[h, o, l, out] = max(p_y, p_n)
                        use_luck[h, o, l, out] = p_y > (
                            1.0 + config.tie_epsilon
                        ) * p_n
                    computed[h, o, l, out] = True

    value.setflags(write=False)
    use_luck.setflags(write=False)
    return PolicyTable(
        config=config,
        odds=odds,
        rho_w=rho_w,
        rho_l=rho_l,
        value=value,
        use_luck=use_luck,
    )


def _propagators(lookup, rho_w, rho_l, q, h, o, l, out, with_gamble):
    """(p_n, p_y) for one decision state; p_y is None when no luck is left."""
    if out == LOSS_IDX:
        p_n = rho_l * lookup(h - 2, o, l, LOSS_IDX) + rho_w * lookup(
            h - 2, o, l, WIN_IDX
        )
        if not with_gamble:
            return p_n, None
        p_y = q * (
            rho_l * lookup(h - 1, o, l - 1, LOSS_IDX)
            + rho_w * lookup(h - 1, o, l - 1, WIN_IDX)
        ) + (1.0 - q) * (
            rho_l * lookup(h - 3, o, l - 1, LOSS_IDX)
            + rho_w * lookup(h - 3, o, l - 1, WIN_IDX)
        )
    else:
        p_n = rho_l * lookup(h, o - 2, l, LOSS_IDX) + rho_w * lookup(
            h, o - 2, l, WIN_IDX
        )
        if not with_gamble:
            return p_n, None
        p_y = q * (
            rho_l * lookup(h, o - 4, l - 1, LOSS_IDX)
            + rho_w * lookup(h, o - 4, l - 1, WIN_IDX)
        ) + (1.0 - q) * (
            rho_l * lookup(h, o - 1, l - 1, LOSS_IDX)
            + rho_w * lookup(h, o - 1, l - 1, WIN_IDX)
        )
    return p_n, p_y


def _table_lookup(table: PolicyTable):
    value = table.value

    def lookup(h: int, o: int, l: int, out: int) -> float:
        if h <= 0:
            return 0.0
        if o <= 0:
            return 1.0
        return float(value[h, o, l, out])

    return lookup


def _propagators_from_table(
    table: PolicyTable, s_h: int, s_o: int, l: int, out: int
) -> tuple[float, float]:
    if not table.in_bounds(s_h, s_o, l):
        raise TableBoundsError(f"state ({s_h}, {s_o}, {l}) outside table")
    if l < 1:
        raise ValueError("no luck available, the gamble branch does not exist")
    q = float(build_dice_model().luck_success(l))
    p_n, p_y = _propagators(
        _table_lookup(table), table.rho_w, table.rho_l, q, s_h, s_o, l, out,
        with_gamble=True,
    )
    return p_y, p_n


def loss_propagators(
    table: PolicyTable, s_h: int, s_o: int, l: int
) -> tuple[float, float]:
    """(p_y, p_n) for a pending loss at the given state."""
    return _propagators_from_table(table, s_h, s_o, l, LOSS_IDX)


def win_propagators(
    table: PolicyTable, s_h: int, s_o: int, l: int
) -> tuple[float, float]:
    """(p_y, p_n) for a pending win at the given state."""
    return _propagators_from_table(table, s_h, s_o, l, WIN_IDX)


def no_luck_continuation(
    table: PolicyTable, s_h: int, s_o: int, l: int, outcome: RoundOutcome
) -> float:
    """p_n alone, valid at any luck level including l = 0."""
    if not table.in_bounds(s_h, s_o, l):
        raise TableBoundsError(f"state ({s_h}, {s_o}, {l}) outside table")
    out = WIN_IDX if outcome is RoundOutcome.WIN else LOSS_IDX
    p_n, _ = _propagators(
        _table_lookup(table), table.rho_w, table.rho_l, 0.0, s_h, s_o, l, out,
        with_gamble=False,
    )
    return p_n


def query(
    table: PolicyTable, s_h: int, s_o: int, l: int, outcome: RoundOutcome | None = None
) -> ValueQuery:
    """Look up the optimal play at a state.

    With an outcome, the value is conditional on that round result;
    without one it is the pre-round value.  The no-luck baseline is the
    same table's l = 0 entry so the comparison is self-consistent.
    """
    if outcome is RoundOutcome.DRAW:
        raise ValueError("a drawn round admits no luck decision")
    if not table.in_bounds(s_h, s_o, l):
        raise TableBoundsError(f"state ({s_h}, {s_o}, {l}) outside table")
    on_win = bool(table.use_luck[s_h, s_o, l, WIN_IDX])
    on_loss = bool(table.use_luck[s_h, s_o, l, LOSS_IDX])
    if outcome is None:
        value = table.pre_round_value(s_h, s_o, l)
        baseline = table.pre_round_value(s_h, s_o, 0)
    else:
        out = WIN_IDX if outcome is RoundOutcome.WIN else LOSS_IDX
        value = float(table.value[s_h, s_o, l, out])
        baseline = float(table.value[s_h, s_o, 0, out])
    return ValueQuery(
        s_h=s_h,
        s_o=s_o,
        l=l,
        outcome=outcome,
        value=value,
        no_luck_value=baseline,
        use_luck_on_win=on_win,
        use_luck_on_loss=on_loss,
        strategy_code=table.strategy_code(s_h, s_o, l),
    )


@dataclass(frozen=True)
class TablePolicy:
    """Engine policy backed by a solved table."""

    table: PolicyTable

    def decide(self, state: GameState, outcome: RoundOutcome) -> bool:
        if state.l < 1:
            return False
        if not self.table.in_bounds(state.s_h, state.s_o, state.l):
            raise TableBoundsError(f"state {state} outside table")
        out = WIN_IDX if outcome is RoundOutcome.WIN else LOSS_IDX
        return bool(self.table.use_luck[state.s_h, state.s_o, state.l, out])

    def decide_batch(self, s_h, s_o, luck, is_win, is_loss):
        cfg = self.table.config
        h = np.clip(s_h, 1, cfg.max_s_h)
        o = np.clip(s_o, 1, cfg.max_s_o)
        l = np.clip(luck, 0, cfg.max_l)
        on_win = self.table.use_luck[h, o, l, WIN_IDX]
        on_loss = self.table.use_luck[h, o, l, LOSS_IDX]
        return ((is_win & on_win) | (is_loss & on_loss)) & (luck >= 1)


# ---------------------------------------------------------------------------
# Policy structure analysis


@dataclass(frozen=True)
class SliceBands:
    """Machine-checkable band features of one luck layer's code grid."""

    l: int
    codes: np.ndarray = field(repr=False)
    luck_cells: int
    hero2_loss_use: int
    hero2_cells: int
    strategy3_by_opp_mod4: tuple[int, int, int, int]
    offense_by_opp_mod4: tuple[int, int, int, int]
    loss_use_even_hero: int
    loss_use_odd_hero: int

    @property
    def hero2_loss_use_fraction(self) -> float:
        return self.hero2_loss_use / self.hero2_cells

    @property
    def strategy3_mod4_fraction(self) -> float:
        """Share of strategy-3 cells sitting at s_o = 3 + 4n."""
        total = sum(self.strategy3_by_opp_mod4)
        return self.strategy3_by_opp_mod4[3] / total if total else 0.0


@dataclass(frozen=True)
class PolicyStructureReport:
    dk: int
    slices: list[SliceBands]

    def layer(self, l: int) -> SliceBands:
        return self.slices[l]


def analyze_policy_bands(table: PolicyTable) -> PolicyStructureReport:
    """Extract the banded structure of the optimal policy per luck layer."""
    cfg = table.config
    slices = []
    for l in range(cfg.max_l + 1):
        codes = table.strategy_codes(l)[1:, 1:]
        on_win = table.use_luck[1:, 1:, l, WIN_IDX]
        on_loss = table.use_luck[1:, 1:, l, LOSS_IDX]
        opp_mod4 = (np.arange(1, cfg.max_s_o + 1) % 4)[None, :]
        hero_odd = (np.arange(1, cfg.max_s_h + 1) % 2)[:, None].astype(bool)
        strategy3 = codes == 3
        slices.append(
            SliceBands(
                l=l,
                codes=codes,
                luck_cells=int((codes != 0).sum()),
                hero2_loss_use=int(on_loss[1, :].sum()),
                hero2_cells=cfg.max_s_o,
                strategy3_by_opp_mod4=tuple(
                    int((strategy3 & (opp_mod4 == m)).sum()) for m in range(4)
                ),
                offense_by_opp_mod4=tuple(
                    int((on_win & (opp_mod4 == m)).sum()) for m in range(4)
                ),
                loss_use_even_hero=int(on_loss[~hero_odd[:, 0], :].sum()),
                loss_use_odd_hero=int(on_loss[hero_odd[:, 0], :].sum()),
            )
        )
    return PolicyStructureReport(dk=cfg.dk, slices=slices)


# ---------------------------------------------------------------------------
# Serialization and caching

_TEXT_HEADER = "# ff-policy-table v{version}"
_TEXT_META = (
    "# dk={dk} max_s_h={max_s_h} max_s_o={max_s_o} max_l={max_l}"
    " tie_epsilon={tie_epsilon:.17g} renormalized={renormalized}"
)
_TEXT_COLUMNS = "s_h\ts_o\tl\tuse_on_win\tuse_on_loss\tv_p"


def policy_table_to_text(table: PolicyTable) -> str:
    """Versioned text export: one record per state with both actions and
    the pre-round value at 17 significant digits."""
    cfg = table.config
    lines = [
        _TEXT_HEADER.format(version=POLICY_TABLE_FORMAT_VERSION),
        _TEXT_META.format(
            dk=cfg.dk,
            max_s_h=cfg.max_s_h,
            max_s_o=cfg.max_s_o,
            max_l=cfg.max_l,
            tie_epsilon=cfg.tie_epsilon,
            renormalized=int(cfg.renormalize_draws),
        ),
        _TEXT_COLUMNS,
    ]
    for h in range(1, cfg.max_s_h + 1):
        for o in range(1, cfg.max_s_o + 1):
            for l in range(cfg.max_l + 1):
                lines.append(
                    "%d\t%d\t%d\t%d\t%d\t%.17g"
                    % (
                        h,
                        o,
                        l,
                        int(table.use_luck[h, o, l, WIN_IDX]),
                        int(table.use_luck[h, o, l, LOSS_IDX]),
                        table.pre_round_value(h, o, l),
                    )
                )
    return "\n".join(lines) + "\n"


def write_policy_table_text(table: PolicyTable, path) -> None:
    Path(path).write_text(policy_table_to_text(table))


def parse_policy_table_text(text: str) -> tuple[dict, list[tuple]]:
    """Parse the text export back into (meta, records).

    Records are (s_h, s_o, l, use_on_win, use_on_loss, v_p); floats
    round-trip exactly at 17 significant digits, so re-emitting parsed
    records reproduces the file byte for byte.
    """
    lines = text.splitlines()
    if len(lines) < 3:
        raise ValueError("truncated policy table text")
    header = lines[0]
    expected = _TEXT_HEADER.format(version=POLICY_TABLE_FORMAT_VERSION)
    if header != expected:
        raise ValueError(f"unsupported header {header!r}")
    meta: dict = {}
    for token in lines[1].lstrip("# ").split():
        key, raw = token.split("=", 1)
        meta[key] = float(raw) if key == "tie_epsilon" else int(raw)
    if lines[2] != _TEXT_COLUMNS:
        raise ValueError("unexpected column line")
    records = []
    for line in lines[3:]:
        h, o, l, on_win, on_loss, v_p = line.split("\t")
        records.append(
            (int(h), int(o), int(l), int(on_win), int(on_loss), float(v_p))
        )
    return meta, records


def read_policy_table_text(path) -> tuple[dict, list[tuple]]:
    return parse_policy_table_text(Path(path).read_text())


def save_policy_table(table: PolicyTable, path) -> None:
    """Lossless binary cache with the full per-outcome arrays."""
    cfg = table.config
    meta = {
        "format_version": POLICY_TABLE_FORMAT_VERSION,
        "dk": cfg.dk,
        "max_s_h": cfg.max_s_h,
        "max_s_o": cfg.max_s_o,
        "max_l": cfg.max_l,
        "tie_epsilon": cfg.tie_epsilon,
        "renormalize_draws": cfg.renormalize_draws,
    }
    np.savez_compressed(
        path,
        meta=np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8),
        value=table.value,
        use_luck=table.use_luck,
    )


def load_policy_table(path) -> PolicyTable:
    with np.load(path) as data:
        meta = json.loads(bytes(data["meta"]))
        if meta.get("format_version") != POLICY_TABLE_FORMAT_VERSION:
            raise ValueError(
                f"cache format {meta.get('format_version')!r} not supported"
            )
        config = SolverConfig(
            dk=meta["dk"],
            max_s_h=meta["max_s_h"],
            max_s_o=meta["max_s_o"],
            max_l=meta["max_l"],
            tie_epsilon=meta["tie_epsilon"],
            renormalize_draws=meta["renormalize_draws"],
        )
        value = data["value"]
        use_luck = data["use_luck"]
    value.setflags(write=False)
    use_luck.setflags(write=False)
    odds = round_odds(config.dk)
    rho_w, rho_l = _effective_odds(odds, config.renormalize_draws)
    return PolicyTable(
        config=config,
        odds=odds,
        rho_w=rho_w,
        rho_l=rho_l,
        value=value,
        use_luck=use_luck,
    )


class TableStore:
    """Per-dk table cache: memory first, then disk, then a fresh solve.

    The cache directory comes from the FF_ADVISOR_CACHE environment
    variable unless given explicitly; stale or unreadable cache files
    are ignored and re-solved.
    """

    def __init__(self, cache_dir=None):
        if cache_dir is None:
            cache_dir = os.environ.get(CACHE_ENV_VAR)
        if cache_dir is None:
            cache_dir = Path.home() / ".cache" / "ff-advisor"
        self.cache_dir = Path(cache_dir)
        self._tables: dict[tuple, PolicyTable] = {}

    def _cache_path(self, config: SolverConfig) -> Path:
        name = (
            f"policy-dk{config.dk}-h{config.max_s_h}-o{config.max_s_o}"
            f"-l{config.max_l}-v{POLICY_TABLE_FORMAT_VERSION}.npz"
        )
        return self.cache_dir / name

    def get(
        self, dk: int, max_s_h: int = 24, max_s_o: int = 24, max_l: int = 12
    ) -> PolicyTable:
        config = SolverConfig(dk=dk, max_s_h=max_s_h, max_s_o=max_s_o, max_l=max_l)
        key = (dk, max_s_h, max_s_o, max_l)
        if key in self._tables:
            return self._tables[key]
        path = self._cache_path(config)
        if path.exists():
            try:
                table = load_policy_table(path)
            except (ValueError, OSError, KeyError):
                table = None
            if table is not None and table.config == config:
                self._tables[key] = table
                return table
        table = solve(config)
        try:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            save_policy_table(table, path)
        except OSError:
            pass
        self._tables[key] = table
        return table
