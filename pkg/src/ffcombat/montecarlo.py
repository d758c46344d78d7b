"""Batch simulation for heuristic-strategy evaluation and tau sweeps.

Trials run as numpy column vectors under counter-based Philox streams
keyed by (master seed, cell), never by strategy: strategies and tau
variants evaluated on the same cell therefore see common random
numbers, which sharpens their comparison.  Tau variants share one
batch (a variant axis) so their round draws are identical by
construction, and every round consumes a fixed slice of the stream,
so an estimate never depends on what else shared its batch; finished
columns are compacted away once most trials are done.
"""

from __future__ import annotations

import math
import zlib
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .dice import round_odds
from .engine import GameState, HeuristicPolicy

_MAX_ROUNDS = 100_000


def _stream(master_seed: int, key: tuple) -> np.random.Generator:
    # SeedSequence wants nonnegative words; dk may be negative and
    # stream tags may be strings.
    words = [int(master_seed) & 0xFFFFFFFF]
    for x in key:
        words.append(zlib.crc32(x.encode()) if isinstance(x, str) else int(x) & 0xFFFFFFFF)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(words)))


def simulate_batch(
    dk: int,
    s_h: int,
    s_o: int,
    luck: int,
    policy,
    trials: int,
    master_seed: int,
    stream_key: tuple = (),
    n_variants: int = 1,
    luck_depletes: bool = True,
    fixed_q: float | None = None,
) -> np.ndarray:
    """Win counts per policy variant over ``trials`` common trials.

    The policy's batch decision may broadcast a variant axis (for tau
    sweeps); all variants of a trial consume the same per-round draws.
    With ``fixed_q`` the luck test ignores the luck score and succeeds
    with that probability, and ``luck_depletes=False`` keeps the score
    constant: together they realize the constant-luck model.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    odds = round_odds(dk)
    p_w = float(odds.p_w)
    p_d = float(odds.p_d)
    rng = _stream(master_seed, (dk, s_h, s_o, luck, *stream_key))

    shape = (n_variants, trials)
    heroes = np.full(shape, s_h, dtype=np.int16)
    opponents = np.full(shape, s_o, dtype=np.int16)
    lucks = np.full(shape, luck, dtype=np.int16)
    alive = np.ones(shape, dtype=bool)
    wins = np.zeros(n_variants, dtype=np.int64)
    # Original trial ids of the surviving columns; None until the
    # first compaction.  Each round consumes a fixed amount of the
    # stream over all original trials, so a variant's result never
    # depends on what else shares its batch.
    cols = None

    for _ in range(_MAX_ROUNDS):
        outcome_all = rng.random(trials)
        if fixed_q is None:
            test_all = rng.integers(1, 7, size=trials) + rng.integers(
                1, 7, size=trials
            )
        else:
            test_all = rng.random(trials) < fixed_q
        if cols is not None:
            outcome_all = outcome_all[cols]
            test_all = test_all[cols]
        if fixed_q is None:
            success = test_all[None, :] <= lucks
        else:
            success = np.broadcast_to(test_all[None, :], lucks.shape)

        is_win = (outcome_all < p_w)[None, :] & alive
        is_loss = (outcome_all >= p_w + p_d)[None, :] & alive
        use = policy.decide_batch(heroes, opponents, lucks, is_win, is_loss)

        opponents -= np.where(
            is_win & use, np.where(success, 4, 1), np.where(is_win, 2, 0)
        ).astype(np.int16)
        heroes -= np.where(
            is_loss & use, np.where(success, 1, 3), np.where(is_loss, 2, 0)
        ).astype(np.int16)
        if luck_depletes:
            lucks -= use
        still_alive = alive & (heroes > 0) & (opponents > 0)
        finished_now = alive & ~still_alive
        wins += (finished_now & (opponents <= 0)).sum(axis=1)
        alive = still_alive
        if not alive.any():
            break
        live_columns = alive.any(axis=0)
        if live_columns.mean() < 0.5:
            cols = live_columns.nonzero()[0] if cols is None else cols[live_columns]
            heroes = heroes[:, live_columns]
            opponents = opponents[:, live_columns]
            lucks = lucks[:, live_columns]
            alive = alive[:, live_columns]
    else:
        raise RuntimeError("combat batch failed to terminate")
    return wins


@dataclass(frozen=True)
class StrategyEstimate:
    trials: int
    wins: int

    @property
    def estimate(self) -> float:
        return self.wins / self.trials

    @property
    def stderr(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1.0 - p) / self.trials)


def evaluate_strategy(
    initial: GameState,
    strategy,
    trials: int,
    master_seed: int = 0,
    *,
    luck_depletes: bool = True,
    fixed_q: float | None = None,
) -> StrategyEstimate:
    """Estimate the victory probability of one policy from one state."""
    if not initial.ongoing:
        raise ValueError("initial state already decided")
    wins = simulate_batch(
        initial.dk,
        initial.s_h,
        initial.s_o,
        initial.l,
        strategy,
        trials,
        master_seed,
        luck_depletes=luck_depletes,
        fixed_q=fixed_q,
    )
    return StrategyEstimate(trials=trials, wins=int(wins[0]))


@dataclass(frozen=True)
class SweepSpec:
    """Grid of initial states and the strategy set to compare on it."""

    dk_values: tuple
    hero_staminas: tuple
    opp_staminas: tuple
    luck_values: tuple
    strategies: tuple  # (strategy_id, tau) pairs
    trials: int = 10**5
    master_seed: int = 0

    def __post_init__(self):
        if not (
            self.dk_values
            and self.hero_staminas
            and self.opp_staminas
            and self.luck_values
        ):
            raise ValueError("empty grid")
        if self.trials < 1:
            raise ValueError("need at least one trial per cell")

    def cells(self):
        for dk in self.dk_values:
            for s_h in self.hero_staminas:
                for s_o in self.opp_staminas:
                    for l in self.luck_values:
                        yield dk, s_h, s_o, l


@dataclass(frozen=True)
class CellResult:
    dk: int
    s_h: int
    s_o: int
    l: int
    estimates: dict  # (strategy_id, tau) -> StrategyEstimate; (0, 0) is the baseline
    best: tuple | None

    @property
    def baseline(self) -> StrategyEstimate:
        return self.estimates[(0, 0)]


@dataclass(frozen=True)
class SimulationReport:
    spec: SweepSpec
    cells: list = field(repr=False)

    def cell(self, dk, s_h, s_o, l) -> CellResult:
        for c in self.cells:
            if (c.dk, c.s_h, c.s_o, c.l) == (dk, s_h, s_o, l):
                return c
        raise KeyError((dk, s_h, s_o, l))

    def to_text_table(self) -> str:
        """TSV: one row per (cell, strategy) plus the best-id column."""
        lines = ["dk\ts_h\ts_o\tl\tstrategy\ttau\ttrials\twins\testimate\tstderr\tbest"]
        for c in self.cells:
            for (sid, tau), est in sorted(c.estimates.items()):
                lines.append(
                    "%d\t%d\t%d\t%d\t%d\t%d\t%d\t%d\t%.6g\t%.3g\t%s"
                    % (
                        c.dk,
                        c.s_h,
                        c.s_o,
                        c.l,
                        sid,
                        tau,
                        est.trials,
                        est.wins,
                        est.estimate,
                        est.stderr,
                        "*" if c.best == (sid, tau) else "",
                    )
                )
        return "\n".join(lines) + "\n"

    def plot_grids(self) -> str:
        """Figure-layout emission: per (dk, l) slice, an s_h x s_o grid
        of winning strategy ids ('.' where none is significant)."""
        blocks = []
        heroes = sorted(set(self.spec.hero_staminas))
        opponents = sorted(set(self.spec.opp_staminas))
        for dk in self.spec.dk_values:
            for l in self.spec.luck_values:
                lines = [f"# dk={dk} l={l} rows=s_h cols=s_o"]
                lines.append("s_h\\s_o\t" + "\t".join(str(o) for o in opponents))
                for s_h in heroes:
                    row = [str(s_h)]
                    for s_o in opponents:
                        best = self.cell(dk, s_h, s_o, l).best
                        row.append("." if best is None else str(best[0]))
                    lines.append("\t".join(row))
                blocks.append("\n".join(lines))
        return "\n\n".join(blocks) + "\n"


def best_strategy_map(spec: SweepSpec) -> SimulationReport:
    """Evaluate every strategy on every cell under common random numbers.

    A cell reports a best strategy only when its estimate beats the
    never-use baseline by more than 2 pooled standard errors; at l = 0
    all strategies replay the baseline's trials exactly, so no cell can
    clear the gate there.
    """
    strategies = list(spec.strategies)
    if (0, 0) not in strategies:
        strategies = [(0, 0)] + strategies
    cells = []
    for dk, s_h, s_o, l in spec.cells():
        estimates = {}
        for sid, tau in strategies:
            policy = HeuristicPolicy(strategy_id=sid, tau=tau)
            wins = simulate_batch(
                dk, s_h, s_o, l, policy, spec.trials, spec.master_seed
            )
            estimates[(sid, tau)] = StrategyEstimate(
                trials=spec.trials, wins=int(wins[0])
            )
        baseline = estimates[(0, 0)]
        best = None
        for key in strategies:
            if key == (0, 0):
                continue
            est = estimates[key]
            gate = 2.0 * math.hypot(est.stderr, baseline.stderr)
            if est.estimate > baseline.estimate + gate:
                if best is None or est.estimate > estimates[best].estimate:
                    best = key
        cells.append(
            CellResult(dk=dk, s_h=s_h, s_o=s_o, l=l, estimates=estimates, best=best)
        )
    return SimulationReport(spec=spec, cells=cells)


@dataclass(frozen=True)
class TauSweepResult:
    taus: tuple
    histograms: dict  # strategy_id -> Counter of winning tau per cell
    best_taus: dict = field(repr=False)  # (strategy_id, cell) -> tau

    def mode(self, strategy_id: int) -> int:
        histogram = self.histograms[strategy_id]
        top = max(histogram.values())
        return min(tau for tau, n in histogram.items() if n == top)

    def to_text_table(self) -> str:
        lines = ["strategy\ttau\tcells_won"]
        for sid, histogram in sorted(self.histograms.items()):
            for tau in self.taus:
                lines.append("%d\t%d\t%d" % (sid, tau, histogram.get(tau, 0)))
        return "\n".join(lines) + "\n"


def tau_sweep(
    grid_spec: SweepSpec,
    strategy_ids: tuple = (1, 2, 3),
    taus: tuple = tuple(range(2, 13)),
) -> TauSweepResult:
    """Find the best luck threshold per cell and strategy.

    All tau variants of a cell run as one batch on shared draws, so the
    argmax over tau compares like with like; ties go to the lowest tau.
    """
    taus = tuple(taus)
    tau_column = np.array(taus, dtype=np.int16)[:, None]
    histograms = {sid: Counter() for sid in strategy_ids}
    best_taus = {}
    for cell in grid_spec.cells():
        dk, s_h, s_o, l = cell
        for sid in strategy_ids:
            policy = HeuristicPolicy(strategy_id=sid, tau=tau_column)
            wins = simulate_batch(
                dk,
                s_h,
                s_o,
                l,
                policy,
                grid_spec.trials,
                grid_spec.master_seed,
                stream_key=("tau",),
                n_variants=len(taus),
            )
            winner = taus[int(np.argmax(wins))]
            histograms[sid][winner] += 1
            best_taus[(sid, cell)] = winner
    return TauSweepResult(taus=taus, histograms=histograms, best_taus=best_taus)


def heuristic_recipe(
    dk: int,
    s_h: int,
    s_o: int,
    l: int,
    *,
    high_luck: int = 9,
    low_opp_stamina: int = 4,
) -> int:
    """Pick a heuristic strategy id from the initial statistics.

    Offensive gambling (strategy 3) is the default.  With plenty of
    luck or a nearly beaten opponent, gamble on everything (1).  A
    stronger hero wins rounds anyway, so save luck for defense (2); the
    same applies against a 2-stamina opponent, where offensive luck at
    best wastes a killing blow, and that rule outranks the strategy-1
    switch.
    """
    if s_o <= 2 and dk < 0:
        return 2
    if l >= high_luck or s_o <= low_opp_stamina:
        return 1
    if dk > 0:
        return 2
    return 3


# A luck test pays off on offense above q = 1/3 (first met at l = 6)
# and on defense above q = 1/2 (first met at l = 7); strategies stop
# testing below the threshold that covers their riskier half.
DEFAULT_RECIPE_TAUS = {1: 6, 2: 7, 3: 6}


def recipe_policy(
    dk: int,
    s_h: int,
    s_o: int,
    l: int,
    *,
    high_luck: int = 9,
    low_opp_stamina: int = 4,
) -> HeuristicPolicy:
    """Recipe strategy with its breakeven luck threshold attached."""
    sid = heuristic_recipe(
        dk, s_h, s_o, l, high_luck=high_luck, low_opp_stamina=low_opp_stamina
    )
    return HeuristicPolicy(strategy_id=sid, tau=DEFAULT_RECIPE_TAUS[sid])
