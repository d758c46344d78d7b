"""Closed-form victory probabilities for restricted luck policies.

Two regimes admit closed forms: a game where luck is never used (a
plain race between two absorbing stamina counters) and a game where
luck is always spent offensively with a fixed, non-depleting success
chance.  Both are checked against brute-force absorbing-chain oracles
that live in this module as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .dice import RoundOdds, build_dice_model

SERIES_REL_TOL = 1e-15
SERIES_MAX_TERMS = 10**6


class DegenerateOddsError(ValueError):
    """The round can only draw (p_w + p_l = 0), so the game never ends."""


class SeriesConvergenceError(ValueError):
    """The hypergeometric series cannot converge for the given argument."""


def loss_budget(stamina: int) -> int:
    """Number of 2-point hits that reduce ``stamina`` to zero or below.

    Stamina 2n and 2n - 1 need the same number of hits, which is what
    makes odd and even staminas functionally equivalent in the no-luck
    game.
    """
    return (stamina + 1) // 2


@dataclass(frozen=True)
class NoLuckInstance:
    """Inputs of the no-luck closed form, in loss-budget coordinates."""

    odds: RoundOdds
    sigma_h: int
    sigma_o: int

    @classmethod
    def from_staminas(cls, odds: RoundOdds, s_h: int, s_o: int) -> "NoLuckInstance":
        return cls(odds=odds, sigma_h=loss_budget(s_h), sigma_o=loss_budget(s_o))


@dataclass(frozen=True)
class ConstantLuckInstance:
    """Inputs of the fixed-q offensive-luck closed form.

    Opponent stamina stays in raw points because won rounds deal 1 or 4
    damage; only the hero side collapses to a loss budget.
    """

    odds: RoundOdds
    q: float
    s_o: int
    sigma_h: int

    @classmethod
    def from_staminas(
        cls, odds: RoundOdds, q: float, s_h: int, s_o: int
    ) -> "ConstantLuckInstance":
        return cls(odds=odds, q=float(q), s_o=s_o, sigma_h=loss_budget(s_h))


def history_count(wins: int, losses: int, draws: int) -> int:
    """Count orderings of W/L/D round outcomes that end in a W.

    The final round is a W; the remaining ``wins - 1`` Ws interleave
    freely with the Ls, and the Ds drop into any of the remaining
    positions.
    """
    if wins < 1 or losses < 0 or draws < 0:
        raise ValueError("need wins >= 1 and nonnegative losses and draws")
    return math.comb(wins - 1 + losses, losses) * math.comb(
        wins - 1 + losses + draws, draws
    )


def gauss_2f1_series(
    a: int,
    b: int,
    c: int,
    z: float,
    *,
    rel_tol: float = SERIES_REL_TOL,
    max_terms: int = SERIES_MAX_TERMS,
) -> float:
    """Sum the Gauss hypergeometric series 2F1(a, b; c; z) for a = 1.

    Term-by-term summation with the a = 1 recurrence
    term <- term * (b + d) / (c + d) * z, which converges for any
    0 <= z < 1 (slowly as z approaches 1, hence the generous term cap).
    """
    if a != 1:
        raise ValueError("only a = 1 is supported")
    if c < 1:
        raise ValueError("need c >= 1")
    if z < 0.0:
        raise ValueError("need z >= 0")
    if z >= 1.0:
        raise SeriesConvergenceError(f"series diverges for z = {z!r}")
    total = 1.0
    term = 1.0
    for d in range(max_terms):
        term *= (b + d) / (c + d) * z
        total += term
        if term < rel_tol * total:
            return total
    raise SeriesConvergenceError(
        f"no convergence within {max_terms} terms at z = {z!r}"
    )


def _float_odds(odds: RoundOdds) -> tuple[float, float, float]:
    p_w = float(odds.p_w)
    p_d = float(odds.p_d)
    p_l = float(odds.p_l)
    if p_w + p_l == 0.0:
        raise DegenerateOddsError("rounds always draw; no victory probability")
    return p_w, p_d, p_l


def vp_no_luck(inst: NoLuckInstance) -> float:
    """Victory probability when neither side ever spends luck.

    Closed form of the loss-budget race: the hero wins unless the
    opponent lands sigma_h two-point hits first.
    """
    if inst.sigma_h < 1 or inst.sigma_o < 1:
        raise ValueError("need sigma_h >= 1 and sigma_o >= 1")
    p_w, _, p_l = _float_odds(inst.odds)
    if p_w == 0.0:
        return 0.0
    if p_l == 0.0:
        return 1.0
    rho_w = float(inst.odds.rho_w)
    rho_l = float(inst.odds.rho_l)
    series = gauss_2f1_series(1, inst.sigma_h + inst.sigma_o, inst.sigma_h + 1, rho_l)
    tail = (
        rho_w**inst.sigma_o
        * rho_l**inst.sigma_h
        * math.comb(inst.sigma_h + inst.sigma_o - 1, inst.sigma_h)
        * series
    )
    return min(max(1.0 - tail, 0.0), 1.0)


def _loss_draw_sum(m: int, sigma_h: int, p_d: float, p_l: float) -> float:
    # Losses capped at sigma_h - 1; the draw sum over all counts
    # collapses to (1 - p_d) ** -(m + l + 1).
    return sum(
        math.comb(m + l, l) * p_l**l * (1.0 - p_d) ** -(m + l + 1)
        for l in range(sigma_h)
    )


def _win_prefix_probability(
    n: int, p_f: float, q: float, sigma_h: int, p_w: float, p_d: float, p_l: float
) -> float:
    """P_n: probability of dealing n points in won prefix rounds, then a
    final won round of probability p_f.

    The prefix mixes k four-point wins with n - 4k one-point wins, so k
    runs up to n // 4 and the prefix holds m = n - 3k won rounds.
    """
    if n < 0 or p_f == 0.0:
        return 0.0
    total = 0.0
    for k in range(n // 4 + 1):
        m = n - 3 * k
        weight = math.comb(m, k) * (p_w * q) ** k * (p_w * (1.0 - q)) ** (n - 4 * k)
        if weight == 0.0:
            continue
        total += weight * _loss_draw_sum(m, sigma_h, p_d, p_l)
    return p_f * total


def vp_constant_luck_offensive(inst: ConstantLuckInstance) -> float:
    """Victory probability when every won round gambles luck at fixed q.

    A won round deals 4 points on a passed test, 1 on a failed one.
    The assembly sums over the stamina the opponent holds when the
    final blow lands: 1 to 4 points for a passed final test, exactly 1
    for a failed one.
    """
    if inst.s_o < 1 or inst.sigma_h < 1:
        raise ValueError("need s_o >= 1 and sigma_h >= 1")
    if not 0.0 <= inst.q <= 1.0:
        raise ValueError("need 0 <= q <= 1")
    p_w, p_d, p_l = _float_odds(inst.odds)
    q = inst.q
    finals = (
        (inst.s_o - 4, p_w * q),
        (inst.s_o - 3, p_w * q),
        (inst.s_o - 2, p_w * q),
        (inst.s_o - 1, p_w * q),
        (inst.s_o - 1, p_w * (1.0 - q)),
    )
    total = sum(
        _win_prefix_probability(n, p_f, q, inst.sigma_h, p_w, p_d, p_l)
        for n, p_f in finals
    )
    return min(max(total, 0.0), 1.0)


def offensive_expected_damage(q):
    """Expected damage dealt by a won round that gambles luck."""
    return 4 * q + (1 - q)


def defensive_expected_damage(q):
    """Expected damage taken from a lost round that gambles luck."""
    return q + 3 * (1 - q)


@dataclass(frozen=True)
class LuckThresholds:
    """Break-even test success rates and the luck scores that clear them."""

    offensive_breakeven_q: Fraction
    defensive_breakeven_q: Fraction
    offensive_min_luck: int
    defensive_min_luck: int


def luck_thresholds() -> LuckThresholds:
    """Where gambling beats the flat 2-point outcome in expectation.

    Offensive: 4q + (1 - q) > 2 iff q > 1/3.  Defensive: q + 3(1 - q) < 2
    iff q > 1/2.  The luck scores are the smallest with a 2d6 success
    chance above each break-even.
    """
    model = build_dice_model()
    offensive_q = Fraction(1, 3)
    defensive_q = Fraction(1, 2)
    offensive_luck = min(
        l for l in range(2, 13) if model.luck_success(l) > offensive_q
    )
    defensive_luck = min(
        l for l in range(2, 13) if model.luck_success(l) > defensive_q
    )
    return LuckThresholds(
        offensive_breakeven_q=offensive_q,
        defensive_breakeven_q=defensive_q,
        offensive_min_luck=offensive_luck,
        defensive_min_luck=defensive_luck,
    )


def race_victory_table(
    odds: RoundOdds,
    max_s_h: int,
    max_s_o: int,
    *,
    win_damage: int = 2,
    loss_damage: int = 2,
) -> dict[tuple[int, int], float]:
    """Absorbing-chain victory probabilities by back-substitution.

    Independent of the closed forms: walks states so each entry reads
    only already-solved entries or the absorbing boundaries.
    """
    p_w, _, p_l = _float_odds(odds)
    denom = p_w + p_l
    rho_w = p_w / denom
    rho_l = p_l / denom
    values: dict[tuple[int, int], float] = {}
    for h in range(1, max_s_h + 1):
        for o in range(1, max_s_o + 1):
            after_win = 1.0 if o - win_damage <= 0 else values[(h, o - win_damage)]
            after_loss = 0.0 if h - loss_damage <= 0 else values[(h - loss_damage, o)]
            values[(h, o)] = rho_w * after_win + rho_l * after_loss
    return values


def vp_no_luck_oracle(odds: RoundOdds, s_h: int, s_o: int) -> float:
    """Brute-force check value for :func:`vp_no_luck`."""
    if s_h < 1 or s_o < 1:
        raise ValueError("need live staminas")
    return race_victory_table(odds, s_h, s_o)[(s_h, s_o)]


def constant_luck_oracle(odds: RoundOdds, q: float, s_h: int, s_o: int) -> float:
    """Absorbing-chain solve of the fixed-q offensive-luck game.

    Brute-force check value for :func:`vp_constant_luck_offensive`.
    """
    if s_h < 1 or s_o < 1:
        raise ValueError("need live staminas")
    p_w, _, p_l = _float_odds(odds)
    denom = p_w + p_l
    rho_w = p_w / denom
    rho_l = p_l / denom
    q = float(q)
    values: dict[tuple[int, int], float] = {}
    for h in range(1, s_h + 1):
        for o in range(1, s_o + 1):
            big = 1.0 if o - 4 <= 0 else values[(h, o - 4)]
            small = 1.0 if o - 1 <= 0 else values[(h, o - 1)]
            after_loss = 0.0 if h - 2 <= 0 else values[(h - 2, o)]
            values[(h, o)] = rho_w * (q * big + (1.0 - q) * small) + rho_l * after_loss
    return values[(s_h, s_o)]
