"""Exact probability primitives for the combat dice.

Each combatant rolls two six-sided dice per attack round, so the round is
decided by the difference of two 2d6 sums.  Everything here is kept as
exact rationals (``fractions.Fraction``); downstream modules convert to
float at their own boundaries.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

# Point masses (x 1296) of 2d6 - 2d6 on [-10, 10]; OEIS A063260.
ATTACK_DIFF_COEFFS = (
    1, 4, 10, 20, 35, 56, 80, 104, 125, 140, 146,
    140, 125, 104, 80, 56, 35, 20, 10, 4, 1,
)

# Ways to roll each 2d6 sum 2..12 (out of 36).
TWO_DICE_COUNTS = {s: 6 - abs(s - 7) for s in range(2, 13)}


@dataclass(frozen=True)
class DiceModel:
    """Exact pmf of the attack-roll difference and the 2d6 cumulative table.

    ``x_pmf[i]`` is P(difference = i) for i in [-10, 10]; ``q_table[l]`` is
    P(2d6 <= l) for l in [0, 13] (clamped outside, see :func:`luck_success`).
    """

    x_pmf: dict[int, Fraction]
    q_table: dict[int, Fraction]

    def luck_success(self, luck: int) -> Fraction:
        """P(a 2d6 test rolls <= ``luck``), clamped to [0, 1]."""
        if luck < 2:
            return Fraction(0)
        if luck >= 12:
            return Fraction(1)
        return self.q_table[luck]


@dataclass(frozen=True)
class RoundOdds:
    """Win/draw/loss probabilities for one attack round at fixed skill difference."""

    dk: int
    p_w: Fraction
    p_d: Fraction
    p_l: Fraction

    @property
    def rho_w(self) -> Fraction:
        """Win probability conditioned on the round not being a draw."""
        return self.p_w / (1 - self.p_d)

    @property
    def rho_l(self) -> Fraction:
        """Loss probability conditioned on the round not being a draw."""
        return self.p_l / (1 - self.p_d)


@lru_cache(maxsize=1)
def build_dice_model() -> DiceModel:
    """Build the exact dice tables; deterministic and cached."""
    x_pmf = {
        i: Fraction(ATTACK_DIFF_COEFFS[i + 10], 1296) for i in range(-10, 11)
    }
    q_table = {}
    running = Fraction(0)
    for s in range(0, 14):
        running += Fraction(TWO_DICE_COUNTS.get(s, 0), 36)
        q_table[s] = running
    return DiceModel(x_pmf=x_pmf, q_table=q_table)


@lru_cache(maxsize=None)
def round_odds(dk: int) -> RoundOdds:
    """Round win/draw/loss odds for hero skill minus opponent skill = ``dk``.

    The hero wins a round when their attack roll exceeds the opponent's,
    i.e. when the roll difference is above ``-dk``.
    """
    model = build_dice_model()
    p_w = sum(
        (model.x_pmf[j] for j in range(max(-dk + 1, -10), 11)), Fraction(0)
    )
    p_d = model.x_pmf.get(-dk, Fraction(0))
    p_l = 1 - p_w - p_d
    return RoundOdds(dk=dk, p_w=p_w, p_d=p_d, p_l=p_l)


def luck_success(luck: int) -> Fraction:
    """P(2d6 <= ``luck``); the success probability of a luck test."""
    return build_dice_model().luck_success(luck)


def enumerate_attack_diff_counts() -> dict[int, int]:
    """Brute-force count of all 6^4 four-die outcomes, for verification."""
    counts: dict[int, int] = {}
    for d1, d2, d3, d4 in product(range(1, 7), repeat=4):
        x = d1 + d2 - d3 - d4
        counts[x] = counts.get(x, 0) + 1
    return counts
