"""Closed-form victory probabilities for fixed policies.

Two formulas with independent slow oracles: the luckless race, and
offensive luck at a frozen success probability q (luck that never
depletes).  The demo prints both against their oracles so the agreement
is visible, then shows the expected-damage breakeven points that anchor
the heuristic thresholds.

Run: python3 demos/closed_forms.py
"""

from ffcombat import (
    ConstantLuckInstance,
    NoLuckInstance,
    luck_success,
    luck_thresholds,
    round_odds,
    vp_constant_luck_offensive,
    vp_no_luck,
)
from ffcombat.analytic import constant_luck_oracle, vp_no_luck_oracle

print("no-luck victory probability, evenly matched skills (dk = 0)")
print("  s_h \\ s_o     6        12        18        24")
odds = round_odds(0)
for s_h in (6, 12, 18, 24):
    row = [
        vp_no_luck(NoLuckInstance.from_staminas(odds, s_h, s_o))
        for s_o in (6, 12, 18, 24)
    ]
    print("  {:8d}  ".format(s_h) + "  ".join(f"{v:.6f}" for v in row))

print()
print("closed form vs absorbing-chain oracle at a few awkward cells")
for dk, s_h, s_o in [(-4, 22, 19), (-1, 7, 16), (3, 5, 24)]:
    o = round_odds(dk)
    closed = vp_no_luck(NoLuckInstance.from_staminas(o, s_h, s_o))
    chain = vp_no_luck_oracle(o, s_h, s_o)
    print(f"  dk={dk:+d} ({s_h},{s_o}):  {closed:.12e}  vs  {chain:.12e}")

print()
print("offensive luck at fixed q, dk = -2, staminas 12/12")
print("  q source   q         with luck   luckless    oracle")
base = vp_no_luck(NoLuckInstance.from_staminas(round_odds(-2), 12, 12))
for l in (7, 9, 11):
    q = luck_success(l)
    inst = ConstantLuckInstance.from_staminas(round_odds(-2), q, 12, 12)
    lucky = vp_constant_luck_offensive(inst)
    oracle = constant_luck_oracle(round_odds(-2), float(q), 12, 12)
    print(f"  q({l:2d})      {float(q):.4f}    {lucky:.6f}    {base:.6f}    {oracle:.6f}")

print()
th = luck_thresholds()
print("expected-damage breakeven of a single gamble")
print(
    f"  offensive: worth it when q > {th.offensive_breakeven_q} "
    f"-> luck >= {th.offensive_min_luck}"
)
print(
    f"  defensive: worth it when q > {th.defensive_breakeven_q} "
    f"-> luck >= {th.defensive_min_luck}"
)
