"""Walk through the exact dice layer: round odds by skill difference
and the luck-test success ladder.

Run: python3 demos/dice_odds.py
"""

from ffcombat import build_dice_model, luck_success, round_odds

model = build_dice_model()

print("pmf of (hero 2d6) - (opponent 2d6), exact over 1296")
for diff in range(-10, 11):
    mass = model.x_pmf[diff]
    bar = "#" * round(120 * mass)
    print(f"  {diff:+3d}  {str(mass):>9s}  {bar}")

print()
print("round odds by skill difference dk = k_hero - k_opponent")
print("  dk    p_win      p_draw     p_loss     rho_win (draws renormalized)")
for dk in range(-6, 7):
    odds = round_odds(dk)
    print(
        f"  {dk:+3d}   {float(odds.p_w):.6f}   {float(odds.p_d):.6f}   "
        f"{float(odds.p_l):.6f}   {float(odds.rho_w):.6f}"
    )

print()
print("luck test: success iff 2d6 <= current luck, then luck drops by 1")
print("  l    q(l)        exact")
for l in range(1, 13):
    q = luck_success(l)
    print(f"  {l:2d}   {float(q):.6f}    {q}")

print()
print("a test at luck 7 wins more often than it loses; below that the")
print("odds of the gamble itself turn against you.")
