"""Solve optimal luck policies by backward induction and inspect them.

Prints the flagship matchups (how much optimal luck play is worth), then
renders one luck layer of the policy as a strategy-code grid so the
banded structure is visible: 1 = use luck on either outcome, 2 = only on
a lost round, 3 = only on a won round, . = never.

Run: python3 demos/solve_and_inspect.py
"""

from ffcombat import SolverConfig, analyze_policy_bands, query, solve

print("solving dk = -2 and dk = -4 tables (24 x 24 staminas, luck 0..12)")
tables = {dk: solve(SolverConfig(dk=dk)) for dk in (-2, -4)}

print()
print("what optimal luck use is worth against a stronger opponent")
for dk, s_h, s_o, label in [
    (-2, 22, 21, "skill 10 hero vs skill 12 opponent"),
    (-4, 22, 19, "skill 8 hero vs skill 12 opponent"),
]:
    looked = query(tables[dk], s_h, s_o, 12)
    fold = looked.value / looked.no_luck_value
    print(f"  {label}, staminas {s_h}/{s_o}, luck 12:")
    print(f"    optimal v_p {looked.value:.6g}   luckless {looked.no_luck_value:.6g}")
    print(f"    a {fold:.0f}-fold improvement from luck alone")

table = tables[-4]
l = 4
print()
print(f"strategy codes at dk = -4, luck {l} (rows s_h 1..24 up, cols s_o 1..24)")
codes = table.strategy_codes(l)[1:, 1:]
for s_h in range(24, 0, -1):
    row = "".join(
        "." if c == 0 else str(int(c)) for c in codes[s_h - 1]
    )
    print(f"  {s_h:2d}  {row}")
print("       " + "".join(str(o % 10) for o in range(1, 25)))

report = analyze_policy_bands(table)
bands = report.layer(l)
print()
print(
    f"offensive-only cells concentrate where the opponent dies to a 4-point"
    f"\nhit but not a 2-point one: {bands.strategy3_mod4_fraction:.0%} of"
    f" strategy-3 cells sit at s_o = 3 + 4n"
)
hero2 = analyze_policy_bands(tables[-2]).layer(12)
print(
    f"at luck 12 a hero on 2 stamina gambles defensively in "
    f"{hero2.hero2_loss_use_fraction:.0%} of dk = -2 cells: any plain loss kills"
)
