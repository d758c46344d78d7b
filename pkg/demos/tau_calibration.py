"""Calibrate the luck-threshold tau used by the heuristic strategies.

Each heuristic keeps gambling while luck is at least tau.  Sweeping tau
over a grid of matchups and counting, per cell, which tau wins most
often yields a histogram whose mode is the natural default.  The
expected-damage breakeven (luck 6 offensive, luck 7 defensive) shows up
clearly.

Run: python3 demos/tau_calibration.py  (about a minute)
"""

from ffcombat import DEFAULT_RECIPE_TAUS, SweepSpec, heuristic_recipe, tau_sweep

spec = SweepSpec(
    dk_values=(-2, 0, 2),
    hero_staminas=(8, 16, 24),
    opp_staminas=(8, 16, 24),
    luck_values=(4, 8, 12),
    strategies=((1, 0), (2, 0), (3, 0)),
    trials=2 * 10**4,
    master_seed=11,
)
print("sweeping tau = 2..12 for each strategy over", len(list(spec.cells())), "cells")
result = tau_sweep(spec, strategy_ids=(1, 2, 3), taus=tuple(range(2, 13)))

print(result.to_text_table())
for sid, name in [(1, "either outcome"), (2, "loss only"), (3, "win only")]:
    counts = result.histograms[sid]
    print(f"strategy {sid} ({name}): best-tau histogram")
    for tau in range(2, 13):
        n = counts.get(tau, 0)
        print(f"  tau {tau:2d}  {'#' * n}{' ' if n else ''}({n})")
    print(f"  mode: {result.mode(sid)}")
    print()

print("shipped defaults:", DEFAULT_RECIPE_TAUS)
print()
print("rule-of-thumb pick for a few matchups (strategy id, tau):")
for dk, s_h, s_o, l in [(-2, 22, 21, 12), (0, 10, 10, 9), (2, 12, 4, 5)]:
    sid = heuristic_recipe(dk, s_h, s_o, l)
    tau = DEFAULT_RECIPE_TAUS[sid]
    print(f"  dk={dk:+d} staminas {s_h}/{s_o} luck {l:2d} -> strategy {sid}, tau {tau}")
