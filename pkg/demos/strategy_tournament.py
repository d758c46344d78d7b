"""Monte Carlo tournament: simple luck heuristics against the solved
optimum over a grid of matchups.

All strategies in a cell share the same dice (common random numbers), so
differences between estimates are much sharper than their individual
error bars suggest.

Run: python3 demos/strategy_tournament.py
"""

from ffcombat import (
    GameState,
    SolverConfig,
    SweepSpec,
    TablePolicy,
    best_strategy_map,
    evaluate_strategy,
    heuristic_policy,
    solve,
)

TRIALS = 2 * 10**4

print("underdog duel: dk = -2, staminas 22/21, luck 12,", TRIALS, "trials")
state = GameState(s_h=22, s_o=21, l=12, dk=-2)
table = solve(SolverConfig(dk=-2))
entries = [
    ("never use luck", heuristic_policy(0)),
    ("either outcome, tau 6", heuristic_policy(1, tau=6)),
    ("loss only, tau 7", heuristic_policy(2, tau=7)),
    ("win only, tau 6", heuristic_policy(3, tau=6)),
    ("solved optimum", TablePolicy(table)),
]
for label, policy in entries:
    est = evaluate_strategy(state, policy, TRIALS, master_seed=17)
    print(f"  {label:24s} v_p {est.estimate:.5f} +- {est.stderr:.5f}")
truth = table.pre_round_value(22, 21, 12)
print(f"  {'exact optimum':24s} v_p {truth:.5f}")

print()
print("best heuristic per cell (blank cells: nothing beats never-use")
print("by more than twice the pooled standard error)")
spec = SweepSpec(
    dk_values=(-2, 0),
    hero_staminas=(4, 8, 12, 16, 20, 24),
    opp_staminas=(4, 8, 12, 16, 20, 24),
    luck_values=(6, 12),
    strategies=((1, 6), (2, 7), (3, 6)),
    trials=TRIALS,
    master_seed=17,
)
report = best_strategy_map(spec)
print(report.plot_grids())
