"""Luck-use analysis for skill/stamina/luck dice combat.

The package splits into layers that build on each other:

- ``dice``: exact round and luck-test probabilities as fractions.
- ``analytic``: closed forms for fixed policies (no luck, constant-q
  offensive luck) plus slow independent oracles used in tests.
- ``engine``: single-combat rules, transcripts and heuristic policies.
- ``solver``: backward induction over the full state space, policy
  tables with queries, structure analysis and import/export.
- ``montecarlo``: vectorised batch simulation, strategy sweeps and the
  tau calibration study.
- ``session`` / ``service`` / ``cli``: live combat tracking, the HTTP
  API and the command line front end.
"""

from .analytic import (
    ConstantLuckInstance,
    NoLuckInstance,
    loss_budget,
    luck_thresholds,
    vp_constant_luck_offensive,
    vp_no_luck,
)
from .dice import DiceModel, RoundOdds, build_dice_model, luck_success, round_odds
from .engine import (
    GameState,
    HeuristicPolicy,
    RoundOutcome,
    RoundRecord,
    apply_round_outcome,
    heuristic_policy,
    play_combat,
)
from .montecarlo import (
    DEFAULT_RECIPE_TAUS,
    StrategyEstimate,
    SweepSpec,
    best_strategy_map,
    evaluate_strategy,
    heuristic_recipe,
    recipe_policy,
    simulate_batch,
    tau_sweep,
)
from .session import (
    AdviceResponse,
    CombatantStats,
    CombatSession,
    IllegalTransition,
)
from .solver import (
    PolicyTable,
    SolverConfig,
    TablePolicy,
    TableStore,
    analyze_policy_bands,
    load_policy_table,
    query,
    save_policy_table,
    solve,
    write_policy_table_text,
)

__version__ = "1.0.0"

__all__ = [
    "AdviceResponse",
    "CombatSession",
    "CombatantStats",
    "ConstantLuckInstance",
    "DEFAULT_RECIPE_TAUS",
    "DiceModel",
    "GameState",
    "HeuristicPolicy",
    "IllegalTransition",
    "NoLuckInstance",
    "PolicyTable",
    "RoundOdds",
    "RoundOutcome",
    "RoundRecord",
    "SolverConfig",
    "StrategyEstimate",
    "SweepSpec",
    "TablePolicy",
    "TableStore",
    "analyze_policy_bands",
    "apply_round_outcome",
    "best_strategy_map",
    "build_dice_model",
    "evaluate_strategy",
    "heuristic_policy",
    "heuristic_recipe",
    "load_policy_table",
    "loss_budget",
    "luck_success",
    "luck_thresholds",
    "play_combat",
    "query",
    "recipe_policy",
    "round_odds",
    "save_policy_table",
    "simulate_batch",
    "solve",
    "tau_sweep",
    "vp_constant_luck_offensive",
    "vp_no_luck",
    "write_policy_table_text",
]
