"""Command line front end: solve and export policy tables, advise on a
live state, run simulations and sweeps, serve the HTTP API."""

import argparse
import sys

from .engine import GameState, heuristic_policy
from .montecarlo import (
    SweepSpec,
    best_strategy_map,
    evaluate_strategy,
    tau_sweep,
)
from .session import CombatantStats, CombatSession
from .solver import (
    SolverConfig,
    TablePolicy,
    TableStore,
    save_policy_table,
    write_policy_table_text,
)

RECOMMENDATION_TEXT = {
    (True, True): "use luck on either outcome",
    (False, True): "use luck only on a lost round",
    (True, False): "use luck only on a won round",
    (False, False): "never use luck",
}


def _store(args) -> TableStore:
    return TableStore(cache_dir=args.cache_dir)


def _probability(x: float) -> str:
    return format(x, ".17g")


def cmd_solve(args) -> int:
    table = _store(args).get(
        dk=args.dk, max_s_h=args.max_s_h, max_s_o=args.max_s_o, max_l=args.max_l
    )
    output = args.output or f"policy-dk{args.dk}.tsv"
    write_policy_table_text(table, output)
    pre = [
        table.pre_round_value(h, o, l)
        for h in range(1, args.max_s_h + 1)
        for o in range(1, args.max_s_o + 1)
        for l in range(args.max_l + 1)
    ]
    print(f"wrote policy table to {output}")
    print(
        f"states: {args.max_s_h} x {args.max_s_o} staminas, "
        f"luck 0..{args.max_l} ({len(pre)} states)"
    )
    print(f"pre-round v_p: min {_probability(min(pre))} max {_probability(max(pre))}")
    return 0


def cmd_advise(args) -> int:
    hero = CombatantStats(
        skill=args.hero_skill, stamina=args.hero_stamina, luck=args.hero_luck
    )
    opponent = CombatantStats(skill=args.opp_skill, stamina=args.opp_stamina)
    session = CombatSession.start(hero, opponent, _store(args))
    advice = session.advice()
    state = session.state
    print(
        f"state: s_h={state.s_h} s_o={state.s_o} l={state.l} "
        f"(skill difference {state.dk})"
    )
    print(f"optimal v_p: {_probability(advice.v_p)}")
    print(f"no-luck v_p: {_probability(advice.v_p_no_luck)}")
    print(
        "recommendation: "
        + RECOMMENDATION_TEXT[(advice.use_luck_on_win, advice.use_luck_on_loss)]
        + f" (strategy code {advice.strategy_code})"
    )
    for what_if in advice.what_ifs:
        decision = "use luck" if what_if.use_luck else "no luck"
        print(
            f"what-if {what_if.outcome.value:5s} {decision}: "
            f"{_probability(what_if.v_p)}"
        )
    return 0


def cmd_simulate(args) -> int:
    state = GameState(s_h=args.s_h, s_o=args.s_o, l=args.luck, dk=args.dk)
    if args.strategy == "optimal":
        table = _store(args).get(
            dk=args.dk,
            max_s_h=max(24, args.s_h),
            max_s_o=max(24, args.s_o),
            max_l=max(12, args.luck),
        )
        policy = TablePolicy(table)
        label = "optimal"
    else:
        policy = heuristic_policy(int(args.strategy), tau=args.tau)
        label = f"strategy {args.strategy}, tau {args.tau}"
    estimate = evaluate_strategy(state, policy, args.trials, args.seed)
    print(
        f"{label}: v_p {estimate.estimate:.6g} +- {estimate.stderr:.3g} "
        f"({estimate.wins}/{estimate.trials} wins)"
    )
    return 0


def _parse_strategies(tokens) -> tuple:
    strategies = []
    for token in tokens:
        sid, _, tau = token.partition(":")
        strategies.append((int(sid), int(tau) if tau else 0))
    return tuple(strategies)


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        dk_values=tuple(args.dk),
        hero_staminas=tuple(args.hero_staminas),
        opp_staminas=tuple(args.opp_staminas),
        luck_values=tuple(args.lucks),
        strategies=_parse_strategies(args.strategies),
        trials=args.trials,
        master_seed=args.seed,
    )
    if args.tau_sweep:
        result = tau_sweep(
            spec,
            strategy_ids=tuple(sid for sid, _ in spec.strategies if sid != 0),
            taus=tuple(range(args.tau_min, args.tau_max + 1)),
        )
        text = result.to_text_table()
        for sid in sorted(result.histograms):
            print(f"strategy {sid}: mode tau {result.mode(sid)}")
    else:
        report = best_strategy_map(spec)
        text = report.to_text_table()
        if args.plot_data:
            with open(args.plot_data, "w") as handle:
                handle.write(report.plot_grids())
            print(f"wrote plot data to {args.plot_data}")
        named = sum(cell.best is not None for cell in report.cells)
        print(f"cells with a significant best strategy: {named}/{len(report.cells)}")
    if args.output:
        with open(args.output, "w") as handle:
            handle.write(text)
        print(f"wrote report to {args.output}")
    else:
        print(text, end="")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(_store(args)), host=args.host, port=args.port)
    return 0


def cmd_export(args) -> int:
    table = _store(args).get(
        dk=args.dk, max_s_h=args.max_s_h, max_s_o=args.max_s_o, max_l=args.max_l
    )
    if args.format == "text":
        write_policy_table_text(table, args.output)
    else:
        save_policy_table(table, args.output)
    print(f"wrote {args.format} table to {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ff-advisor",
        description="Solve, simulate and advise on luck use in dice combat.",
    )
    parser.add_argument(
        "--cache-dir",
        default=None,
        help="policy table cache directory (default: FF_ADVISOR_CACHE or ~/.cache/ff-advisor)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="solve a policy table and export it")
    solve.add_argument("--dk", type=int, required=True)
    solve.add_argument("--max-s-h", type=int, default=24)
    solve.add_argument("--max-s-o", type=int, default=24)
    solve.add_argument("--max-l", type=int, default=12)
    solve.add_argument("--output", default=None)
    solve.set_defaults(func=cmd_solve)

    advise = commands.add_parser("advise", help="optimal play for one state")
    advise.add_argument("--hero-skill", type=int, required=True)
    advise.add_argument("--hero-stamina", type=int, required=True)
    advise.add_argument("--hero-luck", type=int, required=True)
    advise.add_argument("--opp-skill", type=int, required=True)
    advise.add_argument("--opp-stamina", type=int, required=True)
    advise.set_defaults(func=cmd_advise)

    simulate = commands.add_parser("simulate", help="estimate one strategy at one state")
    simulate.add_argument("--dk", type=int, required=True)
    simulate.add_argument("--s-h", type=int, required=True)
    simulate.add_argument("--s-o", type=int, required=True)
    simulate.add_argument("--luck", type=int, required=True)
    simulate.add_argument(
        "--strategy",
        default="0",
        help="heuristic id 0-8, or 'optimal' for the solved table policy",
    )
    simulate.add_argument("--tau", type=int, default=0)
    simulate.add_argument("--trials", type=int, default=10**5)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.set_defaults(func=cmd_simulate)

    sweep = commands.add_parser("sweep", help="strategy comparison over a state grid")
    sweep.add_argument("--dk", type=int, nargs="+", required=True)
    sweep.add_argument("--hero-staminas", type=int, nargs="+", required=True)
    sweep.add_argument("--opp-staminas", type=int, nargs="+", required=True)
    sweep.add_argument("--lucks", type=int, nargs="+", required=True)
    sweep.add_argument(
        "--strategies",
        nargs="+",
        default=["1", "2", "3"],
        help="strategy ids, each optionally id:tau",
    )
    sweep.add_argument("--trials", type=int, default=10**5)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--output", default=None)
    sweep.add_argument("--plot-data", default=None)
    sweep.add_argument("--tau-sweep", action="store_true")
    sweep.add_argument("--tau-min", type=int, default=2)
    sweep.add_argument("--tau-max", type=int, default=12)
    sweep.set_defaults(func=cmd_sweep)

    serve = commands.add_parser("serve", help="run the HTTP advisor service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8765)
    serve.set_defaults(func=cmd_serve)

    export = commands.add_parser("export", help="write a table in text or binary form")
    export.add_argument("--dk", type=int, required=True)
    export.add_argument("--max-s-h", type=int, default=24)
    export.add_argument("--max-s-o", type=int, default=24)
    export.add_argument("--max-l", type=int, default=12)
    export.add_argument("--format", choices=("text", "npz"), default="text")
    export.add_argument("--output", required=True)
    export.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
