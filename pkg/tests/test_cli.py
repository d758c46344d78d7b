"""Command line behaviour: exit codes, printed values, and written files
all tie back to the library layer."""

import numpy as np
import pytest

from ffcombat.analytic import NoLuckInstance, vp_no_luck
from ffcombat.cli import RECOMMENDATION_TEXT, build_parser, main
from ffcombat.dice import round_odds
from ffcombat.engine import GameState, heuristic_policy
from ffcombat.montecarlo import evaluate_strategy
from ffcombat.solver import (
    TablePolicy,
    TableStore,
    load_policy_table,
    policy_table_to_text,
    query,
    read_policy_table_text,
)


@pytest.fixture(scope="module")
def cache(tmp_path_factory):
    return tmp_path_factory.mktemp("cli-cache")


def run(cache, *argv):
    return main(["--cache-dir", str(cache), *map(str, argv)])


class TestParser:
    def test_program_name(self):
        assert build_parser().prog == "ff-advisor"

    def test_no_command_exits_with_usage_error(self):
        with pytest.raises(SystemExit) as excinfo:
            main([])
        assert excinfo.value.code == 2

    def test_unknown_flag_exits_with_usage_error(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["solve", "--dk", "0", "--no-such-flag"])
        assert excinfo.value.code == 2


class TestSolve:
    def test_writes_a_parseable_table(self, cache, tmp_path, capsys):
        out = tmp_path / "table.tsv"
        rc = run(cache, "solve", "--dk", -2, "--output", out)
        captured = capsys.readouterr()
        assert rc == 0
        assert f"wrote policy table to {out}" in captured.out
        assert "pre-round v_p: min" in captured.out
        meta, records = read_policy_table_text(out)
        assert meta["dk"] == -2
        assert len(records) == 24 * 24 * 13

    def test_recorded_values_match_the_solved_table(self, cache, tmp_path):
        out = tmp_path / "table.tsv"
        assert run(cache, "solve", "--dk", -2, "--output", out) == 0
        table = TableStore(cache_dir=cache).get(dk=-2)
        _, records = read_policy_table_text(out)
        by_state = {record[:3]: record for record in records}
        probe = by_state[(22, 21, 12)]
        assert probe[5] == table.pre_round_value(22, 21, 12)
        assert probe[3] == int(table.use_luck[22, 21, 12, 1])
        assert probe[4] == int(table.use_luck[22, 21, 12, 0])

    def test_default_output_name_carries_the_skill_difference(
        self, cache, tmp_path, monkeypatch, capsys
    ):
        monkeypatch.chdir(tmp_path)
        assert run(cache, "solve", "--dk", -2) == 0
        assert (tmp_path / "policy-dk-2.tsv").exists()

    def test_luckless_table_matches_the_closed_form(self, cache, tmp_path):
        out = tmp_path / "flat.tsv"
        rc = run(
            cache, "solve", "--dk", 2,
            "--max-s-h", 8, "--max-s-o", 8, "--max-l", 0,
            "--output", out,
        )
        assert rc == 0
        odds = round_odds(2)
        _, records = read_policy_table_text(out)
        for h, o, l, _, _, v_p in records:
            assert l == 0
            exact = vp_no_luck(NoLuckInstance.from_staminas(odds, h, o))
            assert v_p == pytest.approx(exact, abs=1e-10)

    def test_hopeless_matchup_is_all_zero(self, cache, tmp_path, capsys):
        out = tmp_path / "zero.tsv"
        rc = run(
            cache, "solve", "--dk", -12,
            "--max-s-h", 6, "--max-s-o", 6, "--max-l", 3,
            "--output", out,
        )
        captured = capsys.readouterr()
        assert rc == 0
        assert "pre-round v_p: min 0 max 0" in captured.out
        _, records = read_policy_table_text(out)
        assert all(record[5] == 0.0 for record in records)


class TestAdvise:
    def test_underdog_duel_prints_table_values(self, cache, capsys):
        rc = run(
            cache, "advise",
            "--hero-skill", 12, "--hero-stamina", 24, "--hero-luck", 12,
            "--opp-skill", 15, "--opp-stamina", 22,
        )
        captured = capsys.readouterr()
        assert rc == 0
        looked = query(TableStore(cache_dir=cache).get(dk=-3), 24, 22, 12)
        expected_text = RECOMMENDATION_TEXT[
            (looked.use_luck_on_win, looked.use_luck_on_loss)
        ]
        assert "state: s_h=24 s_o=22 l=12 (skill difference -3)" in captured.out
        assert f"optimal v_p: {looked.value:.17g}" in captured.out
        assert f"no-luck v_p: {looked.no_luck_value:.17g}" in captured.out
        assert (
            f"recommendation: {expected_text} "
            f"(strategy code {looked.strategy_code})" in captured.out
        )

    def test_what_if_lines_cover_both_actions(self, cache, capsys):
        run(
            cache, "advise",
            "--hero-skill", 10, "--hero-stamina", 10, "--hero-luck", 5,
            "--opp-skill", 10, "--opp-stamina", 10,
        )
        captured = capsys.readouterr()
        for fragment in (
            "what-if win   no luck:",
            "what-if win   use luck:",
            "what-if draw  no luck:",
            "what-if loss  no luck:",
            "what-if loss  use luck:",
        ):
            assert fragment in captured.out

    def test_luckless_hero_is_told_to_never_gamble(self, cache, capsys):
        rc = run(
            cache, "advise",
            "--hero-skill", 10, "--hero-stamina", 10, "--hero-luck", 0,
            "--opp-skill", 10, "--opp-stamina", 10,
        )
        captured = capsys.readouterr()
        assert rc == 0
        assert "recommendation: never use luck (strategy code 0)" in captured.out
        assert captured.out.count("what-if") == 3
        assert "use luck:" not in captured.out


class TestSimulate:
    def test_heuristic_run_is_reproducible(self, cache, capsys):
        rc = run(
            cache, "simulate", "--dk", 0, "--s-h", 8, "--s-o", 8, "--luck", 8,
            "--strategy", 1, "--tau", 6, "--trials", 4000, "--seed", 7,
        )
        captured = capsys.readouterr()
        assert rc == 0
        state = GameState(s_h=8, s_o=8, l=8, dk=0)
        estimate = evaluate_strategy(state, heuristic_policy(1, tau=6), 4000, 7)
        assert (
            f"strategy 1, tau 6: v_p {estimate.estimate:.6g} "
            f"+- {estimate.stderr:.3g} ({estimate.wins}/4000 wins)"
            in captured.out
        )

    def test_optimal_strategy_uses_the_solved_table(self, cache, capsys):
        rc = run(
            cache, "simulate", "--dk", 0, "--s-h", 8, "--s-o", 8, "--luck", 8,
            "--strategy", "optimal", "--trials", 4000, "--seed", 7,
        )
        captured = capsys.readouterr()
        assert rc == 0
        policy = TablePolicy(TableStore(cache_dir=cache).get(dk=0))
        state = GameState(s_h=8, s_o=8, l=8, dk=0)
        estimate = evaluate_strategy(state, policy, 4000, 7)
        assert f"optimal: v_p {estimate.estimate:.6g}" in captured.out

    def test_zero_trials_is_an_error(self, cache, capsys):
        rc = run(
            cache, "simulate", "--dk", 0, "--s-h", 8, "--s-o", 8, "--luck", 8,
            "--trials", 0,
        )
        captured = capsys.readouterr()
        assert rc == 1
        assert captured.err.startswith("error:")


class TestSweep:
    def test_report_file_and_summary_line(self, cache, tmp_path, capsys):
        out = tmp_path / "sweep.tsv"
        rc = run(
            cache, "sweep", "--dk", 0, "--hero-staminas", 6,
            "--opp-staminas", 6, "--lucks", 0, 8,
            "--strategies", 1, "3:7", "--trials", 2000, "--seed", 5,
            "--output", out,
        )
        captured = capsys.readouterr()
        assert rc == 0
        assert "cells with a significant best strategy:" in captured.out
        assert f"wrote report to {out}" in captured.out
        lines = out.read_text().splitlines()
        assert lines[0] == (
            "dk\ts_h\ts_o\tl\tstrategy\ttau\ttrials\twins\testimate\tstderr\tbest"
        )
        assert len(lines) == 1 + 2 * 3

    def test_plot_data_grids(self, cache, tmp_path, capsys):
        plot = tmp_path / "grids.txt"
        rc = run(
            cache, "sweep", "--dk", 0, "--hero-staminas", 6,
            "--opp-staminas", 6, "--lucks", 8,
            "--strategies", 1, "--trials", 2000,
            "--plot-data", plot,
        )
        assert rc == 0
        assert plot.read_text().startswith("# dk=0 l=8 rows=s_h cols=s_o")

    def test_tau_sweep_prints_a_mode_per_strategy(self, cache, capsys):
        rc = run(
            cache, "sweep", "--dk", 0, "--hero-staminas", 8,
            "--opp-staminas", 8, "--lucks", 8,
            "--trials", 2000, "--seed", 5,
            "--tau-sweep", "--tau-min", 5, "--tau-max", 7,
        )
        captured = capsys.readouterr()
        assert rc == 0
        for sid in (1, 2, 3):
            assert f"strategy {sid}: mode tau " in captured.out

    def test_bad_strategy_token_is_an_error(self, cache, capsys):
        rc = run(
            cache, "sweep", "--dk", 0, "--hero-staminas", 6,
            "--opp-staminas", 6, "--lucks", 8, "--strategies", "1:x",
        )
        captured = capsys.readouterr()
        assert rc == 1
        assert captured.err.startswith("error:")


class TestExport:
    def test_text_export_matches_the_renderer(self, cache, tmp_path):
        out = tmp_path / "export.tsv"
        rc = run(
            cache, "export", "--dk", 0,
            "--max-s-h", 8, "--max-s-o", 8, "--max-l", 4,
            "--output", out,
        )
        assert rc == 0
        table = TableStore(cache_dir=cache).get(dk=0, max_s_h=8, max_s_o=8, max_l=4)
        assert out.read_text() == policy_table_to_text(table)

    def test_npz_export_round_trips(self, cache, tmp_path, capsys):
        out = tmp_path / "export.npz"
        rc = run(
            cache, "export", "--dk", 0,
            "--max-s-h", 8, "--max-s-o", 8, "--max-l", 4,
            "--format", "npz", "--output", out,
        )
        captured = capsys.readouterr()
        assert rc == 0
        assert f"wrote npz table to {out}" in captured.out
        reloaded = load_policy_table(out)
        table = TableStore(cache_dir=cache).get(dk=0, max_s_h=8, max_s_o=8, max_l=4)
        assert reloaded.config == table.config
        assert np.array_equal(reloaded.value, table.value)
        assert np.array_equal(reloaded.use_luck, table.use_luck)
