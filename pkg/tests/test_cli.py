from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from faircake.cli import main
from faircake.protocol import predicted_cut_count


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, [str(a) for a in args])


class TestRun:
    def test_dc_secret_seeded_all_choices(self, runner, tmp_path):
        out = tmp_path / "artifacts"
        result = invoke(
            runner, "run", "--mode", "dc-secret", "--seed", 7, "--n", 4,
            "--choice", "all", "--out", out,
        )
        assert result.exit_code == 0, result.output
        csv = (out / "allocation.csv").read_text()
        # 5 allocations of 4 agents each, plus the header
        assert len(csv.strip().splitlines()) == 1 + 5 * 4
        assert (out / "pieces.json").exists()
        assert (out / "tree.json").exists()

    def test_even_paz_queries_everyone(self, runner, tmp_path):
        out = tmp_path / "ep"
        result = invoke(
            runner, "run", "--mode", "even-paz", "--seed", 7, "--n", 4, "--out", out,
        )
        assert result.exit_code == 0, result.output
        pieces = json.loads((out / "pieces.json").read_text())["pieces"]
        assert len(pieces) == 4
        transcript = (out / "transcript.txt").read_text().splitlines()
        queried = {line.split()[0] for line in transcript}
        assert queried == {"agent=1", "agent=2", "agent=3", "agent=4"}

    def test_malformed_valuation_file_exit_2(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"agents": [{"breakpoints": ["0", "1"], "heights": ["2"]}]}))
        result = invoke(runner, "run", "--file", bad)
        assert result.exit_code == 2
        assert "mass" in result.output

    def test_single_choice(self, runner, tmp_path):
        out = tmp_path / "one"
        result = invoke(
            runner, "run", "--seed", 3, "--n", 3, "--choice", 2, "--out", out,
        )
        assert result.exit_code == 0
        csv = (out / "allocation.csv").read_text().strip().splitlines()
        assert len(csv) == 1 + 3
        assert all(line.startswith("2,") for line in csv[1:])

    def test_seed_and_file_conflict(self, runner, tmp_path):
        f = tmp_path / "v.json"
        f.write_text("{}")
        result = invoke(runner, "run", "--file", f, "--seed", 1, "--n", 2)
        assert result.exit_code == 2

    def test_determinism_byte_identical(self, runner, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            result = invoke(runner, "run", "--seed", 11, "--n", 5, "--out", out)
            assert result.exit_code == 0
        for name in ("pieces.json", "allocation.csv", "transcript.txt", "tree.json"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


class TestGenVerify:
    def test_round_trip(self, runner, tmp_path):
        vals = tmp_path / "vals.json"
        out = tmp_path / "run"
        assert invoke(runner, "gen", "--seed", 5, "--n", 4, "-o", vals).exit_code == 0
        assert invoke(runner, "run", "--file", vals, "--out", out).exit_code == 0
        result = invoke(
            runner, "verify",
            "--pieces", out / "pieces.json",
            "--allocation", out / "allocation.csv",
            "--valuations", vals,
        )
        assert result.exit_code == 0, result.output

    def test_tampered_allocation_names_agent(self, runner, tmp_path):
        vals = tmp_path / "vals.json"
        out = tmp_path / "run"
        invoke(runner, "gen", "--seed", 9, "--n", 3, "-o", vals)
        invoke(runner, "run", "--file", vals, "--out", out)
        csv_path = out / "allocation.csv"
        lines = csv_path.read_text().strip().splitlines()
        # swap the pieces of the first two agents under choice 1 so one of
        # them lands beneath its threshold
        header, rows = lines[0], lines[1:]
        first = rows[0].split(",")
        second = rows[1].split(",")
        first[2], second[2] = second[2], first[2]
        rows[0], rows[1] = ",".join(first), ",".join(second)
        csv_path.write_text("\n".join([header] + rows) + "\n")
        result = invoke(
            runner, "verify",
            "--pieces", out / "pieces.json",
            "--allocation", csv_path,
            "--valuations", vals,
        )
        assert result.exit_code == 1
        assert "agent" in result.output

    def test_rationals_round_trip_bit_exactly(self, runner, tmp_path):
        vals = tmp_path / "vals.json"
        invoke(runner, "gen", "--seed", 13, "--n", 2, "--segments", 6, "-o", vals)
        from faircake.measures import load_valuations

        agents, _ = load_valuations(vals.read_text())
        text2 = vals.read_text()
        from faircake.measures import dump_valuations

        assert dump_valuations(agents) == text2

    def test_verify_parse_error_exit_2(self, runner, tmp_path):
        vals = tmp_path / "vals.json"
        pieces = tmp_path / "pieces.json"
        alloc = tmp_path / "allocation.csv"
        vals.write_text("not json")
        pieces.write_text("{}")
        alloc.write_text("bogus")
        result = invoke(
            runner, "verify", "--pieces", pieces, "--allocation", alloc,
            "--valuations", vals,
        )
        assert result.exit_code == 2


class TestBench:
    def test_n1_single_cut(self, runner):
        result = invoke(runner, "bench", "--n-max", 1, "--trials", 1)
        assert result.exit_code == 0
        row = result.output.strip().splitlines()[1].split(",")
        assert row[2] == "1"  # one cut

    def test_counts_match_recurrence_across_trials(self, runner):
        result = invoke(runner, "bench", "--n-max", 12, "--trials", 3, "--seed", 2)
        assert result.exit_code == 0, result.output
        for line in result.output.strip().splitlines()[1:]:
            n, trial, cuts, predicted, evals, total, bound, ok = line.split(",")
            assert cuts == predicted == str(predicted_cut_count(int(n)))
            assert int(total) <= int(bound)
            assert ok == "true"
