"""Tests for the becorder command line"""

import json

import pytest
from click.testing import CliRunner

from becorder.cli import cli
from becorder.render import read_ppm


@pytest.fixture
def runner():
    return CliRunner()


class TestCompare:
    def test_greater(self, runner):
        result = runner.invoke(cli, ["compare", "011", "10"])
        assert result.exit_code == 0, result.stdout
        assert result.stdout.startswith("Greater")
        assert "division points" in result.stdout

    def test_incomparable_prints_witness(self, runner):
        result = runner.invoke(cli, ["compare", "100001", "011000"])
        assert result.exit_code == 0
        assert result.stdout.startswith("Incomparable")
        assert "witness" in result.stdout

    def test_avg(self, runner):
        result = runner.invoke(cli, ["compare", "1", "1", "--method", "avg"])
        assert result.exit_code == 0
        assert result.stdout.strip() == "Equivalent (2/3 = 2/3)"

    def test_beta_shorthand(self, runner):
        result = runner.invoke(cli, ["compare", "10", "01", "--beta", "1.5"])
        assert result.stdout.strip() == "Greater (3/2 > 1)"

    def test_rules(self, runner):
        result = runner.invoke(cli, ["compare", "0011", "1000", "--method", "rules:F"])
        assert result.exit_code == 0
        assert result.stdout.startswith("Greater via")

    def test_rules_chain_in_json(self, runner):
        result = runner.invoke(cli, ["compare", "0011", "1000", "--method", "rules:ABF", "--json"])
        steps = json.loads(result.stdout)["evidence"]["provenance"]
        assert steps[0]["lhs"] == "0011"
        assert steps[-1]["rhs"] == "1000"
        assert all(step["tag"] != "trans" for step in steps)

    def test_dump(self, runner):
        result = runner.invoke(cli, ["compare", "1", "0", "--dump"])
        assert result.exit_code == 0, result.stdout
        dump = json.loads(result.stdout)
        assert dump["alpha"] == {"bitstring": "1", "degree": 2, "poly": ["0", "2", "-1"]}
        assert dump["gamma"] == {"bitstring": "0", "degree": 2, "poly": ["0", "0", "1"]}
        assert dump["delta"] == ["0", "2", "-2"]

    def test_dump_rs_f_difference(self, runner):
        result = runner.invoke(cli, ["compare", "011", "10", "--dump"])
        dump = json.loads(result.stdout)
        # x^3 (x - 1)^2 (4 + x - 2x^2 - x^3)
        assert [int(c) for c in dump["delta"]] == [0, 0, 0, 4, -7, 0, 4, 0, -1]
        assert dump["alpha"]["degree"] == 8
        assert dump["gamma"]["degree"] == 4

    def test_json(self, runner):
        result = runner.invoke(cli, ["compare", "10", "01", "--json"])
        report = json.loads(result.stdout)
        assert report["outcome"] == "Greater"
        assert report["evidence"]["certificate"]["verdict"] == "NonnegativeOn01"

    @pytest.mark.parametrize(
        "args",
        [
            ["compare", "012", "1"],
            ["compare", "1", "0", "--method", "nope"],
            ["compare", "1", "0", "--method", "ber:0"],
            ["compare", "0" * 13, "1"],
        ],
    )
    def test_usage_errors(self, runner, args):
        assert runner.invoke(cli, args).exit_code == 2


class TestMatrix:
    def test_writes_image(self, runner, tmp_path):
        out = tmp_path / "m2.ppm"
        result = runner.invoke(cli, ["matrix", "2", "--out", str(out)])
        assert result.exit_code == 0, result.stdout
        assert read_ppm(str(out)).shape == (4, 4, 3)
        assert "equal=4" in result.stdout

    def test_dimmed_census(self, runner, tmp_path):
        out = tmp_path / "fst.ppm"
        result = runner.invoke(
            cli, ["matrix", "3", "--method", "fst", "--dim-against", "std", "--out", str(out), "--json"]
        )
        assert result.exit_code == 0, result.stdout
        census = json.loads(result.stdout)
        assert census["dim_against"] == "std"
        assert census["greater"] == census["less"]

    def test_bad_palette(self, runner, tmp_path):
        result = runner.invoke(cli, ["matrix", "1", "--out", str(tmp_path / "x.ppm"), "--palette", "red=1,2,3"])
        assert result.exit_code == 2


class TestRankAndKendall:
    def test_rank_csv(self, runner):
        result = runner.invoke(cli, ["rank", "2", "--method", "avg"])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == "rank,bitstring,label,value"
        assert lines[1] == "1,11,11,4/5"
        assert lines[4] == "4,00,00,1/5"

    def test_rank_rejects_partial_orders(self, runner):
        assert runner.invoke(cli, ["rank", "2", "--method", "std"]).exit_code == 2

    def test_kendall(self, runner):
        result = runner.invoke(cli, ["kendall", "1"])
        assert result.exit_code == 0
        report = json.loads(result.stdout)
        assert len(report["distances"]) == 6
        assert all(entry["distance"] == 0 for entry in report["distances"])


class TestInfluenceAndClosure:
    def test_influence(self, runner, tmp_path):
        out = tmp_path / "influence.csv"
        result = runner.invoke(cli, ["influence", "2", "--out", str(out)])
        assert result.exit_code == 0
        assert "level  0" in result.stdout
        assert len(out.read_text().splitlines()) == 1 + 7

    def test_closure(self, runner, tmp_path):
        out = tmp_path / "edges.csv"
        result = runner.invoke(cli, ["closure", "--rules", "F", "--max-len", "4", "--out", str(out)])
        assert result.exit_code == 0
        assert "rules F at L=4" in result.stdout
        assert any(line.startswith("0011,1000,") for line in out.read_text().splitlines())


class TestVerify:
    def test_fast_suites_pass(self, runner):
        result = runner.invoke(cli, ["verify", "rsF-identity", "rsE-lemma", "martingale"])
        assert result.exit_code == 0, result.stdout
        assert "PASS rsF-identity" in result.stdout

    def test_cross_check_with_workers(self, runner):
        result = runner.invoke(
            cli, ["verify", "oracle-cross-check", "--max-len", "4", "--samples", "10", "--workers", "2"]
        )
        assert result.exit_code == 0, result.stdout
        assert "PASS oracle-cross-check" in result.stdout

    def test_unknown_suite(self, runner):
        assert runner.invoke(cli, ["verify", "nosuch"]).exit_code == 2

    def test_list(self, runner):
        result = runner.invoke(cli, ["verify", "--list"])
        assert "sixteen-pixels" in result.stdout
        assert "closure-props" in result.stdout


def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert "becorder" in result.stdout
