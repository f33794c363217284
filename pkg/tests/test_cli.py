import dataclasses
import json
import math

import pandas as pd
import pytest

import hormander
import verification
from cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main, parse_args
from config import SEED_ENV
from errors import PowerIterationStall, QuadratureNonConvergence

SMALL_COUPLE = """version = 1
suite = couple
count.reiteration = 3
count.duality = 3
count.product = 3
count.two_point = 3
count.uniform = 5
count.operator_oracle = 3
count.embedding_chain = 3
"""


@pytest.fixture(autouse=True)
def _no_seed_env(monkeypatch):
    monkeypatch.delenv(SEED_ENV, raising=False)


@pytest.fixture
def distribution(tmp_path):
    path = tmp_path / "u.json"
    data = {
        "n": 1,
        "K": 4,
        "modes": [{"k": [0], "re": 1.0, "im": 0.0}, {"k": [3], "re": 0.0, "im": 2.0}],
    }
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


@pytest.fixture
def small_config(tmp_path):
    path = tmp_path / "small.conf"
    path.write_text(SMALL_COUPLE, encoding="utf-8")
    return str(path)


def test_parse_args():
    args = parse_args(["hnorm", "--s", "1.5", "--input", "u.json"])
    assert args.command == "hnorm"
    assert args.s == 1.5
    assert args.phi == "const(1)"


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as info:
        parse_args([])
    assert info.value.code == EXIT_USAGE


class TestNorms:
    def test_hnorm(self, distribution, capsys):
        assert main(["hnorm", "--s", "1", "--input", distribution]) == EXIT_OK
        value = float(capsys.readouterr().out.strip())
        assert value == pytest.approx(math.sqrt(1.0 + 4.0 * 10.0), rel=1e-14)

    def test_norm_hs_matches_short_form(self, distribution, capsys):
        main(["norm", "hs", "--s", "-0.5", "--phi", "logms(1)", "--input", distribution])
        long_form = capsys.readouterr().out
        main(["hnorm", "--s", "-0.5", "--phi", "logms(1)", "--input", distribution])
        assert capsys.readouterr().out == long_form

    def test_calculus_norm(self, distribution, capsys):
        assert main(["calculus-norm", "--s", "2", "--input", distribution]) == EXIT_OK
        value = float(capsys.readouterr().out.strip())
        assert value == pytest.approx(math.sqrt(1.0 + 4.0 * 100.0), rel=1e-14)

    def test_psi_norm(self, tmp_path, capsys):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"lambda": [1, 4], "r": 1, "u_re": [1, 1]}), encoding="utf-8")
        assert main(["norm", "psi", "--psi", "pow(0.5)", "--input", str(path)]) == EXIT_OK
        assert float(capsys.readouterr().out) == pytest.approx(math.sqrt(5.0), rel=1e-14)

    def test_zero_input(self, tmp_path, capsys):
        path = tmp_path / "zero.json"
        path.write_text(json.dumps({"n": 2, "K": 3, "modes": []}), encoding="utf-8")
        assert main(["hnorm", "--s", "2", "--input", str(path)]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "0"


class TestErrors:
    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        assert main(["hnorm", "--s", "1", "--input", str(path)]) == EXIT_USAGE
        assert "[ERROR]" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert main(["hnorm", "--s", "1", "--input", str(tmp_path / "nope.json")]) == EXIT_USAGE
        assert "[ERROR]" in capsys.readouterr().err

    def test_bad_expression(self, distribution, capsys):
        assert main(["hnorm", "--s", "1", "--phi", "pow(0.5", "--input", distribution]) == EXIT_USAGE
        assert "[ERROR]" in capsys.readouterr().err

    def test_non_qsv_phi(self, distribution):
        assert main(["hnorm", "--s", "1", "--phi", "pow(0.5)", "--input", distribution]) == EXIT_USAGE

    def test_numerical_failure_is_reported(self, distribution, monkeypatch, capsys):
        def diverge(u, index):
            raise QuadratureNonConvergence("maximale Tiefe erreicht")

        monkeypatch.setattr(hormander, "hnorm", diverge)
        assert main(["hnorm", "--s", "1", "--input", distribution]) == EXIT_USAGE
        assert "maximale Tiefe" in capsys.readouterr().err

    def test_bad_config(self, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("seed = 1\n", encoding="utf-8")
        assert main(["verify", "--config", str(path)]) == EXIT_USAGE


class TestChecks:
    def test_interp_check(self, distribution, capsys):
        args = ["interp-check", "--s", "0.5", "--phi", "logms(2)", "--eps", "0.5", "--delta", "2", "--input", distribution]
        assert main(args) == EXIT_OK
        out = capsys.readouterr().out
        assert "lhs = " in out and "✓" in out

    def test_calculus_and_lifting(self, distribution):
        assert main(["calculus-check", "--s", "-1", "--input", distribution]) == EXIT_OK
        assert main(["lifting-check", "--s", "1", "--phi", "logms(1,1)", "--input", distribution]) == EXIT_OK


class TestCounterexample:
    def test_csv_to_file(self, tmp_path, capsys):
        target = tmp_path / "table.csv"
        args = ["counterexample", "--psi", "pow(2)", "--ratios", "1,10,100", "--output", str(target)]
        assert main(args) == EXIT_OK
        table = pd.read_csv(target)
        assert table.columns.tolist()[0] == "t_over_s"
        assert table["bound_ratio"].tolist() == pytest.approx([1.0, 10.0, 100.0], rel=1e-9)
        assert "gespeichert in" in capsys.readouterr().err

    def test_csv_to_stdout(self, capsys):
        assert main(["counterexample", "--psi", "pow(0.5)", "--ratios", "4"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("t_over_s,s,t,")
        assert len(lines) == 2

    def test_bad_ratios(self):
        assert main(["counterexample", "--psi", "pow(2)", "--ratios", "1,x"]) == EXIT_USAGE


class TestVerify:
    def test_small_couple_suite(self, tmp_path, small_config, capsys):
        target = tmp_path / "report.jsonl"
        status = main(["verify", "--config", small_config, "--workers", "1", "--output", str(target)])
        assert status == EXIT_OK
        records = [json.loads(line) for line in target.read_text(encoding="utf-8").splitlines()]
        assert {r["suite"] for r in records} == {"couple"}
        assert all(r["verdict"] == "pass" for r in records)
        assert "wall_time" not in records[0]
        assert "bestanden" in capsys.readouterr().out

    def test_stdout_and_timings(self, small_config, capsys):
        assert main(["verify", "--config", small_config, "--workers", "1", "--timings"]) == EXIT_OK
        captured = capsys.readouterr()
        first = json.loads(captured.out.splitlines()[0])
        assert "wall_time" in first
        assert "bestanden" in captured.err

    def test_csv_format(self, tmp_path, small_config):
        target = tmp_path / "report.csv"
        args = ["verify", "--config", small_config, "--workers", "1", "--format", "csv", "--output", str(target)]
        assert main(args) == EXIT_OK
        assert pd.read_csv(target).columns.tolist() == [
            "suite", "check", "anchor", "instance", "lhs", "rhs", "tolerance", "relation", "verdict",
        ]

    def test_reproducible_across_workers(self, tmp_path, small_config):
        one, two = tmp_path / "one.jsonl", tmp_path / "two.jsonl"
        main(["verify", "--config", small_config, "--seed", "3", "--workers", "1", "--output", str(one)])
        main(["verify", "--config", small_config, "--seed", "3", "--workers", "2", "--output", str(two)])
        assert one.read_bytes() == two.read_bytes()

    def test_environment_seed(self, tmp_path, small_config, monkeypatch):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        monkeypatch.setenv(SEED_ENV, "3")
        main(["verify", "--config", small_config, "--workers", "1", "--output", str(a)])
        monkeypatch.delenv(SEED_ENV)
        main(["verify", "--config", small_config, "--seed", "3", "--workers", "1", "--output", str(b)])
        assert a.read_bytes() == b.read_bytes()


    def test_raising_check_keeps_other_records(self, tmp_path, small_config, monkeypatch):
        def stall(task):
            raise PowerIterationStall("Keine Konvergenz")

        check = verification.CHECKS_BY_NAME["product"]
        monkeypatch.setitem(verification.CHECKS_BY_NAME, "product", dataclasses.replace(check, run=stall))
        target = tmp_path / "report.jsonl"
        status = main(["verify", "--config", small_config, "--workers", "1", "--output", str(target)])
        assert status == EXIT_FAILURE
        records = [json.loads(line) for line in target.read_text(encoding="utf-8").splitlines()]
        failed = [r for r in records if r["verdict"] == "fail"]
        assert {r["check"] for r in failed} == {"product"}
        assert len(failed) == 3
        assert len(records) > len(failed)
