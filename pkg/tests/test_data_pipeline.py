import json

import pandas as pd
import pytest

from data_pipeline import build_dataset, collect_counterexamples, ensure_data_directory


def test_ensure_data_directory(tmp_path):
    target = ensure_data_directory(tmp_path / "a" / "data")
    assert target.is_dir()


def test_counterexample_tables(tmp_path, capsys):
    collect_counterexamples({"sq": "pow(2)", "root": "pow(0.5)"}, tmp_path)
    square = pd.read_csv(tmp_path / "counterexample_sq.csv")
    root = pd.read_csv(tmp_path / "counterexample_root.csv")
    assert len(square) == 13
    assert square["bound_ratio"].iloc[-1] == pytest.approx(1e6, rel=1e-9)
    assert (root["bound_ratio"] <= 1.0 + 1e-12).all()
    assert "2 Gegenbeispieltabellen" in capsys.readouterr().out


@pytest.mark.slow
def test_build_dataset(tmp_path):
    failures = build_dataset(suites=("couple",), seed=1, psis={"sq": "pow(2)"}, data_dir=tmp_path, workers=2)
    assert failures == {"couple": 0}
    lines = (tmp_path / "report_couple.jsonl").read_text(encoding="utf-8").splitlines()
    assert all(json.loads(line)["verdict"] == "pass" for line in lines)
    assert (tmp_path / "counterexample_sq.csv").exists()
