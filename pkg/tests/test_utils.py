import json

import numpy as np
import pandas as pd
import pytest

from couple import SpectralCouple, SpectralVector
from errors import DeserializationError, DimensionMismatch
from hormander import single_mode
from utils import (
    couple_to_json,
    distribution_to_json,
    load_json,
    parse_couple,
    parse_distribution,
    write_csv,
    write_jsonl,
)


class TestCoupleJson:
    def test_parse(self):
        c, u = parse_couple({"lambda": [1, 4], "r": 1, "u_re": [1, 0], "u_im": [0, 2]})
        assert c.eigenvalues.tolist() == [1.0, 4.0]
        assert u.abs_squared.tolist() == [1.0, 4.0]

    def test_base_is_optional(self):
        c = SpectralCouple(np.array([1.0, 9.0]), 1.0, np.array([2.0, 3.0]))
        u = SpectralVector.from_parts([1.0, -1.0], [0.5, 0.0])
        data = couple_to_json(c, u)
        assert data["base"] == [2.0, 3.0]
        c2, u2 = parse_couple(data)
        assert c2.base.tolist() == [2.0, 3.0]
        assert np.array_equal(u2.coefficients, u.coefficients)
        assert "base" not in couple_to_json(SpectralCouple(np.array([1.0]), 1.0), SpectralVector.zeros(1))

    @pytest.mark.parametrize(
        "data",
        [
            {"r": 1, "u_re": [1]},
            {"lambda": 3, "r": 1, "u_re": [1]},
            {"lambda": [1], "r": "x", "u_re": [1]},
            {"lambda": ["a"], "r": 1, "u_re": [1]},
            [1, 2],
        ],
    )
    def test_rejected(self, data):
        with pytest.raises(DeserializationError):
            parse_couple(data)


class TestDistributionJson:
    def test_roundtrip(self):
        u = single_mode(2, 3, (1, -2), 0.5 - 1.5j)
        back = parse_distribution(distribution_to_json(u))
        assert back.modes.tolist() == [[1, -2]]
        assert back.coeffs.tolist() == [0.5 - 1.5j]
        assert back.K == 3 and not back.real

    @pytest.mark.parametrize(
        "data",
        [
            {"K": 2, "modes": []},
            {"n": "one", "K": 2, "modes": []},
            {"n": 1, "K": 2, "modes": {}},
            {"n": 1, "K": 2, "modes": [{"k": [1, 2]}]},
            {"n": 1, "K": 2, "modes": [{"k": [1], "re": "big"}]},
        ],
    )
    def test_rejected(self, data):
        with pytest.raises(DeserializationError):
            parse_distribution(data)

    def test_out_of_band(self):
        with pytest.raises(DimensionMismatch):
            parse_distribution({"n": 1, "K": 2, "modes": [{"k": [3], "re": 1.0}]})


def test_load_json(tmp_path):
    good = tmp_path / "good.json"
    good.write_text('{"a": 1}', encoding="utf-8")
    assert load_json(good) == {"a": 1}
    bad = tmp_path / "bad.json"
    bad.write_text('{"a": ', encoding="utf-8")
    with pytest.raises(DeserializationError):
        load_json(bad)


def test_write_jsonl(tmp_path, capsys):
    rows = [{"check": "φ", "lhs": 1.0}, {"check": "b", "lhs": 2.5}]
    target = tmp_path / "out.jsonl"
    write_jsonl(rows, target)
    lines = target.read_text(encoding="utf-8").splitlines()
    assert [json.loads(line) for line in lines] == rows
    write_jsonl(rows)
    assert capsys.readouterr().out.splitlines() == lines


def test_write_csv(tmp_path):
    target = tmp_path / "out.csv"
    write_csv([{"b": 2, "a": 1}], target, columns=["a", "b"])
    assert target.read_text(encoding="utf-8") == "a,b\n1,2\n"
    assert pd.read_csv(target).columns.tolist() == ["a", "b"]
