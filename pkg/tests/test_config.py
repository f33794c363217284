import math

import pytest

from config import (
    DEFAULT_COUNTS,
    SEED_ENV,
    SuiteConfig,
    apply_environment,
    apply_overrides,
    load_config,
    parse_config_text,
)
from errors import ConfigParseError

EXAMPLE = """
# Beispielkonfiguration
version = 1
suite = couple
seed = 7
count.reiteration = 25
tolerance.reiteration = 1e-10   # großzügiger
tolerance_scale = 2
output = report.jsonl
format = csv
workers = 2
timings = yes
atlas.centers = 0, 3.141592653589793
atlas.M = 2048
"""


def test_parse_full_example():
    cfg = parse_config_text(EXAMPLE)
    assert cfg.suite == "couple"
    assert cfg.seed == 7
    assert cfg.count("reiteration") == 25
    assert cfg.count("duality") == DEFAULT_COUNTS["duality"]
    assert cfg.tolerance("reiteration") == pytest.approx(2e-10)
    assert cfg.output == "report.jsonl"
    assert cfg.format == "csv"
    assert cfg.workers == 2
    assert cfg.timings is True
    assert cfg.atlas.M == 2048
    assert cfg.atlas.centers == (0.0, math.pi)


def test_load_config(tmp_path):
    path = tmp_path / "suite.conf"
    path.write_text("version = 1\nsuite = param\n", encoding="utf-8")
    assert load_config(path).suite == "param"


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 1),
        ("seed = 3\n", 1),
        ("version = 2\n", 1),
        ("version = 1\nbogus = 1\n", 2),
        ("version = 1\nseed\n", 2),
        ("version = 1\n\ncount.reiteration = 1.5\n", 3),
        ("version = 1\ncount.nothing = 4\n", 2),
        ("version = 1\ntolerance.nothing = 1e-3\n", 2),
        ("version = 1\natlas.centers = 1.0\n", 2),
        ("version = 1\natlas.colour = 3\n", 2),
        ("version = 1\nseed =\n", 2),
    ],
)
def test_errors_carry_line_numbers(text, line):
    with pytest.raises(ConfigParseError) as info:
        parse_config_text(text)
    assert info.value.line == line
    assert f"Zeile {line}" in str(info.value)


def test_invalid_atlas():
    with pytest.raises(ConfigParseError):
        parse_config_text("version = 1\natlas.bump_radius = 3.0\n")


class TestSuiteConfig:
    def test_defaults(self):
        cfg = SuiteConfig()
        assert cfg.suite == "all"
        assert cfg.tolerance("kt_identity") == 1e-8
        assert cfg.count("uniform") == 500

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"suite": "nothing"},
            {"format": "xml"},
            {"tolerance_scale": 0.0},
            {"workers": 0},
            {"counts": {"reiteration": -1}},
            {"tolerances": {"identity": 0.0}},
            {"counts": {"unknown": 1}},
        ],
    )
    def test_rejected(self, kwargs):
        with pytest.raises(ConfigParseError):
            SuiteConfig(**kwargs)


class TestPrecedence:
    def test_environment_overrides_file(self):
        cfg = parse_config_text("version = 1\nseed = 3\n")
        assert apply_environment(cfg, {SEED_ENV: "11"}).seed == 11
        assert apply_environment(cfg, {SEED_ENV: ""}).seed == 3
        assert apply_environment(cfg, {}).seed == 3

    def test_bad_environment_seed(self):
        with pytest.raises(ConfigParseError):
            apply_environment(SuiteConfig(), {SEED_ENV: "abc"})

    def test_command_line_wins(self):
        cfg = apply_environment(parse_config_text("version = 1\nseed = 3\n"), {SEED_ENV: "11"})
        cfg = apply_overrides(cfg, seed=5, workers=None)
        assert cfg.seed == 5
        assert cfg.workers is None
