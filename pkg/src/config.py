"""
config.py – Konfiguration der Verifikationsläufe.

Format der Konfigurationsdatei (eine Zuweisung pro Zeile, # für Kommentare):

    version = 1
    suite = couple
    seed = 7
    count.reiteration = 1000
    tolerance.reiteration = 1e-12
    tolerance_scale = 1.0
    output = report.jsonl
    format = jsonl
    workers = 4
    atlas.centers = 0, 3.141592653589793
    atlas.M = 4096

Die Umgebungsvariable HILBERT_INTERP_SEED überschreibt den Seed der Datei,
Kommandozeilenoptionen überschreiben beide.
"""

import ast
import logging
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from charts import AtlasConfig
from errors import ConfigParseError

logger = logging.getLogger(__name__)

CONFIG_VERSION = 1
SEED_ENV = "HILBERT_INTERP_SEED"
SUITES = ("param", "couple", "hormander", "elliptic", "charts", "all")
FORMATS = ("jsonl", "csv")

DEFAULT_COUNTS: Dict[str, int] = {
    "positivity": 40,
    "omega_identity": 200,
    "chi_identity": 200,
    "reiteration": 1000,
    "duality": 1000,
    "product": 200,
    "two_point": 50,
    "uniform": 500,
    "operator_oracle": 200,
    "embedding_chain": 200,
    "interpolation": 500,
    "refined_interpolation": 100,
    "duality_pairing": 100,
    "monotonicity": 100,
    "calculus": 500,
    "lifting": 500,
    "graph_norm": 100,
    "positivity_form": 100,
    "inverse_calculus": 100,
    "kt_identity": 100,
    "chart_norm_axioms": 10,
}

DEFAULT_TOLERANCES: Dict[str, float] = {
    "identity": 1e-12,
    "reiteration": 1e-12,
    "duality": 1e-12,
    "two_point": 1e-12,
    "counterexample": 1e-9,
    "uniform": 1e-6,
    "operator_oracle": 1e-9,
    "embedding_chain": 1e-12,
    "quasiconcavity": 1e-9,
    "karamata": 5e-2,
    "interpolation": 1e-12,
    "calculus": 1e-12,
    "lifting": 1e-12,
    "inverse_calculus": 1e-14,
    "partition": 1e-12,
    "kt_identity": 1e-8,
    "chart_spread": 10.0,
    "chart_refinement": 1e-2,
    "chart_homogeneity": 1e-12,
}


@dataclass
class SuiteConfig:
    """Parameter eines Verifikationslaufs."""

    suite: str = "all"
    seed: int = 0
    counts: Dict[str, int] = field(default_factory=dict)
    tolerances: Dict[str, float] = field(default_factory=dict)
    tolerance_scale: float = 1.0
    output: Optional[str] = None
    format: str = "jsonl"
    workers: Optional[int] = None
    timings: bool = False
    atlas: AtlasConfig = field(default_factory=AtlasConfig)

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ConfigParseError(f"Unbekannte Suite {self.suite!r}, erlaubt: {', '.join(SUITES)}")
        if self.format not in FORMATS:
            raise ConfigParseError(f"Unbekanntes Format {self.format!r}, erlaubt: jsonl, csv")
        if not self.tolerance_scale > 0:
            raise ConfigParseError("tolerance_scale muss positiv sein")
        self.counts = {**DEFAULT_COUNTS, **self.counts}
        self.tolerances = {**DEFAULT_TOLERANCES, **self.tolerances}
        for key, value in self.counts.items():
            if key not in DEFAULT_COUNTS:
                raise ConfigParseError(f"Unbekannter Zähler count.{key}")
            if value < 0:
                raise ConfigParseError(f"count.{key} darf nicht negativ sein")
        for key, value in self.tolerances.items():
            if key not in DEFAULT_TOLERANCES:
                raise ConfigParseError(f"Unbekannte Toleranz tolerance.{key}")
            if not value > 0:
                raise ConfigParseError(f"tolerance.{key} muss positiv sein")
        if self.workers is not None and self.workers < 1:
            raise ConfigParseError("workers muss mindestens 1 sein")

    def tolerance(self, key: str) -> float:
        return self.tolerances[key] * self.tolerance_scale

    def count(self, key: str) -> int:
        return self.counts[key]


def _literal(raw: str) -> Any:
    try:
        return ast.literal_eval(raw)
    except (ValueError, SyntaxError):
        return raw


def _as_type(value: Any, target: type, key: str, line: int) -> Any:
    try:
        if target is bool:
            if isinstance(value, str):
                if value.lower() in ("true", "yes", "1"):
                    return True
                if value.lower() in ("false", "no", "0"):
                    return False
                raise ValueError(value)
            return bool(value)
        if target is int:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value)
        if target is float:
            return float(value)
        if target is str:
            return str(value)
    except (TypeError, ValueError) as e:
        raise ConfigParseError(f"{key}: ungültiger Wert {value!r}", line) from e
    return value


_TOP_LEVEL = {
    "suite": str,
    "seed": int,
    "tolerance_scale": float,
    "output": str,
    "format": str,
    "workers": int,
    "timings": bool,
}


def _atlas_types() -> Dict[str, type]:
    types = {}
    for f in fields(AtlasConfig):
        if f.init and f.name != "centers":
            types[f.name] = int if f.name in ("M", "P") else float
    return types


def parse_config_text(text: str) -> SuiteConfig:
    """
    Parst den Inhalt einer Konfigurationsdatei.

    :raises ConfigParseError: bei leerer Datei, fehlender Version,
        unbekannten Schlüsseln oder ungültigen Werten (mit Zeilennummer)
    """
    top: Dict[str, Any] = {}
    counts: Dict[str, int] = {}
    tolerances: Dict[str, float] = {}
    atlas: Dict[str, Any] = {}
    atlas_types = _atlas_types()
    version_seen = False
    last_line = 0

    for number, raw_line in enumerate(text.splitlines(), start=1):
        last_line = number
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"'schlüssel = wert' erwartet, gefunden: {line!r}", number)
        key, raw = (part.strip() for part in line.split("=", 1))
        if not raw:
            raise ConfigParseError(f"Leerer Wert für {key}", number)
        value = _literal(raw)

        if key == "version":
            if value != CONFIG_VERSION:
                raise ConfigParseError(f"Nicht unterstützte Version {value!r}", number)
            version_seen = True
        elif key in _TOP_LEVEL:
            top[key] = _as_type(value, _TOP_LEVEL[key], key, number)
        elif key.startswith("count."):
            name = key[len("count."):]
            if name not in DEFAULT_COUNTS:
                raise ConfigParseError(f"Unbekannter Zähler {key}", number)
            counts[name] = _as_type(value, int, key, number)
        elif key.startswith("tolerance."):
            name = key[len("tolerance."):]
            if name not in DEFAULT_TOLERANCES:
                raise ConfigParseError(f"Unbekannte Toleranz {key}", number)
            tolerances[name] = _as_type(value, float, key, number)
        elif key == "atlas.centers":
            parts = value if isinstance(value, tuple) else (value,)
            if len(parts) != 2:
                raise ConfigParseError("atlas.centers erwartet zwei Winkel", number)
            atlas["centers"] = tuple(_as_type(p, float, key, number) for p in parts)
        elif key.startswith("atlas."):
            name = key[len("atlas."):]
            if name not in atlas_types:
                raise ConfigParseError(f"Unbekannter Atlas-Schlüssel {key}", number)
            atlas[name] = _as_type(value, atlas_types[name], key, number)
        else:
            raise ConfigParseError(f"Unbekannter Schlüssel {key!r}", number)

    if last_line == 0 or not text.strip():
        raise ConfigParseError("Konfigurationsdatei ist leer", 1)
    if not version_seen:
        raise ConfigParseError(f"Pflichtschlüssel 'version = {CONFIG_VERSION}' fehlt", last_line)

    try:
        atlas_cfg = AtlasConfig(**atlas)
    except ValueError as e:
        raise ConfigParseError(f"Ungültiger Atlas: {e}") from e
    return SuiteConfig(counts=counts, tolerances=tolerances, atlas=atlas_cfg, **top)


def load_config(path: Union[str, Path]) -> SuiteConfig:
    """Liest eine Konfigurationsdatei (UTF-8)."""
    text = Path(path).read_text(encoding="utf-8")
    logger.info(f"Konfiguration gelesen: {path}")
    return parse_config_text(text)


def apply_environment(cfg: SuiteConfig, environ: Optional[Mapping[str, str]] = None) -> SuiteConfig:
    """Überschreibt den Seed mit HILBERT_INTERP_SEED, falls gesetzt."""
    env = os.environ if environ is None else environ
    raw = env.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return cfg
    try:
        seed = int(raw)
    except ValueError as e:
        raise ConfigParseError(f"{SEED_ENV}={raw!r} ist keine ganze Zahl") from e
    logger.info(f"Seed aus {SEED_ENV}: {seed}")
    return replace(cfg, seed=seed)


def apply_overrides(cfg: SuiteConfig, **overrides: Any) -> SuiteConfig:
    """Kommandozeilenwerte (None = nicht gesetzt) haben Vorrang."""
    given = {k: v for k, v in overrides.items() if v is not None}
    return replace(cfg, **given) if given else cfg

