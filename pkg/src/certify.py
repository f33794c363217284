"""
certify.py – Stichprobenbasierte Nachweise für Parameterfunktionen.

Die Bedingungen der Menge 𝓑, der Quasikonkavität und der langsamen
Variation sind asymptotisch. Hier werden sie auf endlichen geometrischen
Gittern geprüft; ein Ergebnis ist Evidenz, kein Beweis.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from errors import EmptyGrid, InsufficientGrid
from param import ParamFn

logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS = 512
DEFAULT_GRID_RANGE = (1e-3, 1e9)
GROWTH_THRESHOLD = 1.05
NESTED_LEVELS = 4


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    QUASICONCAVE = "quasiconcave evidence"
    VIOLATION = "violation evidence"
    BY_CONSTRUCTION = "pass-by-construction"


def default_grid(
    n: int = DEFAULT_GRID_POINTS,
    lo: float = DEFAULT_GRID_RANGE[0],
    hi: float = DEFAULT_GRID_RANGE[1],
) -> np.ndarray:
    """Geometrisches Gitter mit n Punkten auf [lo, hi]."""
    return np.geomspace(lo, hi, n)


def _as_grid(grid: Iterable[float]) -> np.ndarray:
    arr = np.unique(np.asarray(list(grid), dtype=float))
    if arr.size == 0:
        raise EmptyGrid("Stützstellengitter ist leer")
    if np.any(arr <= 0):
        raise ValueError("Gitterpunkte müssen positiv sein")
    return arr


def _nested_sizes(n: int, levels: int = NESTED_LEVELS) -> Sequence[int]:
    """Längen verschachtelter Präfixe mit wachsender Ausdehnung."""
    sizes = sorted({max(2, n >> k) for k in range(levels - 1, -1, -1)} | {n})
    return [s for s in sizes if s <= n]


def _is_stable(values: Sequence[float]) -> bool:
    return all(b <= GROWTH_THRESHOLD * a for a, b in zip(values, values[1:]))


@dataclass(frozen=True)
class SetBReport:
    """Ergebnis von check_set_B."""

    compact_max: Tuple[Tuple[float, float, float], ...]  # (a, b, max f)
    inverse_sup: float  # sup 1/f auf [r, ∞) ∩ Gitter
    inverse_growth: Tuple[float, ...]
    verdict: Verdict


def check_set_B(
    f: ParamFn,
    grid: Iterable[float],
    r: float,
    compacts: Sequence[Tuple[float, float]] = ((1e-3, 1.0), (1.0, 10.0)),
) -> SetBReport:
    """
    Evidenz für f ∈ 𝓑: f beschränkt auf Kompakta, 1/f beschränkt auf [r, ∞).

    :raises EmptyGrid: bei leerem Gitter oder leerem Schnitt mit [r, ∞)
    """
    pts = _as_grid(grid)
    compact_max = []
    for a, b in compacts:
        inside = pts[(pts >= a) & (pts <= b)]
        sample = np.concatenate([[a, b], inside])
        compact_max.append((float(a), float(b), float(f.evaluate_many(sample).max())))

    tail = pts[pts >= r]
    if tail.size == 0:
        raise EmptyGrid(f"Kein Gitterpunkt in [{r}, ∞)")
    inverse = 1.0 / f.evaluate_many(tail)
    growth = tuple(float(inverse[:n].max()) for n in _nested_sizes(tail.size))
    verdict = Verdict.PASS if _is_stable(growth) else Verdict.FAIL
    if verdict is Verdict.FAIL:
        logger.info(f"1/{f.describe()} wächst auf dem Gitter: {growth}")
    return SetBReport(tuple(compact_max), float(inverse.max()), growth, verdict)


@dataclass(frozen=True)
class QuasiconcavityCertificate:
    c_estimate: float
    worst_pair: Tuple[float, float]
    nested_growth: Tuple[float, ...]
    verdict: Verdict


def _pair_constant(ts: np.ndarray, vals: np.ndarray) -> Tuple[float, Tuple[float, float]]:
    # ratio[i, j] = ψ(t_i) / (ψ(t_j) max{1, t_i/t_j})
    ratio = vals[:, None] / (vals[None, :] * np.maximum(1.0, ts[:, None] / ts[None, :]))
    idx = int(np.argmax(ratio))
    i, j = divmod(idx, ts.size)
    return float(ratio[i, j]), (float(ts[i]), float(ts[j]))


def quasiconcavity_certificate(
    psi: ParamFn, r: float, grid: Iterable[float]
) -> QuasiconcavityCertificate:
    """
    Schätzt die Konstante c in ψ(t)/ψ(s) ≤ c max{1, t/s} für t, s > r.

    Die Schätzung wird auf verschachtelten Teilgittern wachsender Ausdehnung
    wiederholt; stabilisiert sie sich (Quotient ≤ 1.05), gilt ψ als
    quasikonkav, sonst als Verletzung.
    """
    pts = _as_grid(grid)
    pts = pts[pts > r]
    if pts.size < 2:
        raise InsufficientGrid(f"Mindestens 2 Gitterpunkte über r={r} nötig")
    vals = psi.evaluate_many(pts)
    c_estimate, worst = _pair_constant(pts, vals)
    nested = tuple(_pair_constant(pts[:n], vals[:n])[0] for n in _nested_sizes(pts.size))
    verdict = Verdict.QUASICONCAVE if _is_stable(nested) else Verdict.VIOLATION
    return QuasiconcavityCertificate(c_estimate, worst, nested, verdict)


@dataclass(frozen=True)
class InterpolationEvidence:
    verdict: Verdict
    index: Optional[float]
    certificate: Optional[QuasiconcavityCertificate] = None

    @property
    def passed(self) -> bool:
        return self.verdict in (Verdict.BY_CONSTRUCTION, Verdict.QUASICONCAVE)


def is_interpolation_parameter_evidence(
    psi: ParamFn, grid: Optional[Iterable[float]] = None
) -> InterpolationEvidence:
    """
    Quasiregulär variierend mit Index θ ∈ (0, 1) ⇒ Interpolationsparameter
    per Konstruktion; sonst Quasikonkavitätsnachweis auf dem Standardgitter.
    """
    index = psi.declared_index
    if index is not None and 0.0 < index < 1.0:
        return InterpolationEvidence(Verdict.BY_CONSTRUCTION, index)
    cert = quasiconcavity_certificate(psi, 0.0, default_grid() if grid is None else grid)
    return InterpolationEvidence(cert.verdict, index, cert)


def slow_variation_ratios(
    phi: ParamFn,
    lambdas: Sequence[float] = (0.5, 2.0, 10.0),
    ts: Optional[Sequence[float]] = None,
) -> np.ndarray:
    """Tabelle φ(λt)/φ(t), Zeilen t, Spalten λ."""
    ts_arr = np.asarray(
        [10.0**k for k in range(3, 10)] if ts is None else ts, dtype=float
    )
    base = phi.evaluate_many(ts_arr)
    return np.stack([phi.evaluate_many(lam * ts_arr) / base for lam in lambdas], axis=1)


@dataclass(frozen=True)
class BracketLimits:
    ts: np.ndarray
    lower: np.ndarray  # t^{-θ} φ(t)
    upper: np.ndarray  # t^{θ} φ(t)
    lower_eventually_decreasing: bool
    upper_eventually_increasing: bool

    def reaches(self, small: float = 1e-6, large: float = 1e6) -> bool:
        return bool(self.lower[-1] < small and self.upper[-1] > large)


def power_bracket_limits(phi: ParamFn, theta: float, ts: Sequence[float]) -> BracketLimits:
    """t^{-θ}φ(t) → 0 und t^{θ}φ(t) → ∞ auf einem wachsenden Gitter."""
    ts_arr = np.asarray(ts, dtype=float)
    vals = phi.evaluate_many(ts_arr)
    lower = ts_arr ** (-theta) * vals
    upper = ts_arr**theta * vals
    half = ts_arr.size // 2
    return BracketLimits(
        ts_arr,
        lower,
        upper,
        bool(np.all(np.diff(lower[half:]) < 0)),
        bool(np.all(np.diff(upper[half:]) > 0)),
    )
