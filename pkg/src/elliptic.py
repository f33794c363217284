"""
elliptic.py – Funktionalkalkül von A = 1 − Δ auf Tⁿ (Ordnung m = 2).

Die Fourier-Moden sind Eigenfunktionen von A zum Eigenwert 1 + |k|², also
wirkt jede Funktion f(A) modenweise als Multiplikation mit f(1 + |k|²).
Auf dem Torus fällt die Kalkülnorm ‖φ_s(A)u‖ mit der Fourier-Norm aus
hormander.py exakt zusammen.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from certify import default_grid
from couple import NormComparison
from errors import HypothesisViolation, NonPositiveParameter
from hormander import FourierDistribution, SmoothnessIndex, hnorm
from param import ParamFn, phi_s

logger = logging.getLogger(__name__)

INVERSE_PHI_LIMIT = 1e6


@dataclass(frozen=True)
class EllipticOperator:
    """A = 1 − Δ mit Ordnung m und unterer Schranke r = 1."""

    order: float = 2.0
    r: float = 1.0

    def __post_init__(self):
        if self.order != 2.0:
            raise NonPositiveParameter(f"Nur 1 − Δ (Ordnung 2) unterstützt, erhalten: {self.order}")
        if self.r != 1.0:
            raise NonPositiveParameter(f"1 − Δ hat die untere Schranke r = 1, erhalten: {self.r}")

    def eigenvalues(self, u: FourierDistribution) -> np.ndarray:
        return u.eigenvalues_laplace

    def calculus_param(self, idx: SmoothnessIndex) -> ParamFn:
        """φ_s(t) = t^{s/m} φ(t^{1/m})."""
        return phi_s(idx.phi, idx.s, self.order)


def apply(A: EllipticOperator, u: FourierDistribution) -> FourierDistribution:
    """c_k ↦ (1 + |k|²) c_k."""
    return u.with_coeffs(A.eigenvalues(u) * u.coeffs)


def apply_function(A: EllipticOperator, f: ParamFn, u: FourierDistribution) -> FourierDistribution:
    """f(A)u: c_k ↦ f(1 + |k|²) c_k."""
    if len(u) == 0:
        return u
    return u.with_coeffs(f.evaluate_many(A.eigenvalues(u)) * u.coeffs)


def apply_inverse_function(
    A: EllipticOperator, f: ParamFn, u: FourierDistribution
) -> FourierDistribution:
    """f⁻¹(A)u: c_k ↦ c_k / f(1 + |k|²)."""
    if len(u) == 0:
        return u
    return u.with_coeffs(u.coeffs / f.evaluate_many(A.eigenvalues(u)))


def calculus_norm(A: EllipticOperator, u: FourierDistribution, idx: SmoothnessIndex) -> float:
    """‖φ_s(A)u‖_{L²} = (Σ_k φ_s(1+|k|²)² |c_k|²)^{1/2}."""
    if len(u) == 0:
        return 0.0
    w = A.calculus_param(idx).evaluate_many(A.eigenvalues(u))
    return math.sqrt(math.fsum(((w * w) * u.abs_squared).tolist()))


def calculus_equivalence_check(
    u: FourierDistribution, idx: SmoothnessIndex, A: Optional[EllipticOperator] = None
) -> NormComparison:
    """Kalkülnorm gegen Fourier-Norm; auf dem Torus gleich."""
    A = A or EllipticOperator()
    return NormComparison(calculus_norm(A, u, idx), hnorm(u, idx))


@dataclass(frozen=True)
class GraphNormResult:
    graph: float
    hn: float
    ratio: float
    bound: float  # (1 + 1/c²)^{1/2} mit c = min φ_s über die Modi von u

    @property
    def within_bounds(self) -> bool:
        return 1.0 - 1e-12 <= self.ratio <= self.bound * (1.0 + 1e-12)


def _inverse_phi_sup(phi: ParamFn, grid: Sequence[float]) -> float:
    tail = np.asarray([t for t in grid if t >= 1.0])
    return float(np.max(1.0 / phi.evaluate_many(tail)))


def graph_norm_check(
    u: FourierDistribution,
    idx: SmoothnessIndex,
    A: Optional[EllipticOperator] = None,
) -> GraphNormResult:
    """
    Graphennorm (‖u‖² + ‖φ_s(A)u‖²)^{1/2} gegen ‖u‖_{s,φ}.

    Für u = 0 ist ratio = 1 per Konvention.

    :raises HypothesisViolation: für s < 0 oder für s = 0 mit
        stichprobenartig unbeschränktem 1/φ (sup > 1e6)
    """
    A = A or EllipticOperator()
    if idx.s < 0:
        raise HypothesisViolation(f"Graphennorm verlangt s ≥ 0, erhalten: {idx.s}")
    if idx.s == 0:
        sup = _inverse_phi_sup(idx.phi, default_grid())
        if sup > INVERSE_PHI_LIMIT:
            raise HypothesisViolation(f"s = 0, aber sup 1/φ ≈ {sup:.3e} auf dem Gitter")

    l2 = math.sqrt(math.fsum(u.abs_squared.tolist()))
    calc = calculus_norm(A, u, idx)
    hn = hnorm(u, idx)
    graph = math.hypot(l2, calc)
    active = np.abs(u.coeffs) > 0
    if hn == 0.0 or not np.any(active):
        return GraphNormResult(graph, hn, 1.0, 1.0)
    c = float(A.calculus_param(idx).evaluate_many(A.eigenvalues(u)[active]).min())
    return GraphNormResult(graph, hn, graph / hn, math.sqrt(1.0 + 1.0 / (c * c)))


def lifting_isomorphism_check(
    A: EllipticOperator, u: FourierDistribution, idx: SmoothnessIndex
) -> NormComparison:
    """A: H^{s+2,φ} ↔ H^{s,φ} mit ‖Au‖_{s,φ} = ‖u‖_{s+2,φ}."""
    lhs = hnorm(apply(A, u), idx)
    rhs = hnorm(u, SmoothnessIndex(idx.s + A.order, idx.phi))
    return NormComparison(lhs, rhs)


def positivity_form(A: EllipticOperator, u: FourierDistribution) -> Tuple[float, float]:
    """(Au, u) und (u, u); es gilt (Au, u) ≥ r (u, u)."""
    sq = u.abs_squared
    return (
        math.fsum((A.eigenvalues(u) * sq).tolist()),
        A.r * math.fsum(sq.tolist()),
    )


@dataclass(frozen=True)
class DomainPowerBound:
    k: int
    c: float


def domain_power_bound(A: EllipticOperator, idx: SmoothnessIndex, n: int, K: int) -> DomainPowerBound:
    """
    Kleinstes k ≥ 1 mit k·m > s und c = max φ_s(t)/t^k auf [1, 1 + nK²].

    Damit liegt C^∞ im Definitionsbereich von φ_s(A).
    """
    k = max(1, int(math.floor(idx.s / A.order)) + 1)
    levels = np.arange(1, n * K * K + 2, dtype=float)
    ratio = A.calculus_param(idx).evaluate_many(levels) / levels**k
    return DomainPowerBound(k, float(ratio.max()))
