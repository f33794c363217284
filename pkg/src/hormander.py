"""
hormander.py – Verfeinerte Hörmander-Skala H^{s,φ} auf dem Torus Tⁿ.

Eine Distribution wird durch endlich viele Fourier-Koeffizienten c_k,
k ∈ ℤⁿ mit |k_i| ≤ K, dargestellt. Die Norm ist die diskrete Fassung von

    ‖u‖²_{s,φ} = Σ_k ⟨k⟩^{2s} φ²(⟨k⟩) |c_k|²,   ⟨k⟩ = (1 + |k|²)^{1/2}.

Die Interpolationsidentität [H^{s-ε}, H^{s+δ}]_ψ = H^{s,φ} wird über das
Diagonalmodell aus couple.py geprüft: ein Eigenwert ⟨k⟩^{ε+δ} pro Modus,
Basisgewichte ⟨k⟩^{s-ε}.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from certify import SetBReport, check_set_B, default_grid
from couple import (
    EmbeddingConstants,
    NormComparison,
    SpectralCouple,
    SpectralVector,
    embedding_constants,
    norm_psi,
    reiteration_check,
)
from errors import DimensionMismatch, NonPositiveParameter, NotInSetM
from param import (
    Constant,
    ParamFn,
    Power,
    Product,
    Quotient,
    interpolated_smoothness,
    interpolation_psi,
)

logger = logging.getLogger(__name__)

CONJUGATE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FourierDistribution:
    """
    Abgeschnittene Fourier-Reihe auf Tⁿ.

    Die Modi werden lexikographisch sortiert gespeichert; doppelte Modi
    sind nicht erlaubt.
    """

    n: int
    K: int
    modes: np.ndarray  # (M, n) ganzzahlig
    coeffs: np.ndarray  # (M,) komplex
    real: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise DimensionMismatch(f"Dimension n ≥ 1 verlangt, erhalten: {self.n}")
        if self.K < 0:
            raise NonPositiveParameter(f"Bandgrenze K ≥ 0 verlangt, erhalten: {self.K}")
        modes = np.asarray(self.modes, dtype=np.int64).reshape(-1, self.n)
        coeffs = np.asarray(self.coeffs, dtype=complex).ravel()
        if modes.shape[0] != coeffs.size:
            raise DimensionMismatch(f"{modes.shape[0]} Modi, aber {coeffs.size} Koeffizienten")
        if modes.size and int(np.abs(modes).max()) > self.K:
            raise DimensionMismatch(f"Modus außerhalb des Bandes |k_i| ≤ {self.K}")
        order = np.lexsort(modes.T[::-1]) if modes.shape[0] else np.arange(0)
        modes, coeffs = modes[order], coeffs[order]
        if modes.shape[0] > 1 and np.any(np.all(modes[1:] == modes[:-1], axis=1)):
            raise DimensionMismatch("Doppelter Modus in der Koeffizientenliste")
        modes.setflags(write=False)
        coeffs.setflags(write=False)
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "coeffs", coeffs)
        if self.real:
            self._check_conjugate_symmetry()

    def _check_conjugate_symmetry(self) -> None:
        lookup = {tuple(k): c for k, c in zip(self.modes.tolist(), self.coeffs)}
        for k, c in lookup.items():
            partner = lookup.get(tuple(-x for x in k), 0.0)
            if abs(partner - np.conj(c)) > CONJUGATE_TOL * max(1.0, abs(c)):
                raise ValueError(f"Reelle Distribution verletzt c_(-k) = conj(c_k) bei k={k}")

    @classmethod
    def zero(cls, n: int, K: int) -> "FourierDistribution":
        return cls(n, K, np.zeros((0, n), dtype=np.int64), np.zeros(0, dtype=complex))

    def __len__(self) -> int:
        return int(self.coeffs.size)

    @property
    def brackets(self) -> np.ndarray:
        """⟨k⟩ = (1 + |k|²)^{1/2} je Modus."""
        return np.sqrt(self.eigenvalues_laplace)

    @property
    def eigenvalues_laplace(self) -> np.ndarray:
        """1 + |k|², exakt in Gleitkomma für |k|² < 2⁵³."""
        return 1.0 + (self.modes * self.modes).sum(axis=1).astype(float)

    @property
    def abs_squared(self) -> np.ndarray:
        c = self.coeffs
        return c.real * c.real + c.imag * c.imag

    def as_vector(self) -> SpectralVector:
        return SpectralVector(self.coeffs)

    def with_coeffs(self, coeffs: np.ndarray) -> "FourierDistribution":
        return FourierDistribution(self.n, self.K, self.modes, coeffs, self.real)

    def reindex(self, K: int) -> "FourierDistribution":
        """Dieselbe Distribution im Band K (muss alle aktiven Modi enthalten)."""
        return FourierDistribution(self.n, K, self.modes, self.coeffs, self.real)

    def __mul__(self, scalar: complex) -> "FourierDistribution":
        real = self.real and complex(scalar).imag == 0
        return FourierDistribution(self.n, self.K, self.modes, self.coeffs * scalar, real)

    __rmul__ = __mul__

    def __add__(self, other: "FourierDistribution") -> "FourierDistribution":
        if self.n != other.n:
            raise DimensionMismatch(f"Dimensionen {self.n} und {other.n} verschieden")
        merged = {}
        for dist in (self, other):
            for k, c in zip(map(tuple, dist.modes.tolist()), dist.coeffs):
                merged[k] = merged.get(k, 0.0) + c
        keys = list(merged)
        modes = np.array(keys, dtype=np.int64).reshape(-1, self.n)
        coeffs = np.array([merged[k] for k in keys], dtype=complex)
        return FourierDistribution(
            self.n, max(self.K, other.K), modes, coeffs, self.real and other.real
        )


@dataclass(frozen=True)
class SmoothnessIndex:
    """Index (s, φ) der verfeinerten Skala; φ muss QSV deklariert sein."""

    s: float
    phi: ParamFn

    def __post_init__(self):
        if not self.phi.is_qsv:
            raise NotInSetM(f"{self.phi.describe()} ist nicht als quasilangsam variierend deklariert")

    def weights(self, brackets: np.ndarray) -> np.ndarray:
        """⟨k⟩^s φ(⟨k⟩)."""
        return brackets**self.s * self.phi.evaluate_many(brackets)

    def as_param(self) -> ParamFn:
        """t ↦ t^s φ(t) als Parameterfunktion."""
        return Product(Power(self.s), self.phi)

    def evidence(self, grid: Optional[Sequence[float]] = None) -> SetBReport:
        """Stichprobennachweis, dass φ und 1/φ auf Kompakta beschränkt sind."""
        return check_set_B(self.phi, default_grid() if grid is None else grid, 1.0)

    def dual(self) -> "SmoothnessIndex":
        """(−s, 1/φ)."""
        return SmoothnessIndex(-self.s, Quotient(Constant(1.0), self.phi))


def single_mode(n: int, K: int, k: Sequence[int], coeff: complex = 1.0) -> FourierDistribution:
    return FourierDistribution(n, K, np.array([list(k)]), np.array([coeff]))


def band_modes(n: int, K: int) -> np.ndarray:
    """Alle Modi mit |k_i| ≤ K in lexikographischer Reihenfolge."""
    axes = [np.arange(-K, K + 1)] * n
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)


def random_distribution(
    rng: np.random.Generator,
    n: int,
    K: int,
    n_modes: int,
    real: bool = False,
) -> FourierDistribution:
    """Zufällige Distribution mit n_modes verschiedenen Modi im Band K."""
    all_modes = band_modes(n, K)
    pick = rng.choice(all_modes.shape[0], size=min(n_modes, all_modes.shape[0]), replace=False)
    modes = all_modes[np.sort(pick)]
    coeffs = rng.standard_normal(modes.shape[0]) + 1j * rng.standard_normal(modes.shape[0])
    if not real:
        return FourierDistribution(n, K, modes, coeffs)
    merged = {}
    for k, c in zip(map(tuple, modes.tolist()), coeffs):
        neg = tuple(-x for x in k)
        if neg == k:
            merged[k] = complex(c.real, 0.0)
        elif neg not in merged:
            merged[k] = c
            merged[neg] = np.conj(c)
    keys = list(merged)
    return FourierDistribution(
        n, K, np.array(keys).reshape(-1, n), np.array([merged[k] for k in keys]), True
    )


def _norm(weights: np.ndarray, u: FourierDistribution) -> float:
    return math.sqrt(math.fsum(((weights * weights) * u.abs_squared).tolist()))


def hnorm(u: FourierDistribution, idx: SmoothnessIndex) -> float:
    """(Σ_k ⟨k⟩^{2s} φ²(⟨k⟩) |c_k|²)^{1/2}."""
    if len(u) == 0:
        return 0.0
    return _norm(idx.weights(u.brackets), u)


def interpolation_identity_check(
    u: FourierDistribution, idx: SmoothnessIndex, eps: float, delta: float
) -> NormComparison:
    """
    [H^{s-ε}, H^{s+δ}]_ψ = H^{s,φ} mit ψ aus interpolation_psi.

    lhs über das Diagonalmodell, rhs = hnorm(u, idx).
    """
    if not (eps > 0 and delta > 0):
        raise NonPositiveParameter(f"ε, δ > 0 verlangt, erhalten ε={eps}, δ={delta}")
    if len(u) == 0:
        return NormComparison(0.0, 0.0)
    b = u.brackets
    couple = SpectralCouple(b ** (eps + delta), 1.0, b ** (idx.s - eps))
    lhs = norm_psi(couple, interpolation_psi(idx.phi, eps, delta), u.as_vector())
    return NormComparison(lhs, hnorm(u, idx))


def refined_interpolation_check(
    u: FourierDistribution,
    idx0: SmoothnessIndex,
    idx1: SmoothnessIndex,
    theta: float,
    chi: ParamFn,
) -> Tuple[NormComparison, SmoothnessIndex]:
    """
    [H^{s₀,φ₀}, H^{s₁,φ₁}]_ψ = H^{s,φ} mit ψ(t) = t^θ χ(t).

    Die linke Seite entsteht als Reiteration über dem Paar mit J = ⟨k⟩:
    f(t) = t^{s₀}φ₀(t), g(t) = t^{s₁}φ₁(t). Die rechte Seite ist hnorm
    mit (s, φ) aus interpolated_smoothness.
    """
    s, phi = interpolated_smoothness(idx0.phi, idx1.phi, idx0.s, idx1.s, theta, chi)
    target = SmoothnessIndex(s, phi)
    if len(u) == 0:
        return NormComparison(0.0, 0.0), target
    couple = SpectralCouple(u.brackets, 1.0)
    psi = Product(Power(theta), chi)
    reit = reiteration_check(couple, idx0.as_param(), idx1.as_param(), psi, u.as_vector())
    return NormComparison(reit.lhs, hnorm(u, target)), target


def duality_pairing_check(u: FourierDistribution, idx: SmoothnessIndex) -> NormComparison:
    """
    Duale Norm von u bezüglich der L²-Paarung mit H^{-s,1/φ} gegen ‖u‖_{s,φ}.

    Der Maximierer v_k = w_k² c_k / ‖u‖_{s,φ} mit w = ⟨k⟩^s φ(⟨k⟩) hat
    ‖v‖_{-s,1/φ} = 1 und |(u, v)| = ‖u‖_{s,φ}.
    """
    rhs = hnorm(u, idx)
    if rhs == 0.0:
        return NormComparison(0.0, 0.0)
    w = idx.weights(u.brackets)
    v = u.with_coeffs(w * w * u.coeffs / rhs)
    pairing = abs(complex(np.vdot(u.coeffs, v.coeffs)))
    return NormComparison(pairing / hnorm(v, idx.dual()), rhs)


@dataclass(frozen=True)
class InclusionConstants:
    upper: float
    upper_mode: Tuple[int, ...]
    lower: float
    lower_mode: Tuple[int, ...]


def inclusion_constants(idx: SmoothnessIndex, eps: float, K: int, n: int = 1) -> InclusionConstants:
    """
    Konstanten von H^{s+ε} ↪ H^{s,φ} ↪ H^{s-ε} auf dem Band |k_i| ≤ K.

    upper = max ⟨k⟩^s φ(⟨k⟩) / ⟨k⟩^{s+ε}
    lower = max ⟨k⟩^{s-ε} / (⟨k⟩^s φ(⟨k⟩))
    Bei Gleichstand gewinnt der lexikographisch erste Modus.
    """
    if not eps > 0:
        raise NonPositiveParameter(f"ε muss positiv sein, erhalten: {eps}")
    modes = band_modes(n, K)
    b = np.sqrt(1.0 + (modes * modes).sum(axis=1).astype(float))
    w = idx.weights(b)
    up = w / b ** (idx.s + eps)
    low = b ** (idx.s - eps) / w
    i, j = int(np.argmax(up)), int(np.argmax(low))
    return InclusionConstants(
        float(up[i]), tuple(int(x) for x in modes[i]), float(low[j]), tuple(int(x) for x in modes[j])
    )


def embedding_profile(
    idx_hi: SmoothnessIndex, idx_lo: SmoothnessIndex, K: int, n: int = 1
) -> EmbeddingConstants:
    """
    Norm- und Restkonstante der Einbettung H^{idx_hi} ↪ H^{idx_lo} auf dem Band.

    Ein tail_sup deutlich unter norm_bound ist Evidenz für Kompaktheit.
    """
    modes = band_modes(n, K)
    b = np.unique(np.sqrt(1.0 + (modes * modes).sum(axis=1).astype(float)))
    return embedding_constants(SpectralCouple(b, 1.0), idx_hi.as_param(), idx_lo.as_param())
