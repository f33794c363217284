"""
charts.py – Kartendefinition von H^{s,φ}(S¹) mit zwei Karten.

Karten α_j(x) = θ_j + L·tanh(x/L′) bilden ℝ auf den offenen Bogen
U_j = (θ_j − L, θ_j + L) ab. Die Zerlegung der Eins χ_j = b_j/(b₁ + b₂)
entsteht aus den Buckeln b_j = exp(−1/(1 − y²)), y = (θ − θ_j)/ρ. Die
Abschneidefunktionen η_j sind glatte Stufen, gleich 1 auf
α_j⁻¹(supp χ_j) = [−a, a] mit a = L′·artanh(ρ/L).

Begradigung T: f ↦ ((χ_j f)∘α_j)_j auf dem ℝ-Gitter (Länge R, P Punkte).
Nähen K: (h_j)_j ↦ Σ_j (η_j h_j)∘α_j⁻¹ auf dem Kreisgitter (M Punkte).
Es gilt KTf = f.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.fft import fft, fftfreq, ifft

from errors import (
    EmptyGrid,
    GridUnderResolved,
    HypothesisViolation,
    NonPositiveParameter,
    ResolutionTooLow,
    SupportLeak,
)
from fft_helpers import FFTInterpolator, multi_fft_evaluation, optimal_fft_length
from hormander import FourierDistribution, SmoothnessIndex, hnorm

logger = logging.getLogger(__name__)

LEAK_TOLERANCE = 1e-8
REFINEMENT_TOLERANCE = 1e-2
MIN_MARGIN_CELLS = 2
EVALUATION_CUTOFF = 1e-15


@dataclass(frozen=True)
class AtlasConfig:
    """Parameter des Zwei-Karten-Atlas und der Gitter."""

    centers: Tuple[float, float] = (0.0, math.pi)
    half_length: float = 0.8 * math.pi  # L
    bump_radius: float = 0.65 * math.pi  # ρ
    stretch: float = 4.0  # L′
    eta_width: float = 1.0
    M: int = 4096
    R: float = 64.0
    P: int = 8192
    plateau: float = field(init=False)  # a

    def __post_init__(self):
        if len(self.centers) != 2:
            raise ValueError(f"Genau zwei Kartenzentren erwartet, erhalten: {self.centers}")
        object.__setattr__(self, "centers", tuple(float(c) for c in self.centers))
        for name in ("half_length", "bump_radius", "stretch", "eta_width", "R"):
            if not getattr(self, name) > 0:
                raise NonPositiveParameter(f"{name} muss positiv sein")
        if self.M < 2 or self.P < 2:
            raise NonPositiveParameter("M und P müssen mindestens 2 sein")
        if not self.bump_radius < self.half_length <= math.pi:
            raise ValueError("Verlangt ρ < L ≤ π")
        object.__setattr__(
            self, "plateau", self.stretch * math.atanh(self.bump_radius / self.half_length)
        )


def _bump(y: np.ndarray) -> np.ndarray:
    out = np.zeros_like(y, dtype=float)
    inside = np.abs(y) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - y[inside] ** 2))
    return out


def _smooth_step(y: np.ndarray) -> np.ndarray:
    """1 für y ≤ 0, 0 für y ≥ 1, dazwischen C^∞."""
    y = np.clip(y, 0.0, 1.0)
    g0 = np.where(y < 1.0, np.exp(-1.0 / np.maximum(1.0 - y, 1e-300)), 0.0)
    g1 = np.where(y > 0.0, np.exp(-1.0 / np.maximum(y, 1e-300)), 0.0)
    return g0 / (g0 + g1)


def wrap_angle(d: np.ndarray) -> np.ndarray:
    """Winkeldifferenz in [−π, π)."""
    return np.mod(np.asarray(d, dtype=float) + math.pi, 2.0 * math.pi) - math.pi


class ChartAtlas:
    def __init__(self, cfg: Optional[AtlasConfig] = None):
        self.cfg = cfg or AtlasConfig()
        total = self.bumps(self.circle_grid()).sum(axis=0)
        if not np.all(total > 0):
            raise ValueError("Die Buckel überdecken den Kreis nicht")

    @property
    def centers(self) -> Tuple[float, float]:
        return self.cfg.centers

    def circle_grid(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.cfg.M) / self.cfg.M

    def line_grid(self, P: Optional[int] = None) -> np.ndarray:
        P = P or self.cfg.P
        return -0.5 * self.cfg.R + (self.cfg.R / P) * np.arange(P)

    def chart(self, j: int, x: np.ndarray) -> np.ndarray:
        """α_j(x) ∈ [0, 2π)."""
        theta = self.centers[j] + self.cfg.half_length * np.tanh(np.asarray(x) / self.cfg.stretch)
        return np.mod(theta, 2.0 * math.pi)

    def chart_inverse(self, j: int, theta: np.ndarray) -> np.ndarray:
        """α_j⁻¹(θ); NaN außerhalb von U_j."""
        d = wrap_angle(np.asarray(theta) - self.centers[j])
        out = np.full(d.shape, np.nan)
        inside = np.abs(d) < self.cfg.half_length
        out[inside] = self.cfg.stretch * np.arctanh(d[inside] / self.cfg.half_length)
        return out

    def bumps(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return np.stack(
            [_bump(wrap_angle(theta - c) / self.cfg.bump_radius) for c in self.centers]
        )

    def partition(self, theta: np.ndarray) -> np.ndarray:
        """(χ₁(θ), χ₂(θ)) mit χ₁ + χ₂ = 1."""
        b = self.bumps(theta)
        return b / b.sum(axis=0)

    def cutoff(self, x: np.ndarray) -> np.ndarray:
        """η(x): 1 auf [−a, a], 0 außerhalb [−a − w, a + w]."""
        y = (np.abs(np.asarray(x, dtype=float)) - self.cfg.plateau) / self.cfg.eta_width
        return _smooth_step(y)

    @property
    def cutoff_support(self) -> float:
        return self.cfg.plateau + self.cfg.eta_width

    def check_resolution(self, P: Optional[int] = None) -> None:
        """
        :raises ResolutionTooLow: falls supp χ_j weniger als 2 Kreiszellen
            von ∂U_j oder supp η weniger als 2 Zellen vom Rand des ℝ-Gitters
            entfernt liegt
        """
        P = P or self.cfg.P
        cell = 2.0 * math.pi / self.cfg.M
        if self.cfg.half_length - self.cfg.bump_radius < MIN_MARGIN_CELLS * cell:
            raise ResolutionTooLow(
                f"Abstand supp χ zu ∂U = {self.cfg.half_length - self.cfg.bump_radius:.3e} "
                f"< {MIN_MARGIN_CELLS} Zellen"
            )
        dx = self.cfg.R / P
        if 0.5 * self.cfg.R - self.cutoff_support < MIN_MARGIN_CELLS * dx:
            raise ResolutionTooLow(
                f"supp η = [−{self.cutoff_support:.3f}, {self.cutoff_support:.3f}] "
                f"passt nicht in das ℝ-Gitter der Länge {self.cfg.R}"
            )


def rotated_atlas(cfg: AtlasConfig, angle: float) -> ChartAtlas:
    """Derselbe Atlas mit um angle gedrehten Kartenzentren."""
    return ChartAtlas(replace(cfg, centers=tuple(c + angle for c in cfg.centers)))


# ---------------------------------------------------------------------------
# Funktionen auf dem Kreis
# ---------------------------------------------------------------------------


def circle_samples(u: FourierDistribution, M: int) -> np.ndarray:
    """f(2πm/M) = Σ_k c_k e^{ikθ_m}, exakt für M > 2K."""
    if u.n != 1:
        raise ValueError(f"Kreisfunktionen haben n = 1, erhalten: {u.n}")
    if M <= 2 * u.K:
        raise ResolutionTooLow(f"M = {M} löst das Band K = {u.K} nicht auf (M > 2K verlangt)")
    spectrum = np.zeros(M, dtype=complex)
    spectrum[np.mod(u.modes[:, 0], M)] = u.coeffs
    return ifft(spectrum) * M


def circle_coefficients(samples: np.ndarray, K: int) -> FourierDistribution:
    """Koeffizienten c_k, |k| ≤ K, aus M > 2K äquidistanten Werten."""
    values = np.asarray(samples, dtype=complex)
    M = values.size
    if M <= 2 * K:
        raise ResolutionTooLow(f"M = {M} Werte reichen nicht für das Band K = {K}")
    spectrum = fft(values) / M
    k = np.arange(-K, K + 1)
    return FourierDistribution(1, K, k.reshape(-1, 1), spectrum[np.mod(k, M)])


@dataclass(frozen=True, eq=False)
class CircleFunction:
    """Glatte Funktion auf S¹, spektral oder als Werte auf dem M-Gitter."""

    spectral: Optional[FourierDistribution] = None
    samples: Optional[np.ndarray] = None

    def __post_init__(self):
        if (self.spectral is None) == (self.samples is None):
            raise ValueError("Genau eine Darstellung (spektral oder Abtastwerte) angeben")
        if self.spectral is not None and self.spectral.n != 1:
            raise ValueError("Kreisfunktionen haben n = 1")

    @classmethod
    def from_distribution(cls, u: FourierDistribution) -> "CircleFunction":
        return cls(spectral=u)

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "CircleFunction":
        return cls(samples=np.asarray(samples, dtype=complex))

    def distribution(self, K: Optional[int] = None) -> FourierDistribution:
        if self.spectral is not None:
            return self.spectral
        M = self.samples.size
        return circle_coefficients(self.samples, (M - 1) // 2 if K is None else K)

    def sample(self, M: int) -> np.ndarray:
        if self.samples is not None and self.samples.size == M:
            return self.samples
        return circle_samples(self.distribution(), M)

    def evaluate(self, theta: np.ndarray) -> np.ndarray:
        """Analytische Auswertung Σ_k c_k e^{ikθ}."""
        u = self.distribution()
        coeffs = u.coeffs
        keep = np.abs(coeffs) > EVALUATION_CUTOFF * (np.abs(coeffs).max() if coeffs.size else 0.0)
        k = u.modes[keep, 0].astype(float)
        theta = np.asarray(theta, dtype=float)
        if not np.any(keep):
            return np.zeros(theta.shape, dtype=complex)
        return np.exp(1j * np.outer(theta, k)) @ coeffs[keep]


@dataclass(frozen=True, eq=False)
class ChartPieces:
    """Begradigte Stücke h_j auf dem Gitter x_p = x_start + p·dx."""

    x_start: float
    dx: float
    values: Tuple[np.ndarray, np.ndarray]

    @property
    def grid(self) -> np.ndarray:
        return self.x_start + self.dx * np.arange(self.values[0].size)

    @classmethod
    def zeros(cls, atlas: ChartAtlas, P: Optional[int] = None) -> "ChartPieces":
        x = atlas.line_grid(P)
        return cls(float(x[0]), float(x[1] - x[0]), (np.zeros(x.size, complex), np.zeros(x.size, complex)))


# ---------------------------------------------------------------------------
# Begradigung, Nähen, Normen
# ---------------------------------------------------------------------------


def rectify(atlas: ChartAtlas, f: CircleFunction, P: Optional[int] = None) -> ChartPieces:
    """
    h_j = (χ_j f)∘α_j auf dem ℝ-Gitter.

    :raises ResolutionTooLow: bei zu kleinem Trägerabstand
    """
    atlas.check_resolution(P)
    x = atlas.line_grid(P)
    pieces = []
    for j in range(2):
        theta = atlas.chart(j, x)
        pieces.append(atlas.partition(theta)[j] * f.evaluate(theta))
    return ChartPieces(float(x[0]), float(x[1] - x[0]), (pieces[0], pieces[1]))


def sew(atlas: ChartAtlas, h: ChartPieces) -> CircleFunction:
    """
    Σ_j (η_j h_j)∘α_j⁻¹, durch Null fortgesetzt, auf dem Kreisgitter.

    :raises SupportLeak: falls h außerhalb supp η mehr als 1e-8 der
        Gesamtmasse trägt
    """
    x = h.grid
    outside = np.abs(x) > atlas.cutoff_support
    total = sum(float(np.abs(v).sum()) for v in h.values)
    leak = sum(float(np.abs(v[outside]).sum()) for v in h.values)
    if total > 0 and leak > LEAK_TOLERANCE * total:
        raise SupportLeak(f"Anteil {leak / total:.3e} der Masse außerhalb von supp η")

    theta = atlas.circle_grid()
    out = np.zeros(theta.size, dtype=complex)
    for j in range(2):
        if not np.any(h.values[j]):
            continue
        xj = atlas.chart_inverse(j, theta)
        mask = np.isfinite(xj)
        mask[mask] = np.abs(xj[mask]) < atlas.cutoff_support
        interp = FFTInterpolator(h.values[j], h.dx, h.x_start)
        out[mask] += atlas.cutoff(xj[mask]) * interp(xj[mask])
    return CircleFunction.from_samples(out)


def _line_norm_squared(values: np.ndarray, dx: float, idx: SmoothnessIndex) -> np.ndarray:
    """‖h_j‖² in H^{s,φ}(ℝ) für jede Zeile von values."""
    n_fft = optimal_fft_length(values.shape[-1])
    # unitäre Fourier-Transformation, Phase e^{−iξ x_start} fällt im Betrag weg
    spectrum = multi_fft_evaluation(values, axis=-1, n=n_fft) * (dx / math.sqrt(2.0 * math.pi))
    xi = 2.0 * math.pi * fftfreq(n_fft, d=dx)
    d_xi = 2.0 * math.pi / (n_fft * dx)
    brackets, inverse = np.unique(np.sqrt(1.0 + xi * xi), return_inverse=True)
    w = idx.weights(brackets)[inverse]
    power = spectrum.real**2 + spectrum.imag**2
    return np.array([math.fsum((w * w * row * d_xi).tolist()) for row in np.atleast_2d(power)])


def line_norm(h: np.ndarray, dx: float, idx: SmoothnessIndex) -> float:
    """H^{s,φ}(ℝ)-Norm einer Gitterfunktion mit kompaktem Träger."""
    return math.sqrt(float(_line_norm_squared(np.atleast_2d(h), dx, idx)[0]))


@dataclass(frozen=True)
class ChartNorm:
    value: float  # mit 2P Punkten
    coarse: float  # mit P Punkten
    error_estimate: float


def _chart_norm_at(atlas: ChartAtlas, f: CircleFunction, idx: SmoothnessIndex, P: int) -> float:
    h = rectify(atlas, f, P)
    return math.sqrt(math.fsum(_line_norm_squared(np.vstack(h.values), h.dx, idx).tolist()))


def chart_norm(
    atlas: ChartAtlas, f: CircleFunction, idx: SmoothnessIndex, P: Optional[int] = None
) -> ChartNorm:
    """
    (Σ_j ‖(χ_j f)∘α_j‖²_{H^{s,φ}(ℝ)})^{1/2} mit Verfeinerungsschätzung P → 2P.

    :raises GridUnderResolved: falls sich der Wert um mehr als 1 % ändert
    """
    P = P or atlas.cfg.P
    coarse = _chart_norm_at(atlas, f, idx, P)
    fine = _chart_norm_at(atlas, f, idx, 2 * P)
    error = abs(fine - coarse)
    if fine > 0 and error > REFINEMENT_TOLERANCE * fine:
        raise GridUnderResolved(
            f"Kartennorm ändert sich um {error / fine:.2%} bei P={P} → {2 * P}"
        )
    return ChartNorm(fine, coarse, error)


@dataclass(frozen=True)
class EquivalenceStudy:
    ratio_min: float
    ratio_max: float
    coarse_min: float
    coarse_max: float
    ratios: Tuple[float, ...]

    @property
    def spread(self) -> float:
        return self.ratio_max / self.ratio_min

    @property
    def coarse_spread(self) -> float:
        return self.coarse_max / self.coarse_min

    @property
    def refinement_change(self) -> float:
        return abs(self.spread - self.coarse_spread) / self.spread


def equivalence_study(
    atlas: ChartAtlas, family: Sequence[CircleFunction], idx: SmoothnessIndex
) -> EquivalenceStudy:
    """
    Quotienten chart_norm(f)/hnorm(f) über eine Familie glatter Funktionen.

    Es gibt keine theoretische Konstante; die Streuung ratio_max/ratio_min
    wird nur berichtet.
    """
    if not family:
        raise EmptyGrid("Die Funktionsfamilie ist leer")
    fine, coarse = [], []
    for f in family:
        hn = hnorm(f.distribution(), idx)
        if hn == 0.0:
            raise HypothesisViolation("Die Nullfunktion ist in der Familie nicht erlaubt")
        cn = chart_norm(atlas, f, idx)
        fine.append(cn.value / hn)
        coarse.append(cn.coarse / hn)
    return EquivalenceStudy(min(fine), max(fine), min(coarse), max(coarse), tuple(fine))


def mode_family(K: int, Kband: Optional[int] = None) -> Tuple[CircleFunction, ...]:
    """Einzelmoden e^{ikθ}, k = 0..K."""
    band = K if Kband is None else Kband
    return tuple(
        CircleFunction.from_distribution(
            FourierDistribution(1, band, np.array([[k]]), np.array([1.0 + 0j]))
        )
        for k in range(K + 1)
    )
