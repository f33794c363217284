"""
couple.py – Diagonales Spektralmodell zulässiger Hilbert-Paare [X₀, X₁].

Im gemeinsamen Eigenbasis-Modell ist X₀ ein gewichteter ℓ²-Raum mit
Basisgewichten b_k (Standard 1), und der erzeugende Operator J ist die
Multiplikation mit den Eigenwerten λ_k ≥ r > 0. Damit gilt exakt

    ‖u‖_{X_ψ} = ‖ψ(J)u‖_{X₀} = (Σ_k (b_k ψ(λ_k))² |u_k|²)^{1/2}

und die Normidentitäten für Reiteration, Dualität und direkte Produkte
werden zu Gleichheiten zweier Auswertungswege.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from errors import (
    DimensionMismatch,
    NoCommonLowerBound,
    NonFiniteEntry,
    NonPositiveParameter,
    UnboundedRatio,
)
from param import Constant, ParamFn, Power, dual_chi, reiteration_omega
from power_iteration import largest_singular_value

logger = logging.getLogger(__name__)

MAX_RATIO = 1e12
DEFAULT_TOLERANCE = 1e-12


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SpectralCouple:
    """
    Endliches Diagonalmodell eines Paares [X₀, X₁].

    :param eigenvalues: Diagonale von J in der gemeinsamen Eigenbasis
    :param r: untere Spektralschranke, alle λ_k ≥ r > 0
    :param base: Gewichte der X₀-Norm (Standard: 1)
    """

    eigenvalues: np.ndarray
    r: float
    base: Optional[np.ndarray] = None

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float).ravel()
        if lam.size == 0:
            raise DimensionMismatch("Ein Paar braucht mindestens einen Eigenwert")
        if not self.r > 0:
            raise NonPositiveParameter(f"r muss positiv sein, erhalten: {self.r}")
        if not np.all(np.isfinite(lam)):
            raise NonFiniteEntry("Eigenwerte müssen endlich sein")
        if lam.min() < self.r:
            raise NoCommonLowerBound(
                f"Eigenwert {lam.min()} liegt unter der Schranke r={self.r}"
            )
        base = np.ones_like(lam) if self.base is None else np.asarray(self.base, dtype=float).ravel()
        if base.shape != lam.shape:
            raise DimensionMismatch(
                f"{base.size} Basisgewichte für {lam.size} Eigenwerte"
            )
        if not np.all(base > 0) or not np.all(np.isfinite(base)):
            raise NonPositiveParameter("Basisgewichte müssen positiv und endlich sein")
        object.__setattr__(self, "eigenvalues", _frozen(lam))
        object.__setattr__(self, "base", _frozen(base))
        object.__setattr__(self, "r", float(self.r))

    @property
    def dimension(self) -> int:
        return int(self.eigenvalues.size)

    def weights(self, psi: ParamFn) -> np.ndarray:
        """b_k ψ(λ_k), die Diagonale der X_ψ-Norm."""
        return self.base * psi.evaluate_many(self.eigenvalues)


@dataclass(frozen=True, eq=False)
class SpectralVector:
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex).ravel()
        if not np.all(np.isfinite(c)):
            raise NonFiniteEntry("Koeffizienten müssen endlich sein")
        object.__setattr__(self, "coefficients", _frozen(c))

    @classmethod
    def from_parts(cls, re: Sequence[float], im: Optional[Sequence[float]] = None) -> "SpectralVector":
        re_arr = np.asarray(re, dtype=float)
        im_arr = np.zeros_like(re_arr) if im is None else np.asarray(im, dtype=float)
        if re_arr.shape != im_arr.shape:
            raise DimensionMismatch("u_re und u_im haben unterschiedliche Länge")
        return cls(re_arr + 1j * im_arr)

    @classmethod
    def zeros(cls, n: int) -> "SpectralVector":
        return cls(np.zeros(n, dtype=complex))

    def __len__(self) -> int:
        return int(self.coefficients.size)

    @property
    def abs_squared(self) -> np.ndarray:
        c = self.coefficients
        return c.real * c.real + c.imag * c.imag


@dataclass(frozen=True, eq=False)
class SpectralOperator:
    """Dichte Matrix T der Form (N_Y, N_X) von der X- in die Y-Basis."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2:
            raise DimensionMismatch(f"2D-Matrix erwartet, erhalten: Form {m.shape}")
        if not np.all(np.isfinite(m)):
            raise NonFiniteEntry("Operator enthält nicht-endliche Einträge")
        object.__setattr__(self, "matrix", _frozen(m))

    @classmethod
    def identity(cls, n: int) -> "SpectralOperator":
        return cls(np.eye(n, dtype=complex))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape


@dataclass(frozen=True)
class NormComparison:
    """Zwei unabhängig berechnete Seiten einer Normidentität."""

    lhs: float
    rhs: float

    @property
    def rel_error(self) -> float:
        return abs(self.lhs - self.rhs) / max(abs(self.lhs), abs(self.rhs), 1.0)

    def holds(self, tol: float = DEFAULT_TOLERANCE) -> bool:
        return self.rel_error <= tol


def _check_dim(c: SpectralCouple, u: SpectralVector) -> None:
    if len(u) != c.dimension:
        raise DimensionMismatch(
            f"Vektor der Länge {len(u)} passt nicht zu Paar der Dimension {c.dimension}"
        )


def _weighted_norm(weights: np.ndarray, u: SpectralVector) -> float:
    terms = (weights * weights) * u.abs_squared
    return math.sqrt(math.fsum(terms.tolist()))


def norm_psi_terms(c: SpectralCouple, psi: ParamFn, u: SpectralVector) -> np.ndarray:
    """Summanden (b_k ψ(λ_k))² |u_k|² von ‖u‖²_{X_ψ} in Eigenbasis-Reihenfolge."""
    _check_dim(c, u)
    w = c.weights(psi)
    return (w * w) * u.abs_squared


def norm_psi_squared(c: SpectralCouple, psi: ParamFn, u: SpectralVector) -> float:
    return math.fsum(norm_psi_terms(c, psi, u).tolist())


def norm_psi(c: SpectralCouple, psi: ParamFn, u: SpectralVector) -> float:
    """
    ‖u‖_{X_ψ} = ‖ψ(J)u‖_{X₀}.

    :raises DimensionMismatch: falls len(u) ≠ dim(c)
    """
    return math.sqrt(norm_psi_squared(c, psi, u))


@dataclass(frozen=True)
class EmbeddingConstants:
    norm_bound: float
    tail_sup: float
    attained_at: float  # Eigenwert, an dem norm_bound angenommen wird


def embedding_constants(c: SpectralCouple, chi: ParamFn, psi: ParamFn) -> EmbeddingConstants:
    """
    Norm der Einbettung X_χ ↪ X_ψ: max_k ψ(λ_k)/χ(λ_k).

    tail_sup ist dasselbe Maximum über die Eigenwerte echt oberhalb des
    Medians (0, falls es keine gibt); es dient als Kompaktheitsindikator.
    Bei Gleichstand gewinnt der erste Index.
    """
    ratios = psi.evaluate_many(c.eigenvalues) / chi.evaluate_many(c.eigenvalues)
    k = int(np.argmax(ratios))
    tail = ratios[c.eigenvalues > np.median(c.eigenvalues)]
    tail_sup = float(tail.max()) if tail.size else 0.0
    return EmbeddingConstants(float(ratios[k]), tail_sup, float(c.eigenvalues[k]))


@dataclass(frozen=True)
class EmbeddingChain:
    """‖u‖₀ ≤ C‖u‖_ψ und ‖u‖_ψ ≤ C′‖u‖₁."""

    norm0: float
    norm_psi: float
    norm1: float
    c_lower: float
    c_upper: float

    def holds(self, tol: float = DEFAULT_TOLERANCE) -> bool:
        return (
            self.norm0 <= self.c_lower * self.norm_psi * (1.0 + tol)
            and self.norm_psi <= self.c_upper * self.norm1 * (1.0 + tol)
        )


def embedding_chain(c: SpectralCouple, psi: ParamFn, u: SpectralVector) -> EmbeddingChain:
    """Dichte Einbettungen X₁ ↪ X_ψ ↪ X₀ mit den exakten Diagonalkonstanten."""
    values = psi.evaluate_many(c.eigenvalues)
    return EmbeddingChain(
        norm_psi(c, Constant(1.0), u),
        norm_psi(c, psi, u),
        norm_psi(c, Power(1.0), u),
        float(np.max(1.0 / values)),
        float(np.max(values / c.eigenvalues)),
    )


def operator_norm(
    cX: SpectralCouple, cY: SpectralCouple, psi: ParamFn, T: SpectralOperator
) -> float:
    """
    ‖T‖_{X_ψ→Y_ψ} = σ_max(D_Y T D_X⁻¹) mit D = diag(b ψ(λ)).

    :raises DimensionMismatch: falls T nicht die Form (N_Y, N_X) hat
    """
    if T.shape != (cY.dimension, cX.dimension):
        raise DimensionMismatch(
            f"Operator der Form {T.shape} passt nicht zu ({cY.dimension}, {cX.dimension})"
        )
    dX = cX.weights(psi)
    dY = cY.weights(psi)
    return largest_singular_value((dY[:, None] * T.matrix) / dX[None, :])


@dataclass(frozen=True)
class TwoPointResult:
    norm_ratio: float  # geschlossene Form ψ(t)/ψ(s)
    norm_ratio_operator: float  # über operator_norm
    bound_ratio: float  # norm_ratio / max{1, t/s}


def two_point_counterexample(psi: ParamFn, s: float, t: float) -> TwoPointResult:
    """
    Zweipunkt-Konstruktion: J = diag(s, t), (Tu)(0) = 0, (Tu)(1) = u(0).

    Dann ist ‖T‖_{X_j} ≤ max{1, t/s}^j, aber ‖T‖_{X_ψ} = ψ(t)/ψ(s); wächst
    bound_ratio unbeschränkt, gibt es keine Interpolationskonstante.
    """
    if not (s > 1.0 and t > 1.0):
        raise NonPositiveParameter(f"s, t > 1 verlangt, erhalten s={s}, t={t}")
    closed = psi.evaluate(t) / psi.evaluate(s)
    couple = SpectralCouple(np.array([s, t]), 1.0)
    T = SpectralOperator(np.array([[0.0, 0.0], [1.0, 0.0]]))
    via_operator = operator_norm(couple, couple, psi, T)
    return TwoPointResult(closed, via_operator, closed / max(1.0, t / s))


COUNTEREXAMPLE_COLUMNS = ("t_over_s", "s", "t", "norm_ratio", "norm_ratio_operator", "bound_ratio")


def counterexample_table(
    psi: ParamFn, s: float = 2.0, ratios: Optional[Sequence[float]] = None
) -> List[dict]:
    """
    Tabelle der Zweipunkt-Konstruktion über t/s (Standard 10^0 … 10^6).

    Für quasikonkaves ψ bleibt bound_ratio ≤ 1, sonst wächst es.
    """
    grid = np.logspace(0.0, 6.0, 13) if ratios is None else np.asarray(ratios, dtype=float)
    rows = []
    for q in grid:
        res = two_point_counterexample(psi, s, s * float(q))
        rows.append(
            {
                "t_over_s": float(q),
                "s": float(s),
                "t": s * float(q),
                "norm_ratio": res.norm_ratio,
                "norm_ratio_operator": res.norm_ratio_operator,
                "bound_ratio": res.bound_ratio,
            }
        )
    return rows


def reiteration_check(
    c: SpectralCouple, f: ParamFn, g: ParamFn, psi: ParamFn, u: SpectralVector
) -> NormComparison:
    """
    [X_f, X_g]_ψ = X_ω mit ω(t) = f(t) ψ(g(t)/f(t)).

    lhs: zweistufig, das Zwischenpaar [X_f, X_g] hat Basisgewichte b·f(λ)
    und den erzeugenden Operator mit Eigenwerten g(λ)/f(λ).
    rhs: norm_psi mit ω aus reiteration_omega.

    :raises UnboundedRatio: falls max f(λ_k)/g(λ_k) > 1e12
    """
    _check_dim(c, u)
    fl = f.evaluate_many(c.eigenvalues)
    gl = g.evaluate_many(c.eigenvalues)
    worst = float(np.max(fl / gl))
    if worst > MAX_RATIO:
        raise UnboundedRatio(f"max f/g = {worst:.3e} auf dem Spektrum")
    mu = gl / fl
    intermediate = SpectralCouple(mu, float(mu.min()), c.base * fl)
    lhs = norm_psi(intermediate, psi, u)
    rhs = norm_psi(c, reiteration_omega(f, g, psi), u)
    return NormComparison(lhs, rhs)


def duality_check(c: SpectralCouple, psi: ParamFn, u: SpectralVector) -> NormComparison:
    """
    [X₁′, X₀′]_ψ = [X₀, X₁]_χ′ mit χ(t) = t/ψ(t), bezüglich der ℓ²-Paarung.

    lhs: Gewichte ψ(λ)/(b λ); rhs: Gewichte 1/(b χ(λ)).
    """
    _check_dim(c, u)
    lam = c.eigenvalues
    lhs_w = psi.evaluate_many(lam) / (c.base * lam)
    rhs_w = 1.0 / (c.base * dual_chi(psi).evaluate_many(lam))
    return NormComparison(_weighted_norm(lhs_w, u), _weighted_norm(rhs_w, u))


def product_couple(cs: Sequence[SpectralCouple], r: Optional[float] = None) -> SpectralCouple:
    """
    Direktes Produkt: Eigenwerte und Basisgewichte hintereinander.

    :param r: gemeinsame untere Schranke (Standard: kleinstes r der Faktoren)
    :raises NoCommonLowerBound: falls ein Eigenwert unter r liegt
    """
    if not cs:
        raise DimensionMismatch("Produkt über eine leere Familie")
    common = min(c.r for c in cs) if r is None else float(r)
    lam = np.concatenate([c.eigenvalues for c in cs])
    if lam.min() < common:
        raise NoCommonLowerBound(
            f"min λ = {lam.min()} liegt unter der gemeinsamen Schranke r={common}"
        )
    return SpectralCouple(lam, common, np.concatenate([c.base for c in cs]))


def product_norm_check(
    cs: Sequence[SpectralCouple],
    psi: ParamFn,
    us: Sequence[SpectralVector],
    r: Optional[float] = None,
) -> NormComparison:
    """
    [ΠX₀⁽ᵏ⁾, ΠX₁⁽ᵏ⁾]_ψ = Π[X₀⁽ᵏ⁾, X₁⁽ᵏ⁾]_ψ, bitgleich.

    Beide Seiten summieren dieselben Summanden mit math.fsum (korrekt
    gerundet, also unabhängig von der Reihenfolge).
    """
    if len(cs) != len(us):
        raise DimensionMismatch(f"{len(cs)} Paare, aber {len(us)} Vektoren")
    if not cs:
        return NormComparison(0.0, 0.0)
    prod = product_couple(cs, r)
    joined = SpectralVector(np.concatenate([u.coefficients for u in us]))
    lhs = norm_psi(prod, psi, joined)
    parts: List[float] = []
    for c, u in zip(cs, us):
        parts.extend(norm_psi_terms(c, psi, u).tolist())
    rhs = math.sqrt(math.fsum(parts))
    return NormComparison(lhs, rhs)


# ---------------------------------------------------------------------------
# Zufallsinstanzen
# ---------------------------------------------------------------------------


def random_couple(
    rng: np.random.Generator,
    n: int,
    lo: float = 1.0,
    hi: float = 1e8,
) -> SpectralCouple:
    """Eigenwerte log-gleichverteilt in [lo, hi], r = lo."""
    lam = np.exp(rng.uniform(math.log(lo), math.log(hi), size=n))
    return SpectralCouple(np.maximum(lam, lo), lo)


def random_vector(rng: np.random.Generator, n: int) -> SpectralVector:
    return SpectralVector(rng.standard_normal(n) + 1j * rng.standard_normal(n))


def random_operator(rng: np.random.Generator, ny: int, nx: int) -> SpectralOperator:
    return SpectralOperator(rng.standard_normal((ny, nx)) + 1j * rng.standard_normal((ny, nx)))


@dataclass(frozen=True)
class SweepResult:
    max_observed_c: float
    worst_trial: int
    observed: Tuple[float, ...] = field(repr=False)


def uniform_bound_sweep(
    psi: ParamFn,
    m: float,
    trials: int,
    seed: int = 0,
    max_dim: int = 8,
    diagonal: bool = False,
) -> SweepResult:
    """
    max über Zufallstripel (X, Y, T) von ‖T‖_ψ / max(‖T‖₀, ‖T‖₁).

    Die Einbettungsnormen sind per Konstruktion ≤ m (λ ≥ 1/m). Mit
    diagonal=True ist T diagonal und X = Y.
    """
    if not m > 0:
        raise NonPositiveParameter(f"m muss positiv sein, erhalten: {m}")
    if trials <= 0:
        return SweepResult(0.0, -1, ())
    zero, one = Constant(1.0), Power(1.0)
    observed = []
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        nx = int(rng.integers(1, max_dim + 1))
        cX = random_couple(rng, nx, lo=1.0 / m, hi=1e6)
        if diagonal:
            cY = cX
            T = SpectralOperator(np.diag(rng.standard_normal(nx) + 1j * rng.standard_normal(nx)))
        else:
            ny = int(rng.integers(1, max_dim + 1))
            cY = random_couple(rng, ny, lo=1.0 / m, hi=1e6)
            T = random_operator(rng, ny, nx)
        endpoint = max(operator_norm(cX, cY, zero, T), operator_norm(cX, cY, one, T))
        observed.append(operator_norm(cX, cY, psi, T) / endpoint)
    worst = int(np.argmax(observed))
    return SweepResult(float(observed[worst]), worst, tuple(observed))
