"""
param.py – Parameterfunktionen ψ, φ, χ, ω auf der Halbachse (0, ∞).

Eine Parameterfunktion ist ein unveränderlicher Ausdrucksbaum aus Blättern
(Konstante, Potenz, logarithmische Multiskala, Karamata-Form) und Knoten
(Produkt, Quotient, reelle Potenz, Summe, Kompositionen, Abschneiden unter
t₀). Jeder Knoten trägt den deklarierten Index θ der quasiregulären
Variation mit, damit Interpolationsaussagen per Konstruktion gelten.

Abgeleitete Parameter:
- reiteration_omega:       ω(t) = f(t) ψ(g(t)/f(t))
- dual_chi:                χ(t) = t / ψ(t)
- interpolation_psi:       ψ(t) = t^{ε/(ε+δ)} φ(t^{1/(ε+δ)}), ψ = φ(1) für t < 1
- interpolated_smoothness: (s, φ) des interpolierten verfeinerten Raums
- phi_s:                   φ_s(t) = t^{s/m} φ(t^{1/m}), φ_s = φ(1) für t < 1
- karamata_build, qsv_compose
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple, Union

import numpy as np

import karamata
from errors import NonPositiveArgument, NonPositiveParameter, OrderViolation
from karamata import AlphaSpec, BetaSpec

logger = logging.getLogger(__name__)

# Verschiebungen e, e^e, e^{e^e}: alle iterierten Logarithmen von t + E sind > 1
LOG_SHIFTS = (0.0, math.e, math.exp(math.e), math.exp(math.exp(math.e)))
MAX_LOG_LEVELS = 3

# Stichprobengitter für die Warnungen bei Voraussetzungen "nahe +∞"
_TAIL_GRID = tuple(10.0**k for k in range(3, 10))

Number = Union[int, float]


class ParamFn:
    """Basisklasse aller Parameterfunktionen."""

    def evaluate(self, t: float) -> float:
        """
        Wert der Funktion an der Stelle t > 0.

        :raises NonPositiveArgument: falls t ≤ 0
        """
        t = float(t)
        if not t > 0.0:
            raise NonPositiveArgument(f"Argument muss positiv sein, erhalten: {t}")
        return self._eval(t)

    def __call__(self, t: float) -> float:
        return self.evaluate(t)

    def evaluate_many(self, ts: Iterable[float]) -> np.ndarray:
        """Punktweise Auswertung; jeder Wert ist bitgleich zu evaluate(t)."""
        arr = np.asarray(ts, dtype=float)
        values = [self.evaluate(t) for t in arr.ravel()]
        return np.array(values, dtype=float).reshape(arr.shape)

    def _eval(self, t: float) -> float:
        raise NotImplementedError

    @property
    def declared_index(self) -> Optional[float]:
        """Index θ der quasiregulären Variation bei +∞, falls bekannt."""
        return None

    @property
    def is_qsv(self) -> bool:
        return self.declared_index == 0.0

    def describe(self) -> str:
        """Darstellung in der Ausdruckssyntax von expression.py."""
        raise NotImplementedError

    def __str__(self) -> str:
        return self.describe()

    def __mul__(self, other: Union["ParamFn", Number]) -> "ParamFn":
        return Product(self, _lift(other))

    def __rmul__(self, other: Number) -> "ParamFn":
        return Product(_lift(other), self)

    def __truediv__(self, other: Union["ParamFn", Number]) -> "ParamFn":
        return Quotient(self, _lift(other))

    def __rtruediv__(self, other: Number) -> "ParamFn":
        return Quotient(_lift(other), self)

    def __pow__(self, sigma: Number) -> "ParamFn":
        return RealPower(self, float(sigma))

    def __add__(self, other: Union["ParamFn", Number]) -> "ParamFn":
        return Sum(self, _lift(other))

    def __radd__(self, other: Number) -> "ParamFn":
        return Sum(_lift(other), self)


def _lift(value: Union[ParamFn, Number]) -> ParamFn:
    if isinstance(value, ParamFn):
        return value
    return Constant(float(value))


def _require_positive(name: str, value: float) -> None:
    if not value > 0:
        raise NonPositiveParameter(f"{name} muss positiv sein, erhalten: {value}")


# ---------------------------------------------------------------------------
# Blätter
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=True)
class Constant(ParamFn):
    c: float

    def __post_init__(self):
        _require_positive("c", self.c)

    def _eval(self, t: float) -> float:
        return self.c

    @property
    def declared_index(self) -> Optional[float]:
        return 0.0

    def describe(self) -> str:
        return f"const({self.c!r})"


@dataclass(frozen=True, eq=True)
class Power(ParamFn):
    theta: float

    def _eval(self, t: float) -> float:
        return t**self.theta

    @property
    def declared_index(self) -> Optional[float]:
        return float(self.theta)

    def describe(self) -> str:
        return f"pow({self.theta!r})"


@dataclass(frozen=True, eq=True)
class LogMultiscale(ParamFn):
    """
    (ln t)^{r₁} (ln ln t)^{r₂} (ln ln ln t)^{r₃}, ausgewertet an t + E_k.

    Die Verschiebung E_k hält alle k iterierten Logarithmen über 1.
    """

    exponents: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(float(r) for r in self.exponents))
        if len(self.exponents) > MAX_LOG_LEVELS:
            raise NonPositiveParameter(
                f"Höchstens {MAX_LOG_LEVELS} iterierte Logarithmen unterstützt"
            )

    @property
    def shift(self) -> float:
        return LOG_SHIFTS[len(self.exponents)]

    def _eval(self, t: float) -> float:
        value = 1.0
        level = t + self.shift
        for r in self.exponents:
            level = math.log(level)
            value *= level**r
        return value

    @property
    def declared_index(self) -> Optional[float]:
        return 0.0

    def describe(self) -> str:
        return "logms(" + ",".join(repr(r) for r in self.exponents) + ")"


@dataclass(frozen=True, eq=True)
class KaramataForm(ParamFn):
    """φ(t) = exp(β(t) + ∫_r^t α(τ)/τ dτ) für t ≥ r, φ(r) für t < r."""

    alpha: AlphaSpec
    beta: BetaSpec
    r: float

    def __post_init__(self):
        _require_positive("r", self.r)
        if self.alpha.needs_log_domain and not self.r > 1.0:
            raise NonPositiveParameter(
                f"α={self.alpha.describe()} benötigt r > 1 (ln r > 0)"
            )

    def _eval(self, t: float) -> float:
        tt = max(t, self.r)
        return math.exp(self.beta(tt) + karamata.log_integral(self.alpha, self.r, tt))

    @property
    def declared_index(self) -> Optional[float]:
        return 0.0

    def describe(self) -> str:
        return (
            f"karamata(alpha={self.alpha.describe()},"
            f"beta={self.beta.describe()},r={self.r!r})"
        )


# ---------------------------------------------------------------------------
# Knoten
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=True)
class Product(ParamFn):
    left: ParamFn
    right: ParamFn

    def _eval(self, t: float) -> float:
        return self.left._eval(t) * self.right._eval(t)

    @property
    def declared_index(self) -> Optional[float]:
        a, b = self.left.declared_index, self.right.declared_index
        return None if a is None or b is None else a + b

    def describe(self) -> str:
        return f"({self.left.describe()})*({self.right.describe()})"


@dataclass(frozen=True, eq=True)
class Quotient(ParamFn):
    left: ParamFn
    right: ParamFn

    def _eval(self, t: float) -> float:
        return self.left._eval(t) / self.right._eval(t)

    @property
    def declared_index(self) -> Optional[float]:
        a, b = self.left.declared_index, self.right.declared_index
        return None if a is None or b is None else a - b

    def describe(self) -> str:
        return f"({self.left.describe()})/({self.right.describe()})"


@dataclass(frozen=True, eq=True)
class RealPower(ParamFn):
    base: ParamFn
    sigma: float

    def _eval(self, t: float) -> float:
        return self.base._eval(t) ** self.sigma

    @property
    def declared_index(self) -> Optional[float]:
        a = self.base.declared_index
        return None if a is None else self.sigma * a

    def describe(self) -> str:
        return f"({self.base.describe()})**{self.sigma!r}"


@dataclass(frozen=True, eq=True)
class Sum(ParamFn):
    left: ParamFn
    right: ParamFn

    def _eval(self, t: float) -> float:
        return self.left._eval(t) + self.right._eval(t)

    @property
    def declared_index(self) -> Optional[float]:
        a, b = self.left.declared_index, self.right.declared_index
        return None if a is None or b is None else max(a, b)

    def describe(self) -> str:
        return f"({self.left.describe()})+({self.right.describe()})"


@dataclass(frozen=True, eq=True)
class Composition(ParamFn):
    """outer(inner(t))."""

    outer: ParamFn
    inner: ParamFn

    def _eval(self, t: float) -> float:
        return self.outer._eval(self.inner._eval(t))

    @property
    def declared_index(self) -> Optional[float]:
        a, b = self.outer.declared_index, self.inner.declared_index
        # nur wenn inner → ∞ regulär variiert, ist der Index multiplikativ
        if a is None or b is None or b <= 0:
            return None
        return a * b

    def describe(self) -> str:
        return f"compose({self.outer.describe()},{self.inner.describe()})"


@dataclass(frozen=True, eq=True)
class PowerScaledComposition(ParamFn):
    """t^{ε/(ε+δ)} φ(t^{1/(ε+δ)})."""

    phi: ParamFn
    eps: float
    delta: float

    def __post_init__(self):
        _require_positive("ε", self.eps)
        _require_positive("δ", self.delta)

    def _eval(self, t: float) -> float:
        total = self.eps + self.delta
        return t ** (self.eps / total) * self.phi._eval(t ** (1.0 / total))

    @property
    def declared_index(self) -> Optional[float]:
        a = self.phi.declared_index
        return None if a is None else (self.eps + a) / (self.eps + self.delta)

    def describe(self) -> str:
        return f"interp({self.phi.describe()},{self.eps!r},{self.delta!r})"


@dataclass(frozen=True, eq=True)
class CompositionQSV(ParamFn):
    """χ(t^θ φ(t)), quasilangsam variierend für χ, φ ∈ QSV."""

    chi: ParamFn
    theta: float
    phi: ParamFn

    def __post_init__(self):
        if self.theta < 0:
            raise NonPositiveParameter(f"θ muss ≥ 0 sein, erhalten: {self.theta}")

    def _eval(self, t: float) -> float:
        return self.chi._eval(t**self.theta * self.phi._eval(t))

    @property
    def declared_index(self) -> Optional[float]:
        return 0.0 if self.chi.is_qsv else None

    def describe(self) -> str:
        return f"qsv({self.chi.describe()},{self.theta!r},{self.phi.describe()})"


@dataclass(frozen=True, eq=True)
class PhiS(ParamFn):
    """t^{s/m} φ(t^{1/m})."""

    phi: ParamFn
    s: float
    m: float

    def __post_init__(self):
        _require_positive("m", self.m)

    def _eval(self, t: float) -> float:
        return t ** (self.s / self.m) * self.phi._eval(t ** (1.0 / self.m))

    @property
    def declared_index(self) -> Optional[float]:
        a = self.phi.declared_index
        return None if a is None else (self.s + a) / self.m

    def describe(self) -> str:
        return f"phis({self.phi.describe()},{self.s!r},{self.m!r})"


@dataclass(frozen=True, eq=True)
class LowCutoffClamp(ParamFn):
    """inner(max(t, t₀)): unterhalb von t₀ eingefroren."""

    inner: ParamFn
    t0: float

    def __post_init__(self):
        _require_positive("t₀", self.t0)

    def _eval(self, t: float) -> float:
        return self.inner._eval(t if t >= self.t0 else self.t0)

    @property
    def declared_index(self) -> Optional[float]:
        return self.inner.declared_index

    def describe(self) -> str:
        return f"clamp({self.inner.describe()},{self.t0!r})"


# ---------------------------------------------------------------------------
# Abgeleitete Parameter
# ---------------------------------------------------------------------------


def _warn_if_growing(fn: ParamFn, label: str) -> None:
    values = fn.evaluate_many(_TAIL_GRID)
    if values[-1] > 1.05 * values[:-1].max() and np.all(np.diff(values) > 0):
        logger.warning(f"{label} scheint nahe +∞ unbeschränkt (Stichprobe bis 1e9)")


def reiteration_omega(f: ParamFn, g: ParamFn, psi: ParamFn) -> ParamFn:
    """ω(t) = f(t) ψ(g(t)/f(t)) für die Reiteration [X_f, X_g]_ψ = X_ω."""
    _warn_if_growing(Quotient(f, g), "f/g")
    return Product(f, Composition(psi, Quotient(g, f)))


def dual_chi(psi: ParamFn) -> ParamFn:
    """χ(t) = t/ψ(t), der Parameter des dualen Paares."""
    _warn_if_growing(Quotient(psi, Power(1.0)), "ψ(t)/t")
    return Quotient(Power(1.0), psi)


def interpolation_psi(phi: ParamFn, eps: float, delta: float) -> ParamFn:
    """
    ψ(t) = t^{ε/(ε+δ)} φ(t^{1/(ε+δ)}) für t ≥ 1 und ψ(t) = φ(1) für t < 1.

    Mit [H^{s-ε}, H^{s+δ}]_ψ = H^{s,φ}; deklarierter Index ε/(ε+δ).
    """
    return LowCutoffClamp(PowerScaledComposition(phi, float(eps), float(delta)), 1.0)


def interpolated_smoothness(
    phi0: ParamFn,
    phi1: ParamFn,
    s0: float,
    s1: float,
    theta: float,
    chi: ParamFn,
) -> Tuple[float, ParamFn]:
    """
    Glattheitsindex (s, φ) von [H^{s₀,φ₀}, H^{s₁,φ₁}]_ψ mit ψ(t) = t^θ χ(t):

        s = (1-θ) s₀ + θ s₁
        φ(t) = φ₀^{1-θ}(t) φ₁^θ(t) χ(t^{s₁-s₀} φ₁(t)/φ₀(t))
    """
    if s0 > s1:
        raise OrderViolation(f"s₀ ≤ s₁ verlangt, erhalten s₀={s0}, s₁={s1}")
    if not 0.0 < theta < 1.0:
        raise ValueError(f"θ muss in (0, 1) liegen, erhalten: {theta}")
    if s0 == s1:
        _warn_if_growing(Quotient(phi0, phi1), "φ₀/φ₁")
    s = (1.0 - theta) * s0 + theta * s1
    phi = Product(
        Product(RealPower(phi0, 1.0 - theta), RealPower(phi1, theta)),
        CompositionQSV(chi, s1 - s0, Quotient(phi1, phi0)),
    )
    return s, phi


def phi_s(phi: ParamFn, s: float, m: float) -> ParamFn:
    """φ_s(t) = t^{s/m} φ(t^{1/m}) für t ≥ 1 und φ_s(t) = φ(1) für t < 1."""
    return LowCutoffClamp(PhiS(phi, float(s), float(m)), 1.0)


def karamata_build(alpha: AlphaSpec, beta: BetaSpec, r: float) -> ParamFn:
    """Quasilangsam variierende Funktion in Karamata-Darstellung."""
    return KaramataForm(alpha, beta, float(r))


def qsv_compose(chi: ParamFn, theta: float, phi: ParamFn) -> ParamFn:
    """χ(t^θ φ(t)); für θ = 0 muss φ(t) → ∞ gelten."""
    if theta == 0:
        values = phi.evaluate_many(_TAIL_GRID)
        if not values[-1] > values[0]:
            logger.warning("qsv_compose mit θ=0: φ wächst in der Stichprobe nicht")
    return CompositionQSV(chi, float(theta), phi)


def log_power(r: float) -> ParamFn:
    """(ln(t + e))^r, Kurzform der einstufigen Multiskala."""
    return LogMultiscale((float(r),))
