"""
karamata.py – Katalog der Funktionen α, β der Karamata-Darstellung

    φ(t) = exp( β(t) + ∫_r^t α(τ)/τ dτ ),   t ≥ r,

und die adaptive Simpson-Quadratur im Logarithmus u = ln τ.

Das Integral wird in Einheitssegmenten von u zerlegt; fertige Segmente
werden zwischengespeichert, sodass jede weitere Auswertung nur noch das
angebrochene Restsegment integriert.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import mpmath as mp

from errors import NonPositiveParameter, QuadratureNonConvergence

logger = logging.getLogger(__name__)

REL_TOL = 1e-10
MAX_DEPTH = 40

ALPHA_KINDS = ("zero", "inv_log", "inv_pow", "sin_log")
BETA_KINDS = ("const", "sin_loglog", "step")


@dataclass(frozen=True)
class AlphaSpec:
    """
    Stetige Funktion α:[r,∞) → ℝ mit α(t) → 0.

    Katalog:
        zero        α ≡ 0
        inv_log     α(τ) = a / ln τ
        inv_pow     α(τ) = a / τ^p,  p > 0
        sin_log     α(τ) = a · sin(ln τ) / ln τ
    """

    kind: str
    a: float = 0.0
    p: float = 1.0

    def __post_init__(self):
        if self.kind not in ALPHA_KINDS:
            raise ValueError(f"Unbekannter α-Typ: {self.kind!r}")
        if self.kind == "inv_pow" and self.p <= 0:
            raise NonPositiveParameter("inv_pow benötigt p > 0")

    @classmethod
    def zero(cls) -> "AlphaSpec":
        return cls("zero")

    @classmethod
    def inv_log(cls, a: float) -> "AlphaSpec":
        return cls("inv_log", float(a))

    @classmethod
    def inv_pow(cls, a: float, p: float) -> "AlphaSpec":
        return cls("inv_pow", float(a), float(p))

    @classmethod
    def sin_log(cls, a: float) -> "AlphaSpec":
        return cls("sin_log", float(a))

    @property
    def needs_log_domain(self) -> bool:
        # a/ln τ und sin(ln τ)/ln τ sind erst für τ > 1 definiert
        return self.kind in ("inv_log", "sin_log")

    def in_log(self, u: float) -> float:
        """α(e^u), der Integrand in der Variablen u = ln τ."""
        if self.kind == "zero":
            return 0.0
        if self.kind == "inv_log":
            return self.a / u
        if self.kind == "inv_pow":
            return self.a * math.exp(-self.p * u)
        return self.a * math.sin(u) / u

    def in_log_mp(self, u):
        """mpmath-Variante von in_log für Referenzrechnungen."""
        if self.kind == "zero":
            return mp.mpf(0)
        if self.kind == "inv_log":
            return mp.mpf(self.a) / u
        if self.kind == "inv_pow":
            return mp.mpf(self.a) * mp.exp(-mp.mpf(self.p) * u)
        return mp.mpf(self.a) * mp.sin(u) / u

    def __call__(self, t: float) -> float:
        return self.in_log(math.log(t))

    def describe(self) -> str:
        if self.kind == "zero":
            return "zero()"
        if self.kind == "inv_pow":
            return f"inv_pow({self.a!r},{self.p!r})"
        return f"{self.kind}({self.a!r})"


@dataclass(frozen=True)
class BetaSpec:
    """
    Beschränkte Funktion β:[r,∞) → ℝ.

    Katalog:
        const       β ≡ b
        sin_loglog  β(t) = b · sin(ln ln(t + e))
        step        β(t) = b für t ≥ t₀, sonst 0
    """

    kind: str
    b: float = 0.0
    t0: float = 1.0

    def __post_init__(self):
        if self.kind not in BETA_KINDS:
            raise ValueError(f"Unbekannter β-Typ: {self.kind!r}")
        if self.kind == "step" and self.t0 <= 0:
            raise NonPositiveParameter("step benötigt t₀ > 0")

    @classmethod
    def const(cls, b: float = 0.0) -> "BetaSpec":
        return cls("const", float(b))

    @classmethod
    def sin_loglog(cls, b: float) -> "BetaSpec":
        return cls("sin_loglog", float(b))

    @classmethod
    def step(cls, b: float, t0: float) -> "BetaSpec":
        return cls("step", float(b), float(t0))

    @property
    def bound(self) -> float:
        return abs(self.b)

    def __call__(self, t: float) -> float:
        if self.kind == "const":
            return self.b
        if self.kind == "sin_loglog":
            # ln(t + e) > 1, also ist ln ln für alle t > 0 definiert
            return self.b * math.sin(math.log(math.log(t + math.e)))
        return self.b if t >= self.t0 else 0.0

    def describe(self) -> str:
        if self.kind == "step":
            return f"step({self.b!r},{self.t0!r})"
        return f"{self.kind}({self.b!r})"


def adaptive_simpson(
    fun: Callable[[float], float],
    a: float,
    b: float,
    rel_tol: float = REL_TOL,
    max_depth: int = MAX_DEPTH,
) -> float:
    """
    Adaptive Simpson-Regel mit Wiederverwendung der Stützwerte.

    Die Toleranz ist relativ zu ∫|fun| (grob geschätzt), damit auch
    oszillierende Integranden mit kleinem Integral abbrechen.
    """
    if a == b:
        return 0.0
    fa, fm, fb = fun(a), fun(0.5 * (a + b)), fun(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    scale = (b - a) / 6.0 * (abs(fa) + 4.0 * abs(fm) + abs(fb))
    return _simpson_step(fun, a, b, fa, fm, fb, whole, rel_tol * scale, max_depth)


def _simpson_step(fun, a, b, fa, fm, fb, whole, tol, depth) -> float:
    m = 0.5 * (a + b)
    flm = fun(0.5 * (a + m))
    frm = fun(0.5 * (m + b))
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    if depth <= 0:
        raise QuadratureNonConvergence(
            f"Simpson-Verfeinerung auf [{a}, {b}] überschreitet die Maximaltiefe"
        )
    return _simpson_step(fun, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + (
        _simpson_step(fun, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    )


@lru_cache(maxsize=65536)
def _segment_integral(alpha: AlphaSpec, u0: float, j: int) -> float:
    return adaptive_simpson(alpha.in_log, u0 + j, u0 + j + 1)


def log_integral(alpha: AlphaSpec, r: float, t: float) -> float:
    """
    ∫_r^t α(τ)/τ dτ = ∫_{ln r}^{ln t} α(e^u) du für t ≥ r, sonst 0.
    """
    if alpha.kind == "zero":
        return 0.0
    u0 = math.log(r)
    u = math.log(t)
    if u <= u0:
        return 0.0
    n = int(math.floor(u - u0))
    parts = [_segment_integral(alpha, u0, j) for j in range(n)]
    parts.append(adaptive_simpson(alpha.in_log, u0 + n, u))
    return math.fsum(parts)


def reference_log_integral(alpha: AlphaSpec, r: float, t: float, dps: int = 30) -> float:
    """Referenzwert von log_integral mit mpmath.quad in dps Dezimalstellen."""
    if t <= r or alpha.kind == "zero":
        return 0.0
    with mp.workdps(dps):
        u0 = mp.log(mp.mpf(r))
        u1 = mp.log(mp.mpf(t))
        n = int(mp.floor(u1 - u0))
        points = [u0 + j for j in range(n + 1)] + [u1]
        return float(mp.quad(alpha.in_log_mp, points))


def clear_cache() -> None:
    _segment_integral.cache_clear()
