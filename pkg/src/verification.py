"""
verification.py – Verifikationssuiten mit einem Bericht pro Prüfung.

Jede Prüfung erzeugt einen ReportRecord mit zwei unabhängig berechneten
Seiten lhs, rhs und einer Relation:

    eq     |lhs − rhs| ≤ tol·max(|lhs|, |rhs|, 1)
    le     lhs ≤ rhs + tol·max(|lhs|, |rhs|, 1)
    exact  lhs == rhs (bitgleich)

Jede Instanz bekommt ihren eigenen Zufallsstrom aus (seed, Prüfung, Index),
daher ist der Bericht unabhängig von der Zahl der Worker bytegleich.
"""

import logging
import math
import os
import sys
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import svdvals

import certify
import charts
import couple
import elliptic
import hormander
from config import SuiteConfig
from errors import HilbertInterpError
from karamata import AlphaSpec, BetaSpec
from param import (
    Composition,
    Constant,
    LogMultiscale,
    ParamFn,
    Power,
    Product,
    Quotient,
    RealPower,
    dual_chi,
    interpolated_smoothness,
    interpolation_psi,
    karamata_build,
    phi_s,
    qsv_compose,
    reiteration_omega,
)

logger = logging.getLogger(__name__)

SUITE_ORDER = ("param", "couple", "hormander", "elliptic", "charts")
RECORD_COLUMNS = (
    "suite",
    "check",
    "anchor",
    "instance",
    "lhs",
    "rhs",
    "tolerance",
    "relation",
    "verdict",
)


def verdict_for(lhs: float, rhs: float, tol: float, relation: str = "eq") -> str:
    if relation == "exact":
        return "pass" if lhs == rhs else "fail"
    scale = tol * max(abs(lhs), abs(rhs), 1.0)
    if relation == "eq":
        ok = abs(lhs - rhs) <= scale
    elif relation == "le":
        ok = lhs <= rhs + scale
    else:
        raise ValueError(f"Unbekannte Relation {relation!r}")
    return "pass" if ok and math.isfinite(lhs) and math.isfinite(rhs) else "fail"


@dataclass(frozen=True)
class ReportRecord:
    suite: str
    check: str
    anchor: str
    instance: str
    lhs: float
    rhs: float
    tolerance: float
    relation: str
    verdict: str
    wall_time: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def as_row(self, timings: bool = False) -> Dict[str, object]:
        row: Dict[str, object] = {name: getattr(self, name) for name in RECORD_COLUMNS}
        if timings:
            row["wall_time"] = self.wall_time
        return row


@dataclass(frozen=True)
class Outcome:
    instance: str
    lhs: float
    rhs: float
    relation: str = "eq"
    tolerance: Optional[float] = None  # None: skalierte Toleranz der Prüfung


@dataclass(frozen=True)
class Task:
    check: str
    index: int
    seed: int
    tolerance: float
    count: int
    atlas: charts.AtlasConfig = field(default_factory=charts.AtlasConfig)

    def rng(self) -> np.random.Generator:
        key = zlib.crc32(self.check.encode("utf-8"))
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(key, self.index)))


@dataclass(frozen=True)
class Check:
    name: str
    suite: str
    anchor: str
    tolerance_key: str
    instances: Callable[[SuiteConfig], int]
    run: Callable[[Task], Outcome]


# ---------------------------------------------------------------------------
# Zufallskataloge
# ---------------------------------------------------------------------------

_E = math.e

ALPHA_CATALOG = (
    AlphaSpec.zero(),
    AlphaSpec.inv_log(0.25),
    AlphaSpec.inv_pow(0.25, 1.0),
    AlphaSpec.sin_log(0.25),
)
BETA_CATALOG = (BetaSpec.const(0.0), BetaSpec.sin_loglog(0.2), BetaSpec.step(0.1, 10.0))
KARAMATA_CATALOG = tuple(karamata_build(a, b, _E) for a in ALPHA_CATALOG for b in BETA_CATALOG)

# Abschlusseigenschaften mit kleinen Amplituden, damit φ(λt)/φ(t) bei 1e9 in [0.95, 1.05] liegt
CLOSURE_CATALOG = (
    Product(LogMultiscale((0.1,)), karamata_build(AlphaSpec.sin_log(0.25), BetaSpec.const(0.0), _E)),
    Quotient(karamata_build(AlphaSpec.inv_log(0.25), BetaSpec.const(0.0), _E), LogMultiscale((0.1,))),
    RealPower(karamata_build(AlphaSpec.inv_log(0.25), BetaSpec.const(0.0), _E), 1.5),
    Product(LogMultiscale((0.1, 0.5)), Constant(2.0)),
)

BRACKET_CATALOG = (
    LogMultiscale((1.0,)),
    LogMultiscale((-1.0,)),
    LogMultiscale((2.0, -1.0)),
    karamata_build(AlphaSpec.inv_log(0.25), BetaSpec.sin_loglog(0.2), _E),
)
BRACKET_THETAS = (0.1, 1.0)
SLOW_LAMBDAS = (0.5, 2.0, 10.0)


def random_qsv(rng: np.random.Generator) -> ParamFn:
    """Quasilangsam variierende Funktion aus dem Katalog."""
    kind = int(rng.integers(0, 3))
    if kind == 0:
        levels = int(rng.integers(1, 3))
        return LogMultiscale(tuple(round(float(x), 3) for x in rng.uniform(-2.0, 2.0, size=levels)))
    if kind == 1:
        return KARAMATA_CATALOG[int(rng.integers(0, len(KARAMATA_CATALOG)))]
    return Constant(round(float(rng.uniform(0.5, 2.0)), 3))


def random_interpolation_parameter(rng: np.random.Generator) -> ParamFn:
    """Quasiregulär variierend mit Index in (0, 1)."""
    kind = int(rng.integers(0, 3))
    theta = round(float(rng.uniform(0.05, 0.95)), 3)
    if kind == 0:
        return Power(theta)
    if kind == 1:
        return Product(Power(theta), random_qsv(rng))
    eps, delta = (round(float(x), 3) for x in rng.uniform(0.1, 3.0, size=2))
    return interpolation_psi(random_qsv(rng), eps, delta)


def random_f_g(rng: np.random.Generator) -> Tuple[ParamFn, ParamFn]:
    """f, g ∈ 𝓑 mit f/g beschränkt nahe +∞."""
    a = round(float(rng.uniform(0.0, 0.8)), 3)
    b = round(a + float(rng.uniform(0.2, 1.0)), 3)
    return Product(Power(a), random_qsv(rng)), Product(Power(b), random_qsv(rng))


def random_param(rng: np.random.Generator) -> ParamFn:
    """Gemischter Katalog inklusive abgeleiteter Parameter."""
    kind = int(rng.integers(0, 6))
    if kind == 0:
        return random_interpolation_parameter(rng)
    if kind == 1:
        f, g = random_f_g(rng)
        return reiteration_omega(f, g, random_interpolation_parameter(rng))
    if kind == 2:
        return dual_chi(random_interpolation_parameter(rng))
    if kind == 3:
        return phi_s(random_qsv(rng), round(float(rng.uniform(-4, 4)), 3), 2.0)
    if kind == 4:
        return qsv_compose(random_qsv(rng), round(float(rng.uniform(0.1, 2.0)), 3), random_qsv(rng))
    s0 = round(float(rng.uniform(-2, 2)), 3)
    _, phi = interpolated_smoothness(
        random_qsv(rng), random_qsv(rng), s0, s0 + 1.0, 0.5, random_qsv(rng)
    )
    return phi


def random_index(rng: np.random.Generator, s_range: Tuple[float, float] = (-4.0, 4.0)) -> hormander.SmoothnessIndex:
    return hormander.SmoothnessIndex(round(float(rng.uniform(*s_range)), 3), random_qsv(rng))


def random_torus_distribution(rng: np.random.Generator, k_max: int = 64) -> hormander.FourierDistribution:
    n = int(rng.integers(1, 3))
    K = int(rng.integers(1, k_max + 1))
    n_modes = int(rng.integers(1, 33))
    return hormander.random_distribution(rng, n, K, n_modes, real=bool(rng.integers(0, 2)))


def _describe_u(u: hormander.FourierDistribution) -> str:
    return f"n={u.n} K={u.K} modes={len(u)}"


# ---------------------------------------------------------------------------
# param
# ---------------------------------------------------------------------------


def _positivity(task: Task) -> Outcome:
    fn = random_param(task.rng())
    values = fn.evaluate_many(certify.default_grid())
    bad = int(np.sum(~(np.isfinite(values) & (values > 0))))
    return Outcome(fn.describe(), float(bad), 0.0, "exact")


def _worst_pair(tree: np.ndarray, direct: np.ndarray) -> Tuple[float, float]:
    err = np.abs(tree - direct) / np.maximum(np.maximum(np.abs(tree), np.abs(direct)), 1.0)
    k = int(np.argmax(err))
    return float(tree[k]), float(direct[k])


def _sample_points(rng: np.random.Generator, n: int = 100) -> np.ndarray:
    return np.exp(rng.uniform(math.log(1e-3), math.log(1e9), size=n))


def _omega_identity(task: Task) -> Outcome:
    rng = task.rng()
    f, g = random_f_g(rng)
    psi = random_interpolation_parameter(rng)
    omega = reiteration_omega(f, g, psi)
    ts = _sample_points(rng)
    direct = np.array([f(t) * psi(g(t) / f(t)) for t in ts])
    lhs, rhs = _worst_pair(omega.evaluate_many(ts), direct)
    return Outcome(f"f={f} g={g} psi={psi}", lhs, rhs)


def _chi_identity(task: Task) -> Outcome:
    rng = task.rng()
    psi = random_interpolation_parameter(rng)
    chi = dual_chi(psi)
    ts = _sample_points(rng)
    lhs, rhs = _worst_pair(chi.evaluate_many(ts), np.array([t / psi(t) for t in ts]))
    return Outcome(f"psi={psi}", lhs, rhs)


def _power_thetas() -> np.ndarray:
    return np.linspace(0.0, 1.0, 11)


def _quasiconcavity_power(task: Task) -> Outcome:
    theta = float(_power_thetas()[task.index])
    grid = np.geomspace(1.0, 1e8, 256)
    cert = certify.quasiconcavity_certificate(Power(theta), 0.0, grid)
    return Outcome(f"psi=pow({theta!r})", cert.c_estimate, 1.0 + task.tolerance, "le", 0.0)


VIOLATION_CATALOG = (
    Power(2.0),
    Power(-0.5),
    Composition(Power(-0.5), LogMultiscale((1.0,))),
)


def _quasiconcavity_violation(task: Task) -> Outcome:
    psi = VIOLATION_CATALOG[task.index]
    cert = certify.quasiconcavity_certificate(psi, 0.0, certify.default_grid())
    growth = max(b / a for a, b in zip(cert.nested_growth, cert.nested_growth[1:]))
    return growth_violation(f"psi={psi}", growth)


def growth_violation(label: str, growth: float) -> Outcome:
    """Verletzung erst bei Wachstum echt über GROWTH_THRESHOLD."""
    return Outcome(label, math.nextafter(certify.GROWTH_THRESHOLD, math.inf), growth, "le", 0.0)


def _karamata(task: Task) -> Outcome:
    phi = KARAMATA_CATALOG[task.index // len(SLOW_LAMBDAS)]
    lam = SLOW_LAMBDAS[task.index % len(SLOW_LAMBDAS)]
    ratio = certify.slow_variation_ratios(phi, (lam,), (1e9,))[0, 0]
    return Outcome(f"phi={phi} lambda={lam!r}", abs(ratio - 1.0), task.tolerance, "le", 0.0)


def _closure(task: Task) -> Outcome:
    phi = CLOSURE_CATALOG[task.index // len(SLOW_LAMBDAS)]
    lam = SLOW_LAMBDAS[task.index % len(SLOW_LAMBDAS)]
    ratio = certify.slow_variation_ratios(phi, (lam,), (1e9,))[0, 0]
    return Outcome(f"phi={phi} lambda={lam!r}", abs(ratio - 1.0), task.tolerance, "le", 0.0)


def _bracket(task: Task) -> Outcome:
    phi = BRACKET_CATALOG[task.index // len(BRACKET_THETAS)]
    theta = BRACKET_THETAS[task.index % len(BRACKET_THETAS)]
    limits = certify.power_bracket_limits(phi, theta, np.geomspace(1e3, 1e200, 200))
    worst = max(limits.lower[-1] / 1e-6, 1e6 / limits.upper[-1])
    return Outcome(f"phi={phi} theta={theta!r}", float(worst), 1.0, "le", 0.0)


# ---------------------------------------------------------------------------
# couple
# ---------------------------------------------------------------------------


def _random_instance(rng: np.random.Generator) -> Tuple[couple.SpectralCouple, couple.SpectralVector]:
    n = int(rng.integers(1, 129))
    return couple.random_couple(rng, n), couple.random_vector(rng, n)


def _reiteration(task: Task) -> Outcome:
    rng = task.rng()
    c, u = _random_instance(rng)
    f, g = random_f_g(rng)
    psi = random_interpolation_parameter(rng)
    res = couple.reiteration_check(c, f, g, psi, u)
    return Outcome(f"N={c.dimension} f={f} g={g} psi={psi}", res.lhs, res.rhs)


def _duality(task: Task) -> Outcome:
    rng = task.rng()
    c, u = _random_instance(rng)
    psi = random_interpolation_parameter(rng)
    res = couple.duality_check(c, psi, u)
    return Outcome(f"N={c.dimension} psi={psi}", res.lhs, res.rhs)


def _product(task: Task) -> Outcome:
    rng = task.rng()
    parts = int(rng.integers(1, 5))
    cs, us = [], []
    for _ in range(parts):
        n = int(rng.integers(1, 33))
        cs.append(couple.random_couple(rng, n))
        us.append(couple.random_vector(rng, n))
    psi = random_interpolation_parameter(rng)
    res = couple.product_norm_check(cs, psi, us)
    dims = ",".join(str(c.dimension) for c in cs)
    return Outcome(f"dims={dims} psi={psi}", res.lhs, res.rhs, "exact", 0.0)


def _two_point(task: Task) -> Outcome:
    rng = task.rng()
    psi = random_interpolation_parameter(rng) if rng.integers(0, 2) else Power(round(float(rng.uniform(0, 2)), 3))
    s, t = np.exp(rng.uniform(math.log(1.5), math.log(1e4), size=2))
    res = couple.two_point_counterexample(psi, float(s), float(t))
    return Outcome(f"psi={psi} s={s!r} t={t!r}", res.norm_ratio, res.norm_ratio_operator)


def _counterexample(task: Task) -> Outcome:
    res = couple.two_point_counterexample(Power(2.0), 2.0, 2000.0)
    return Outcome("psi=pow(2.0) s=2.0 t=2000.0", res.bound_ratio, 1e3)


UNIFORM_THETAS = (0.25, 0.5, 0.75)


def _uniform(task: Task) -> Outcome:
    diagonal = task.index == len(UNIFORM_THETAS)
    theta = 0.5 if diagonal else UNIFORM_THETAS[task.index]
    res = couple.uniform_bound_sweep(
        Power(theta), 1.0, task.count, seed=task.seed + task.index, diagonal=diagonal
    )
    label = f"psi=pow({theta!r}) trials={task.count}" + (" diagonal" if diagonal else "")
    if diagonal:
        return Outcome(label, res.max_observed_c, 1.0, "eq", 1e-9)
    return Outcome(label, res.max_observed_c, 1.0 + task.tolerance, "le", 0.0)


def _operator_oracle(task: Task) -> Outcome:
    rng = task.rng()
    nx, ny = (int(x) for x in rng.integers(1, 9, size=2))
    cX, cY = couple.random_couple(rng, nx, hi=1e4), couple.random_couple(rng, ny, hi=1e4)
    T = couple.random_operator(rng, ny, nx)
    psi = random_interpolation_parameter(rng)
    dX, dY = cX.weights(psi), cY.weights(psi)
    oracle = float(svdvals((dY[:, None] * T.matrix) / dX[None, :])[0])
    return Outcome(f"{ny}x{nx} psi={psi}", couple.operator_norm(cX, cY, psi, T), oracle)


def _embedding_chain(task: Task) -> Outcome:
    rng = task.rng()
    c, u = _random_instance(rng)
    psi = random_interpolation_parameter(rng)
    ch = couple.embedding_chain(c, psi, u)
    worst = max(ch.norm0 / (ch.c_lower * ch.norm_psi), ch.norm_psi / (ch.c_upper * ch.norm1))
    return Outcome(f"N={c.dimension} psi={psi}", worst, 1.0, "le")


# ---------------------------------------------------------------------------
# hormander
# ---------------------------------------------------------------------------


def _interpolation(task: Task) -> Outcome:
    rng = task.rng()
    u = random_torus_distribution(rng)
    idx = random_index(rng)
    eps, delta = (round(float(x), 3) for x in rng.uniform(0.1, 3.0, size=2))
    res = hormander.interpolation_identity_check(u, idx, eps, delta)
    return Outcome(f"{_describe_u(u)} s={idx.s!r} phi={idx.phi} eps={eps!r} delta={delta!r}", res.lhs, res.rhs)


def _refined_interpolation(task: Task) -> Outcome:
    rng = task.rng()
    u = random_torus_distribution(rng)
    idx0 = random_index(rng, (-3.0, 1.0))
    idx1 = hormander.SmoothnessIndex(round(idx0.s + float(rng.uniform(0.1, 3.0)), 3), random_qsv(rng))
    theta = round(float(rng.uniform(0.1, 0.9)), 3)
    res, target = hormander.refined_interpolation_check(u, idx0, idx1, theta, random_qsv(rng))
    return Outcome(f"{_describe_u(u)} s0={idx0.s!r} s1={idx1.s!r} theta={theta!r} s={target.s!r}", res.lhs, res.rhs)


def _duality_pairing(task: Task) -> Outcome:
    rng = task.rng()
    u = random_torus_distribution(rng)
    idx = random_index(rng)
    res = hormander.duality_pairing_check(u, idx)
    return Outcome(f"{_describe_u(u)} s={idx.s!r} phi={idx.phi}", res.lhs, res.rhs)


def _monotonicity(task: Task) -> Outcome:
    rng = task.rng()
    u = random_torus_distribution(rng)
    idx = random_index(rng)
    s2 = round(idx.s + float(rng.uniform(0.0, 2.0)), 3)
    lhs = hormander.hnorm(u, idx)
    rhs = hormander.hnorm(u, hormander.SmoothnessIndex(s2, idx.phi))
    return Outcome(f"{_describe_u(u)} s1={idx.s!r} s2={s2!r}", lhs, rhs, "le")


def _parseval(task: Task) -> Outcome:
    u = random_torus_distribution(task.rng())
    lhs = hormander.hnorm(u, hormander.SmoothnessIndex(0.0, Constant(1.0)))
    rhs = math.sqrt(math.fsum(u.abs_squared.tolist()))
    return Outcome(_describe_u(u), lhs, rhs, "exact", 0.0)


SCALE_REFINEMENT = ((LogMultiscale((1.0,)), 10.0), (LogMultiscale((3.0,)), 1e3))


def _scale_refinement(task: Task) -> Outcome:
    phi, threshold = SCALE_REFINEMENT[task.index]
    u = hormander.single_mode(1, 10**6, (10**6,))
    ratio = hormander.hnorm(u, hormander.SmoothnessIndex(1.0, phi)) / hormander.hnorm(
        u, hormander.SmoothnessIndex(1.0, Constant(1.0))
    )
    return Outcome(f"phi={phi} k=1e6", threshold, ratio, "le", 0.0)


def _inclusion(task: Task) -> Outcome:
    res = hormander.inclusion_constants(hormander.SmoothnessIndex(0.0, Constant(1.0)), 0.5, 256)
    return Outcome("phi=const(1.0) eps=0.5 K=256", max(res.upper, res.lower), 1.0)


# ---------------------------------------------------------------------------
# elliptic
# ---------------------------------------------------------------------------

_A = elliptic.EllipticOperator()


def _calculus(task: Task) -> Outcome:
    rng = task.rng()
    u = random_torus_distribution(rng)
    idx = random_index(rng)
    res = elliptic.calculus_equivalence_check(u, idx, _A)
    return Outcome(f"{_describe_u(u)} s={idx.s!r} phi={idx.phi}", res.lhs, res.rhs)


def _lifting(task: Task) -> Outcome:
    rng = task.rng()
    u = random_torus_distribution(rng)
    idx = random_index(rng)
    res = elliptic.lifting_isomorphism_check(_A, u, idx)
    return Outcome(f"{_describe_u(u)} s={idx.s!r} phi={idx.phi}", res.lhs, res.rhs)


def _graph_norm(task: Task) -> Outcome:
    rng = task.rng()
    u = random_torus_distribution(rng)
    idx = random_index(rng, (0.0, 4.0))
    res = elliptic.graph_norm_check(u, idx, _A)
    worst = max(res.ratio / res.bound, 1.0 / res.ratio)
    return Outcome(f"{_describe_u(u)} s={idx.s!r} phi={idx.phi}", worst, 1.0, "le")


def _positivity_form(task: Task) -> Outcome:
    u = random_torus_distribution(task.rng())
    au, uu = elliptic.positivity_form(_A, u)
    return Outcome(_describe_u(u), uu, au, "le", 0.0)


def _inverse_calculus(task: Task) -> Outcome:
    rng = task.rng()
    u = random_torus_distribution(rng)
    idx = random_index(rng)
    f = _A.calculus_param(idx)
    back = elliptic.apply_inverse_function(_A, f, elliptic.apply_function(_A, f, u))
    err = float(np.max(np.abs(back.coeffs - u.coeffs)) / np.max(np.abs(u.coeffs)))
    return Outcome(f"{_describe_u(u)} s={idx.s!r} phi={idx.phi}", err, task.tolerance, "le", 0.0)


DOMAIN_CASES = ((-1.5, 1, 64), (0.0, 2, 64), (1.0, 1, 64), (3.5, 2, 32), (7.9, 1, 64))


def _domain_power(task: Task) -> Outcome:
    s, n, K = DOMAIN_CASES[task.index]
    bound = elliptic.domain_power_bound(_A, hormander.SmoothnessIndex(s, LogMultiscale((1.0,))), n, K)
    return Outcome(f"s={s!r} n={n} K={K} k={bound.k}", bound.c, sys.float_info.max, "le", 0.0)


# ---------------------------------------------------------------------------
# charts
# ---------------------------------------------------------------------------


def _partition(task: Task) -> Outcome:
    atlas = charts.ChartAtlas(task.atlas)
    chi = atlas.partition(atlas.circle_grid())
    dev = float(np.max(np.abs(chi.sum(axis=0) - 1.0)))
    return Outcome(f"M={task.atlas.M}", dev, task.tolerance, "le", 0.0)


def _kt_identity(task: Task) -> Outcome:
    rng = task.rng()
    atlas = charts.ChartAtlas(task.atlas)
    K = int(rng.integers(1, 33))
    u = hormander.random_distribution(rng, 1, K, int(rng.integers(1, 17)))
    f = charts.CircleFunction.from_distribution(u)
    back = charts.sew(atlas, charts.rectify(atlas, f))
    err = float(np.max(np.abs(back.samples - f.sample(task.atlas.M))))
    return Outcome(f"K={K} modes={len(u)} M={task.atlas.M}", err, task.tolerance, "le", 0.0)


CHART_SMOOTHNESS = (0.0, 1.0)


def _chart_study(task: Task) -> charts.EquivalenceStudy:
    atlas = charts.ChartAtlas(task.atlas)
    idx = hormander.SmoothnessIndex(CHART_SMOOTHNESS[task.index], Constant(1.0))
    return charts.equivalence_study(atlas, charts.mode_family(16), idx)


def _chart_spread(task: Task) -> Outcome:
    study = _chart_study(task)
    s = CHART_SMOOTHNESS[task.index]
    return Outcome(f"phi=const(1.0) s={s!r} k=0..16", study.spread, task.tolerance, "le", 0.0)


def _chart_refinement(task: Task) -> Outcome:
    study = _chart_study(task)
    s = CHART_SMOOTHNESS[task.index]
    return Outcome(f"phi=const(1.0) s={s!r} k=0..16", study.refinement_change, task.tolerance, "le", 0.0)


def _random_circle(rng: np.random.Generator) -> charts.CircleFunction:
    K = int(rng.integers(1, 9))
    return charts.CircleFunction.from_distribution(
        hormander.random_distribution(rng, 1, K, int(rng.integers(1, 2 * K + 2)))
    )


def _chart_homogeneity(task: Task) -> Outcome:
    rng = task.rng()
    atlas = charts.ChartAtlas(task.atlas)
    idx = hormander.SmoothnessIndex(round(float(rng.uniform(-2, 2)), 3), Constant(1.0))
    f = _random_circle(rng)
    c = complex(rng.standard_normal(), rng.standard_normal())
    scaled = charts.CircleFunction.from_distribution(f.distribution() * c)
    lhs = charts.chart_norm(atlas, scaled, idx).value
    rhs = abs(c) * charts.chart_norm(atlas, f, idx).value
    return Outcome(f"s={idx.s!r} c={c!r}", lhs, rhs)


def _chart_triangle(task: Task) -> Outcome:
    rng = task.rng()
    atlas = charts.ChartAtlas(task.atlas)
    idx = hormander.SmoothnessIndex(round(float(rng.uniform(-2, 2)), 3), Constant(1.0))
    f, g = _random_circle(rng), _random_circle(rng)
    total = charts.CircleFunction.from_distribution(f.distribution() + g.distribution())
    lhs = charts.chart_norm(atlas, total, idx).value
    rhs = charts.chart_norm(atlas, f, idx).value + charts.chart_norm(atlas, g, idx).value
    return Outcome(f"s={idx.s!r}", lhs, rhs, "le", 1e-12)


# ---------------------------------------------------------------------------
# Register
# ---------------------------------------------------------------------------


def _fixed(n: int) -> Callable[[SuiteConfig], int]:
    return lambda cfg: n


def _counted(key: str) -> Callable[[SuiteConfig], int]:
    return lambda cfg: cfg.count(key)


CHECKS: Tuple[Check, ...] = (
    Check("positivity", "param", "φ(t) > 0 und endlich auf (0, ∞)", "identity", _counted("positivity"), _positivity),
    Check("omega_identity", "param", "ω(t) = f(t)·ψ(g(t)/f(t))", "identity", _counted("omega_identity"), _omega_identity),
    Check("chi_identity", "param", "χ(t) = t/ψ(t)", "identity", _counted("chi_identity"), _chi_identity),
    Check("quasiconcavity_power", "param", "ψ(t)/ψ(s) ≤ c·max{1, t/s}, c = 1 für t^θ mit θ ∈ [0, 1]", "quasiconcavity", _fixed(11), _quasiconcavity_power),
    Check("quasiconcavity_violation", "param", "ψ(t)/ψ(s) ≤ c·max{1, t/s} ohne gleichmäßiges c", "quasiconcavity", _fixed(len(VIOLATION_CATALOG)), _quasiconcavity_violation),
    Check("karamata", "param", "φ(λt)/φ(t) → 1 für φ = exp(β + ∫_r^t α(τ)/τ dτ)", "karamata", _fixed(len(KARAMATA_CATALOG) * 3), _karamata),
    Check("closure", "param", "Produkt, Quotient, Potenz quasilangsam variierender Funktionen", "karamata", _fixed(len(CLOSURE_CATALOG) * 3), _closure),
    Check("bracket", "param", "t^{-θ}φ(t) → 0 und t^{θ}φ(t) → ∞", "identity", _fixed(len(BRACKET_CATALOG) * 2), _bracket),
    Check("reiteration", "couple", "[X_f, X_g]_ψ = X_ω mit Normgleichheit", "reiteration", _counted("reiteration"), _reiteration),
    Check("duality", "couple", "[X₁′, X₀′]_ψ = [X₀, X₁]_χ′ mit χ(t) = t/ψ(t)", "duality", _counted("duality"), _duality),
    Check("product", "couple", "[ΠX₀, ΠX₁]_ψ = Π[X₀, X₁]_ψ mit Normgleichheit", "identity", _counted("product"), _product),
    Check("two_point", "couple", "‖T‖_{X_ψ→X_ψ} = ψ(t)/ψ(s) für die Zweipunktkonstruktion", "two_point", _counted("two_point"), _two_point),
    Check("counterexample", "couple", "‖T‖_ψ / max{1, t/s} = t/s für ψ(t) = t²", "counterexample", _fixed(1), _counterexample),
    Check("uniform", "couple", "‖T‖_{X_ψ→Y_ψ} ≤ c·max_j ‖T‖_{X_j→Y_j}", "uniform", _fixed(len(UNIFORM_THETAS) + 1), _uniform),
    Check("operator_oracle", "couple", "σ_max(D_Y T D_X⁻¹) gegen dichte Singulärwertzerlegung", "operator_oracle", _counted("operator_oracle"), _operator_oracle),
    Check("embedding_chain", "couple", "‖u‖₀ ≤ C‖u‖_ψ und ‖u‖_ψ ≤ C′‖u‖₁", "embedding_chain", _counted("embedding_chain"), _embedding_chain),
    Check("interpolation", "hormander", "[H^{s-ε}, H^{s+δ}]_ψ = H^{s,φ} mit Normgleichheit", "interpolation", _counted("interpolation"), _interpolation),
    Check("refined_interpolation", "hormander", "[H^{s₀,φ₀}, H^{s₁,φ₁}]_ψ = H^{s,φ}", "interpolation", _counted("refined_interpolation"), _refined_interpolation),
    Check("duality_pairing", "hormander", "(H^{s,φ})′ = H^{-s,1/φ} bezüglich der L²-Paarung", "identity", _counted("duality_pairing"), _duality_pairing),
    Check("monotonicity", "hormander", "‖u‖_{s₁,φ} ≤ ‖u‖_{s₂,φ} für s₁ ≤ s₂", "identity", _counted("monotonicity"), _monotonicity),
    Check("parseval", "hormander", "‖u‖_{0,1} = ‖c‖_{ℓ²}", "identity", _fixed(20), _parseval),
    Check("scale_refinement", "hormander", "‖u‖_{s,φ}/‖u‖_{s,1} unbeschränkt für φ → ∞", "identity", _fixed(len(SCALE_REFINEMENT)), _scale_refinement),
    Check("inclusion", "hormander", "H^{s+ε} ⊂ H^{s,φ} ⊂ H^{s-ε}", "identity", _fixed(1), _inclusion),
    Check("calculus", "elliptic", "‖φ_s(A)u‖ = ‖u‖_{s,φ} für A = 1 − Δ", "calculus", _counted("calculus"), _calculus),
    Check("lifting", "elliptic", "A: H^{s+2,φ} ↔ H^{s,φ} mit ‖Au‖_{s,φ} = ‖u‖_{s+2,φ}", "lifting", _counted("lifting"), _lifting),
    Check("graph_norm", "elliptic", "1 ≤ Graphennorm/‖u‖_{s,φ} ≤ (1 + 1/c²)^{1/2}", "identity", _counted("graph_norm"), _graph_norm),
    Check("positivity_form", "elliptic", "(Au, u) ≥ r(u, u) mit r = 1", "identity", _counted("positivity_form"), _positivity_form),
    Check("inverse_calculus", "elliptic", "φ_s⁻¹(A) φ_s(A) = I", "inverse_calculus", _counted("inverse_calculus"), _inverse_calculus),
    Check("domain_power", "elliptic", "φ_s(t) ≤ c·t^k mit k·m > s", "identity", _fixed(len(DOMAIN_CASES)), _domain_power),
    Check("partition", "charts", "χ₁ + χ₂ ≡ 1", "partition", _fixed(1), _partition),
    Check("kt_identity", "charts", "KTf = f", "kt_identity", _counted("kt_identity"), _kt_identity),
    Check("chart_spread", "charts", "Kartennorm äquivalent zur Fourier-Norm", "chart_spread", _fixed(len(CHART_SMOOTHNESS)), _chart_spread),
    Check("chart_refinement", "charts", "Streuung der Kartennorm stabil unter P → 2P", "chart_refinement", _fixed(len(CHART_SMOOTHNESS)), _chart_refinement),
    Check("chart_homogeneity", "charts", "‖cf‖ = |c|·‖f‖ in der Kartennorm", "chart_homogeneity", _counted("chart_norm_axioms"), _chart_homogeneity),
    Check("chart_triangle", "charts", "‖f + g‖ ≤ ‖f‖ + ‖g‖ in der Kartennorm", "chart_homogeneity", _counted("chart_norm_axioms"), _chart_triangle),
)

CHECKS_BY_NAME: Dict[str, Check] = {c.name: c for c in CHECKS}


def build_tasks(cfg: SuiteConfig) -> List[Task]:
    """Alle Aufgaben der gewählten Suite in fester Reihenfolge."""
    suites = SUITE_ORDER if cfg.suite == "all" else (cfg.suite,)
    tasks = []
    for suite in suites:
        for check in CHECKS:
            if check.suite != suite:
                continue
            tol = cfg.tolerance(check.tolerance_key)
            count = cfg.count("uniform") if check.name == "uniform" else 0
            tasks.extend(
                Task(check.name, i, cfg.seed, tol, count, cfg.atlas)
                for i in range(check.instances(cfg))
            )
    return tasks


def run_task(task: Task) -> ReportRecord:
    """Führt eine Prüfung aus; läuft auch in Worker-Prozessen."""
    check = CHECKS_BY_NAME[task.check]
    start = time.perf_counter()
    try:
        outcome = check.run(task)
    except HilbertInterpError as e:
        # eine fehlerhafte Prüfung darf den Rest der Suite nicht verwerfen
        logger.error(f"{check.name} [{task.index}]: {type(e).__name__}: {e}")
        return ReportRecord(
            check.suite,
            check.name,
            check.anchor,
            f"index={task.index} error={type(e).__name__}: {e}",
            math.nan,
            math.nan,
            task.tolerance,
            "eq",
            "fail",
            time.perf_counter() - start,
        )
    elapsed = time.perf_counter() - start
    tol = task.tolerance if outcome.tolerance is None else outcome.tolerance
    return ReportRecord(
        check.suite,
        check.name,
        check.anchor,
        outcome.instance,
        float(outcome.lhs),
        float(outcome.rhs),
        tol,
        outcome.relation,
        verdict_for(outcome.lhs, outcome.rhs, tol, outcome.relation),
        elapsed,
    )


@dataclass(frozen=True)
class SuiteRun:
    records: Tuple[ReportRecord, ...]

    @property
    def passed(self) -> int:
        return sum(1 for r in self.records if r.passed)

    @property
    def failed(self) -> int:
        return len(self.records) - self.passed

    @property
    def exit_status(self) -> int:
        return 0 if self.failed == 0 else 1

    def summary(self) -> str:
        mark = "✓" if self.failed == 0 else "✗"
        return f"{mark} {self.passed} bestanden, {self.failed} fehlgeschlagen ({len(self.records)} Prüfungen)"


def run_suite(cfg: SuiteConfig) -> SuiteRun:
    """
    Führt die Suite aus. Die Reihenfolge der Berichte folgt der
    Aufgabenliste, unabhängig von der Zahl der Worker.
    """
    tasks = build_tasks(cfg)
    workers = cfg.workers or os.cpu_count() or 1
    logger.info(f"Suite {cfg.suite}: {len(tasks)} Prüfungen, {workers} Worker, seed={cfg.seed}")
    if workers == 1:
        records = [run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            records = list(executor.map(run_task, tasks, chunksize=8))
    for r in records:
        if not r.passed:
            logger.warning(f"{r.check} [{r.instance}]: lhs={r.lhs!r} rhs={r.rhs!r}")
    return SuiteRun(tuple(records))


def report_rows(run: SuiteRun, timings: bool = False) -> List[Dict[str, object]]:
    return [r.as_row(timings) for r in run.records]


def report_columns(timings: bool = False) -> Sequence[str]:
    return RECORD_COLUMNS + (("wall_time",) if timings else ())
