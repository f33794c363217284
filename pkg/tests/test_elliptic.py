import math

import numpy as np
import pytest

from elliptic import (
    EllipticOperator,
    apply,
    apply_function,
    apply_inverse_function,
    calculus_equivalence_check,
    calculus_norm,
    domain_power_bound,
    graph_norm_check,
    lifting_isomorphism_check,
    positivity_form,
)
from errors import HypothesisViolation, NonPositiveParameter
from hormander import FourierDistribution, SmoothnessIndex, hnorm, random_distribution, single_mode
from param import Constant, LogMultiscale, LowCutoffClamp, PhiS

A = EllipticOperator()


def test_only_second_order():
    with pytest.raises(NonPositiveParameter):
        EllipticOperator(order=4.0)
    with pytest.raises(NonPositiveParameter):
        EllipticOperator(r=2.0)


def test_apply_multiplies_by_eigenvalue():
    u = single_mode(2, 3, (1, -2), 1.5)
    assert apply(A, u).coeffs.tolist() == [9.0]


def test_calculus_param():
    idx = SmoothnessIndex(3.0, LogMultiscale((1.0,)))
    assert A.calculus_param(idx) == LowCutoffClamp(PhiS(LogMultiscale((1.0,)), 3.0, 2.0), 1.0)


class TestCalculus:
    def test_matches_fourier_norm(self):
        rng = np.random.default_rng(40)
        for phi in (Constant(1.0), LogMultiscale((2.0,)), LogMultiscale((-1.0, 1.0))):
            u = random_distribution(rng, 2, 16, 24)
            idx = SmoothnessIndex(float(rng.uniform(-4, 4)), phi)
            assert calculus_equivalence_check(u, idx, A).holds(1e-12)

    def test_zero(self):
        assert calculus_norm(A, FourierDistribution.zero(1, 2), SmoothnessIndex(1.0, Constant(1.0))) == 0.0

    def test_lifting(self):
        rng = np.random.default_rng(41)
        u = random_distribution(rng, 1, 64, 30)
        idx = SmoothnessIndex(-1.0, LogMultiscale((1.0,)))
        res = lifting_isomorphism_check(A, u, idx)
        assert res.holds(1e-12)
        assert res.rhs == pytest.approx(hnorm(u, SmoothnessIndex(1.0, idx.phi)), rel=1e-15)

    def test_inverse_roundtrip(self):
        rng = np.random.default_rng(42)
        u = random_distribution(rng, 2, 8, 40)
        f = A.calculus_param(SmoothnessIndex(2.5, LogMultiscale((-2.0,))))
        back = apply_inverse_function(A, f, apply_function(A, f, u))
        err = np.max(np.abs(back.coeffs - u.coeffs)) / np.max(np.abs(u.coeffs))
        assert err <= 1e-14

    def test_empty_is_passed_through(self):
        u = FourierDistribution.zero(1, 2)
        assert apply_function(A, Constant(2.0), u) is u
        assert apply_inverse_function(A, Constant(2.0), u) is u


class TestGraphNorm:
    def test_within_bounds(self):
        rng = np.random.default_rng(43)
        for s in (0.5, 1.0, 3.0):
            u = random_distribution(rng, 1, 32, 16)
            res = graph_norm_check(u, SmoothnessIndex(s, LogMultiscale((1.0,))), A)
            assert res.within_bounds

    def test_negative_s_rejected(self):
        with pytest.raises(HypothesisViolation):
            graph_norm_check(single_mode(1, 1, (1,)), SmoothnessIndex(-0.5, Constant(1.0)))

    def test_unbounded_inverse_phi_rejected(self):
        with pytest.raises(HypothesisViolation):
            graph_norm_check(single_mode(1, 1, (1,)), SmoothnessIndex(0.0, LogMultiscale((-20.0,))))

    def test_zero_input(self):
        res = graph_norm_check(FourierDistribution.zero(1, 4), SmoothnessIndex(1.0, Constant(1.0)))
        assert res.ratio == 1.0
        assert res.within_bounds

    def test_s_zero_constant(self):
        u = single_mode(1, 4, (2,), 3.0)
        res = graph_norm_check(u, SmoothnessIndex(0.0, Constant(1.0)))
        assert res.ratio == pytest.approx(math.sqrt(2.0), rel=1e-15)
        assert res.bound == pytest.approx(math.sqrt(2.0), rel=1e-15)


def test_positivity_form():
    rng = np.random.default_rng(44)
    for _ in range(10):
        au, uu = positivity_form(A, random_distribution(rng, 2, 8, 12))
        assert au >= uu
    assert positivity_form(A, single_mode(1, 1, (0,), 2.0)) == (4.0, 4.0)


@pytest.mark.parametrize("s,k", [(3.0, 2), (-1.5, 1), (0.0, 1), (1.9, 1), (4.0, 3)])
def test_domain_power_bound(s, k):
    bound = domain_power_bound(A, SmoothnessIndex(s, LogMultiscale((1.0,))), 1, 64)
    assert bound.k == k
    assert bound.k * A.order > s
    assert math.isfinite(bound.c) and bound.c > 0
