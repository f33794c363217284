import math

import numpy as np
import pytest

from errors import DimensionMismatch, NonPositiveParameter, NotInSetM
from hormander import (
    FourierDistribution,
    SmoothnessIndex,
    band_modes,
    duality_pairing_check,
    embedding_profile,
    hnorm,
    inclusion_constants,
    interpolation_identity_check,
    random_distribution,
    refined_interpolation_check,
    single_mode,
)
from param import Constant, LogMultiscale, Power, Quotient


class TestFourierDistribution:
    def test_validation(self):
        with pytest.raises(DimensionMismatch):
            FourierDistribution(0, 1, np.zeros((0, 1)), np.zeros(0))
        with pytest.raises(NonPositiveParameter):
            FourierDistribution(1, -1, np.zeros((0, 1)), np.zeros(0))
        with pytest.raises(DimensionMismatch):
            FourierDistribution(1, 2, np.array([[0], [1]]), np.array([1.0]))
        with pytest.raises(DimensionMismatch):
            FourierDistribution(1, 2, np.array([[3]]), np.array([1.0]))
        with pytest.raises(DimensionMismatch):
            FourierDistribution(1, 2, np.array([[1], [1]]), np.array([1.0, 2.0]))

    def test_modes_sorted_lexicographically(self):
        u = FourierDistribution(2, 3, np.array([[1, 0], [-1, 2], [-1, -3]]), np.array([1.0, 2.0, 3.0]))
        assert u.modes.tolist() == [[-1, -3], [-1, 2], [1, 0]]
        assert u.coeffs.tolist() == [3.0, 2.0, 1.0]

    def test_conjugate_symmetry(self):
        ok = FourierDistribution(1, 2, np.array([[1], [-1]]), np.array([1 + 2j, 1 - 2j]), real=True)
        assert len(ok) == 2
        with pytest.raises(ValueError):
            FourierDistribution(1, 2, np.array([[1], [-1]]), np.array([1 + 2j, 1 + 2j]), real=True)

    def test_random_real_is_symmetric(self):
        rng = np.random.default_rng(8)
        u = random_distribution(rng, 2, 4, 10, real=True)
        assert u.real
        assert (u * 2.0).real
        assert not (u * 1j).real

    def test_addition_merges_modes(self):
        a = single_mode(1, 2, (1,), 1.0)
        b = FourierDistribution(1, 5, np.array([[1], [4]]), np.array([2.0, 3.0]))
        s = a + b
        assert s.K == 5
        assert s.modes[:, 0].tolist() == [1, 4]
        assert s.coeffs.tolist() == [3.0, 3.0]
        with pytest.raises(DimensionMismatch):
            a + single_mode(2, 1, (0, 0))

    def test_band_modes(self):
        modes = band_modes(2, 1)
        assert modes.shape == (9, 2)
        assert modes[0].tolist() == [-1, -1]
        assert modes[-1].tolist() == [1, 1]


class TestSmoothnessIndex:
    def test_requires_qsv(self):
        with pytest.raises(NotInSetM):
            SmoothnessIndex(1.0, Power(0.5))

    def test_dual(self):
        idx = SmoothnessIndex(1.5, LogMultiscale((1.0,)))
        dual = idx.dual()
        assert dual.s == -1.5
        assert dual.phi == Quotient(Constant(1.0), LogMultiscale((1.0,)))

    def test_evidence(self):
        assert SmoothnessIndex(0.0, LogMultiscale((2.0,))).evidence().verdict.value == "pass"


class TestNorm:
    def test_single_mode(self):
        u = single_mode(1, 5, (3,), 2.0)
        assert hnorm(u, SmoothnessIndex(1.0, Constant(1.0))) == pytest.approx(2.0 * math.sqrt(10.0), rel=1e-15)

    def test_zero(self):
        assert hnorm(FourierDistribution.zero(2, 4), SmoothnessIndex(3.0, Constant(1.0))) == 0.0

    def test_parseval_is_exact(self):
        rng = np.random.default_rng(20)
        for _ in range(20):
            u = random_distribution(rng, int(rng.integers(1, 3)), 8, 16)
            lhs = hnorm(u, SmoothnessIndex(0.0, Constant(1.0)))
            assert lhs == math.sqrt(math.fsum(u.abs_squared.tolist()))

    def test_monotone_in_s(self):
        rng = np.random.default_rng(21)
        u = random_distribution(rng, 1, 32, 20)
        phi = LogMultiscale((-1.0,))
        norms = [hnorm(u, SmoothnessIndex(s, phi)) for s in (-2.0, -0.5, 0.0, 1.0, 2.5)]
        assert norms == sorted(norms)

    @pytest.mark.parametrize("exponent,threshold", [(1.0, 10.0), (3.0, 1e3)])
    def test_scale_refinement_is_strict(self, exponent, threshold):
        u = single_mode(1, 10**6, (10**6,))
        refined = hnorm(u, SmoothnessIndex(1.0, LogMultiscale((exponent,))))
        plain = hnorm(u, SmoothnessIndex(1.0, Constant(1.0)))
        assert refined / plain > threshold


class TestIdentities:
    def test_interpolation_identity(self):
        rng = np.random.default_rng(30)
        for phi in (Constant(1.0), LogMultiscale((1.5,)), LogMultiscale((-1.0, 2.0))):
            u = random_distribution(rng, 2, 16, 24)
            idx = SmoothnessIndex(float(rng.uniform(-3, 3)), phi)
            assert interpolation_identity_check(u, idx, 0.5, 1.25).holds(1e-12)

    def test_interpolation_rejects_bad_steps(self):
        u = single_mode(1, 1, (1,))
        with pytest.raises(NonPositiveParameter):
            interpolation_identity_check(u, SmoothnessIndex(0.0, Constant(1.0)), 0.0, 1.0)

    def test_interpolation_zero(self):
        res = interpolation_identity_check(FourierDistribution.zero(1, 3), SmoothnessIndex(0.0, Constant(1.0)), 1.0, 1.0)
        assert (res.lhs, res.rhs) == (0.0, 0.0)

    def test_refined_interpolation_powers(self):
        rng = np.random.default_rng(31)
        u = random_distribution(rng, 1, 32, 12)
        idx0 = SmoothnessIndex(-1.0, Constant(1.0))
        idx1 = SmoothnessIndex(2.0, Constant(1.0))
        res, target = refined_interpolation_check(u, idx0, idx1, 0.5, Constant(1.0))
        assert target.s == pytest.approx(0.5)
        assert res.holds(1e-12)
        assert res.rhs == pytest.approx(hnorm(u, SmoothnessIndex(0.5, Constant(1.0))), rel=1e-12)

    def test_refined_interpolation_logarithmic(self):
        rng = np.random.default_rng(32)
        u = random_distribution(rng, 2, 8, 20)
        idx0 = SmoothnessIndex(0.0, LogMultiscale((1.0,)))
        idx1 = SmoothnessIndex(1.0, LogMultiscale((-2.0,)))
        res, _ = refined_interpolation_check(u, idx0, idx1, 0.3, LogMultiscale((0.5,)))
        assert res.holds(1e-12)

    def test_duality_pairing(self):
        rng = np.random.default_rng(33)
        u = random_distribution(rng, 1, 64, 30)
        res = duality_pairing_check(u, SmoothnessIndex(1.25, LogMultiscale((2.0,))))
        assert res.holds(1e-12)
        zero = duality_pairing_check(FourierDistribution.zero(1, 2), SmoothnessIndex(0.0, Constant(1.0)))
        assert (zero.lhs, zero.rhs) == (0.0, 0.0)


class TestEmbeddings:
    def test_inclusion_with_trivial_phi(self):
        res = inclusion_constants(SmoothnessIndex(0.0, Constant(1.0)), 0.5, 256)
        assert res.upper == 1.0 and res.lower == 1.0
        assert res.upper_mode == (0,) and res.lower_mode == (0,)

    def test_inclusion_bounded_for_log(self):
        res = inclusion_constants(SmoothnessIndex(1.0, LogMultiscale((1.0,))), 0.25, 64, n=2)
        assert math.isfinite(res.upper) and math.isfinite(res.lower)

    def test_inclusion_rejects_eps(self):
        with pytest.raises(NonPositiveParameter):
            inclusion_constants(SmoothnessIndex(0.0, Constant(1.0)), 0.0, 4)

    def test_embedding_profile(self):
        res = embedding_profile(SmoothnessIndex(1.0, Constant(1.0)), SmoothnessIndex(0.0, Constant(1.0)), 16)
        assert res.norm_bound == 1.0
        assert res.attained_at == 1.0
        assert res.tail_sup < 0.2
