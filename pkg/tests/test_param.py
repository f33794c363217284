import math

import numpy as np
import pytest

from errors import NonPositiveArgument, NonPositiveParameter, OrderViolation
from expression import parse_param
from karamata import AlphaSpec, BetaSpec
from param import (
    LOG_SHIFTS,
    Composition,
    Constant,
    LogMultiscale,
    Power,
    Product,
    Quotient,
    RealPower,
    Sum,
    dual_chi,
    interpolated_smoothness,
    interpolation_psi,
    karamata_build,
    log_power,
    phi_s,
    qsv_compose,
    reiteration_omega,
)


class TestLeaves:
    def test_constant_and_power(self):
        assert Constant(2.0)(5.0) == 2.0
        assert Power(0.5)(4.0) == 2.0
        assert Power(-1.0)(4.0) == 0.25

    @pytest.mark.parametrize("c", [0.0, -1.0])
    def test_constant_must_be_positive(self, c):
        with pytest.raises(NonPositiveParameter):
            Constant(c)

    @pytest.mark.parametrize("t", [0.0, -1.0])
    def test_non_positive_argument(self, t):
        with pytest.raises(NonPositiveArgument):
            Power(0.5).evaluate(t)
        # Eingabefehler sind auch ValueError
        with pytest.raises(ValueError):
            LogMultiscale((1.0,))(t)

    def test_log_multiscale_matches_closed_form(self):
        t = 123.456
        assert LogMultiscale((1.0,))(t) == math.log(t + math.e)
        shifted = t + LOG_SHIFTS[2]
        expected = math.log(shifted) ** 1.0 * math.log(math.log(shifted)) ** -2.0
        assert LogMultiscale((1.0, -2.0))(t) == pytest.approx(expected, rel=1e-15)

    def test_log_multiscale_positive_near_zero(self):
        for exps in [(1.0,), (-2.0, 3.0), (1.0, 1.0, 1.0)]:
            value = LogMultiscale(exps)(1e-300)
            assert math.isfinite(value) and value > 0

    def test_log_multiscale_level_limit(self):
        with pytest.raises(NonPositiveParameter):
            LogMultiscale((1.0, 1.0, 1.0, 1.0))

    def test_log_power_shortcut(self):
        assert log_power(2.0) == LogMultiscale((2.0,))

    def test_evaluate_many_is_bitwise_pointwise(self):
        f = Product(Power(0.3), LogMultiscale((1.0, -1.0)))
        ts = np.geomspace(1e-3, 1e9, 50)
        many = f.evaluate_many(ts)
        assert all(many[i] == f.evaluate(t) for i, t in enumerate(ts))


class TestKaramata:
    def test_zero_alpha_constant_beta(self):
        phi = karamata_build(AlphaSpec.zero(), BetaSpec.const(0.5), 2.0)
        assert phi(10.0) == math.exp(0.5)
        assert phi(1e9) == math.exp(0.5)

    def test_inv_log_reproduces_log(self):
        # α = 1/ln τ, r = e: ∫_e^t dτ/(τ ln τ) = ln ln t, also φ(t) = ln t
        phi = karamata_build(AlphaSpec.inv_log(1.0), BetaSpec.const(0.0), math.e)
        assert phi(1e6) == pytest.approx(math.log(1e6), rel=1e-9)

    def test_clamped_below_r(self):
        phi = karamata_build(AlphaSpec.inv_log(1.0), BetaSpec.const(0.0), math.e)
        assert phi(0.5) == phi(math.e) == 1.0

    def test_log_domain_requires_r_above_one(self):
        with pytest.raises(NonPositiveParameter):
            karamata_build(AlphaSpec.inv_log(1.0), BetaSpec.const(0.0), 1.0)

    def test_declared_qsv(self):
        phi = karamata_build(AlphaSpec.sin_log(0.25), BetaSpec.sin_loglog(0.2), math.e)
        assert phi.is_qsv


class TestDeclaredIndex:
    def test_node_rules(self):
        assert Product(Power(0.3), LogMultiscale((1.0,))).declared_index == pytest.approx(0.3)
        assert Quotient(Power(0.3), Power(0.1)).declared_index == pytest.approx(0.2)
        assert RealPower(Power(0.5), 0.5).declared_index == pytest.approx(0.25)
        assert Sum(Power(0.2), Power(0.7)).declared_index == pytest.approx(0.7)
        assert Composition(Power(0.5), Power(2.0)).declared_index == pytest.approx(1.0)

    def test_derived_parameters(self):
        assert interpolation_psi(LogMultiscale((1.0,)), 1.0, 3.0).declared_index == pytest.approx(0.25)
        assert phi_s(LogMultiscale((1.0,)), 2.0, 2.0).declared_index == pytest.approx(1.0)
        assert dual_chi(Power(0.25)).declared_index == pytest.approx(0.75)

    def test_unknown_index(self):
        assert Composition(Power(0.5), Power(-1.0)).declared_index is None
        assert not Composition(Power(0.5), Power(-1.0)).is_qsv

    def test_qsv_compose(self):
        chi = qsv_compose(LogMultiscale((1.0,)), 0.5, LogMultiscale((2.0,)))
        assert chi.is_qsv
        t = 1e4
        assert chi(t) == LogMultiscale((1.0,))(t**0.5 * LogMultiscale((2.0,))(t))


class TestDerived:
    def test_reiteration_omega_power_case(self):
        # f ≡ 1, g = t, ψ = t^θ ⇒ ω = ψ
        omega = reiteration_omega(Constant(1.0), Power(1.0), Power(0.4))
        for t in [0.01, 1.0, 3.5, 1e7]:
            assert omega(t) == t**0.4

    def test_reiteration_omega_identity(self):
        f = Product(Power(0.2), LogMultiscale((1.0,)))
        g = Product(Power(0.9), LogMultiscale((-1.0,)))
        psi = Power(0.5)
        omega = reiteration_omega(f, g, psi)
        for t in np.geomspace(1e-3, 1e9, 17):
            assert omega(t) == f(t) * psi(g(t) / f(t))

    def test_reiteration_warns_for_unbounded_ratio(self, caplog):
        reiteration_omega(Power(1.0), Constant(1.0), Power(0.5))
        assert "f/g" in caplog.text

    def test_dual_chi(self):
        chi = dual_chi(Power(0.25))
        for t in [0.5, 2.0, 1e6]:
            assert chi(t) == t / t**0.25

    def test_interpolation_psi(self):
        phi = LogMultiscale((1.0,))
        psi = interpolation_psi(phi, 1.0, 1.0)
        assert psi(0.5) == phi(1.0)
        assert interpolation_psi(Constant(1.0), 1.0, 1.0)(9.0) == 3.0

    def test_phi_s(self):
        f = phi_s(Constant(1.0), 2.0, 2.0)
        assert f(7.0) == 7.0
        assert f(0.25) == 1.0

    def test_interpolated_smoothness(self):
        s, phi = interpolated_smoothness(Constant(1.0), Constant(1.0), 0.0, 2.0, 0.5, Constant(1.0))
        assert s == 1.0
        assert phi(10.0) == 1.0

    def test_interpolated_smoothness_order(self):
        with pytest.raises(OrderViolation):
            interpolated_smoothness(Constant(1.0), Constant(1.0), 2.0, 0.0, 0.5, Constant(1.0))
        with pytest.raises(ValueError):
            interpolated_smoothness(Constant(1.0), Constant(1.0), 0.0, 1.0, 1.0, Constant(1.0))


class TestOperators:
    def test_arithmetic_builds_nodes(self):
        f = Power(0.5) * 2 + 1
        assert f(4.0) == 5.0
        assert (1 / Power(1.0))(4.0) == 0.25
        assert (Power(1.0) ** 0.5)(16.0) == 4.0

    @pytest.mark.parametrize(
        "fn",
        [
            Product(Power(0.5), LogMultiscale((1.0, -2.0))),
            interpolation_psi(LogMultiscale((1.0,)), 1.0, 2.0),
            phi_s(LogMultiscale((-1.0,)), 1.5, 2.0),
            dual_chi(Power(0.25)),
            karamata_build(AlphaSpec.inv_pow(0.5, 1.0), BetaSpec.step(0.1, 10.0), 2.0),
            RealPower(Quotient(Power(1.0), LogMultiscale((2.0,))), 0.5),
            qsv_compose(LogMultiscale((1.0,)), 1.0, Constant(3.0)),
        ],
    )
    def test_describe_parses_back(self, fn):
        assert parse_param(fn.describe()) == fn
