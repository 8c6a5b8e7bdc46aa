import math

import numpy as np
import pytest
from scipy import special as sp

from hextreme.specfun import (DomainError, NumericError, cached_rule, digamma,
                              gauss_laguerre_rule, incomplete_gamma_lower,
                              laguerre_eval, ln_gamma)


class TestGammaFamily:
    def test_ln_gamma_values(self):
        assert ln_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
        assert ln_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-14)
        assert ln_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)

    def test_ln_gamma_domain(self):
        with pytest.raises(DomainError):
            ln_gamma(0.0)
        with pytest.raises(DomainError):
            ln_gamma(-1.5)

    def test_digamma_values(self):
        euler_gamma = 0.5772156649015329
        assert digamma(1.0) == pytest.approx(-euler_gamma, rel=1e-13)
        # recurrence psi(x+1) = psi(x) + 1/x
        assert digamma(3.7) == pytest.approx(digamma(2.7) + 1 / 2.7, rel=1e-13)

    def test_incomplete_gamma_lower(self):
        # gamma(1, x) = 1 - e^-x
        assert incomplete_gamma_lower(1.0, 2.0) == pytest.approx(-math.expm1(-2.0), rel=1e-14)
        assert incomplete_gamma_lower(2.5, 0.0) == 0.0
        # limit x -> inf recovers Gamma(p)
        assert incomplete_gamma_lower(3.0, 1e3) == pytest.approx(2.0, rel=1e-12)
        with pytest.raises(DomainError):
            incomplete_gamma_lower(-1.0, 1.0)
        with pytest.raises(DomainError):
            incomplete_gamma_lower(1.0, -0.1)


class TestLaguerre:
    def test_low_order_polynomials(self):
        x = np.linspace(0.0, 10.0, 7)
        a = 0.7
        np.testing.assert_allclose(laguerre_eval(0, a, x), np.ones_like(x))
        np.testing.assert_allclose(laguerre_eval(1, a, x), 1 + a - x, rtol=1e-14)
        expected2 = 0.5 * (x**2 - 2 * (a + 2) * x + (a + 1) * (a + 2))
        np.testing.assert_allclose(laguerre_eval(2, a, x), expected2, rtol=1e-12)

    @pytest.mark.parametrize("order", [4, 16, 64])
    @pytest.mark.parametrize("alpha", [-0.5, 0.0, 2.3])
    def test_rule_integrates_polynomials_exactly(self, order, alpha):
        rule = gauss_laguerre_rule(order, alpha)
        # exact for monomials up to degree 2*order - 1
        for deg in (0, 1, order, 2 * order - 1):
            got = rule.integrate(lambda x: x**deg)
            want = math.exp(sp.gammaln(alpha + deg + 1))
            assert got == pytest.approx(want, rel=1e-11), (order, alpha, deg)

    def test_rule_matches_scipy_at_alpha_zero(self):
        rule = gauss_laguerre_rule(32, 0.0)
        nodes, weights = sp.roots_laguerre(32)
        np.testing.assert_allclose(rule.nodes, nodes, rtol=1e-12)
        np.testing.assert_allclose(rule.weights, weights, rtol=1e-10)

    def test_high_order_rule_is_finite_and_sorted(self):
        for alpha in (-0.9, 0.0, 7.5):
            rule = gauss_laguerre_rule(512, alpha)
            assert np.all(np.isfinite(rule.nodes))
            assert np.all(np.isfinite(rule.weights))
            assert np.all(np.diff(rule.nodes) > 0)
            assert rule.nodes[0] > 0
            total = rule.weights.sum()
            assert total == pytest.approx(math.exp(sp.gammaln(alpha + 1)), rel=1e-9)

    def test_rule_domain_checks(self):
        with pytest.raises(DomainError):
            gauss_laguerre_rule(0, 0.0)
        with pytest.raises(DomainError):
            gauss_laguerre_rule(4, -1.0)
        with pytest.raises(DomainError):
            gauss_laguerre_rule(100000, 0.0)

    def test_cached_rule_identity(self):
        a = cached_rule(64, 1.25)
        b = cached_rule(64, 1.25)
        assert a is b
        assert not a.nodes.flags.writeable
