import numpy as np
import pytest
from scipy.integrate import quad

from lovelieb.core import (
    EquationSpec,
    KernelParams,
    RhsKind,
    RhsSpec,
    Sign,
    kernel_cdf_integral,
    kernel_eval,
    monomial_kernel_integrals,
    rhs_eval,
)


class TestKernel:
    def test_value_at_origin(self):
        assert kernel_eval(0.0, 1.0) == pytest.approx(1.0 / np.pi, abs=1e-15)

    def test_half_height_at_alpha(self):
        alpha = 0.7
        assert kernel_eval(alpha, alpha) == pytest.approx(1.0 / (2 * np.pi * alpha),
                                                          abs=1e-15)

    def test_even(self):
        assert kernel_eval(1.3, 0.5) == kernel_eval(-1.3, 0.5)

    def test_positive(self):
        xs = np.linspace(-5, 5, 101)
        assert np.all(kernel_eval(xs, 0.3) > 0)

    @pytest.mark.parametrize("alpha", [0.0, -1.0])
    def test_rejects_bad_alpha(self, alpha):
        with pytest.raises(ValueError):
            kernel_eval(0.0, alpha)
        with pytest.raises(ValueError):
            kernel_cdf_integral(0.0, alpha)


class TestKernelIntegral:
    def test_center_unit_alpha(self):
        assert kernel_cdf_integral(0.0, 1.0) == pytest.approx(0.5, abs=1e-15)

    def test_endpoint(self):
        assert kernel_cdf_integral(1.0, 2.0) == pytest.approx(0.25, abs=1e-15)

    def test_delta_limit(self):
        # approaches 1 inside the interval as alpha -> 0
        assert abs(kernel_cdf_integral(0.0, 1e-6) - 1.0) < 1e-5

    def test_bounds_and_limits(self):
        xs = np.linspace(-1, 1, 41)
        for alpha in [1e-4, 0.1, 1.0, 50.0]:
            vals = kernel_cdf_integral(xs, alpha)
            assert np.all(vals > 0) and np.all(vals < 1)
        assert kernel_cdf_integral(0.5, 1e-7) > 1 - 1e-6
        assert kernel_cdf_integral(0.5, 1e7) < 1e-6

    def test_matches_adaptive_integration(self):
        # closed form vs adaptive quadrature of the kernel, 50 random pairs
        rng = np.random.default_rng(42)
        for _ in range(50):
            x = rng.uniform(-1, 1)
            alpha = 10.0 ** rng.uniform(-2, 1.5)
            ref, _ = quad(lambda y: kernel_eval(x - y, alpha), -1, 1,
                          points=[x], limit=200, epsabs=1e-12, epsrel=1e-12)
            assert kernel_cdf_integral(x, alpha) == pytest.approx(ref, abs=1e-10)


class TestRhs:
    def test_one(self):
        assert rhs_eval(RhsSpec.one(), 0.37, 1.0) == 1.0

    def test_hulthen_binds_alpha(self):
        assert rhs_eval(RhsSpec.hulthen(), 0.0, 2.0) == pytest.approx(0.25)

    def test_quadratic_well_root(self):
        assert rhs_eval(RhsSpec.quadratic_well(1.0), 1.0, 0.5) == pytest.approx(0.0)

    def test_polynomial(self):
        rhs = RhsSpec.polynomial([1.0, 0.0, -2.0])
        assert rhs_eval(rhs, 0.5, 1.0) == pytest.approx(1.0 - 2.0 * 0.25)

    def test_polynomial_needs_coeffs(self):
        with pytest.raises(ValueError):
            RhsSpec(RhsKind.POLYNOMIAL)

    def test_parity(self):
        assert RhsSpec.one().parity() == "even"
        assert RhsSpec.x().parity() == "odd"
        assert RhsSpec.hulthen().parity() == "even"
        assert RhsSpec.quadratic_well(2.0).parity() == "even"
        assert RhsSpec.polynomial([0, 1, 0, 2]).parity() == "odd"
        assert RhsSpec.polynomial([1, 0, 2]).parity() == "even"
        assert RhsSpec.polynomial([1, 1]).parity() is None

    def test_manufactured_is_operator_image(self):
        # g = p - lam*K[p] must reproduce p when p solves the equation; here
        # just check the moment route against direct quadrature
        alpha, lam = 1.3, 1.0
        rhs = RhsSpec.manufactured([0.0, 0.0, 1.0], lam)
        for x in [-0.8, 0.0, 0.33]:
            conv, _ = quad(lambda y: kernel_eval(x - y, alpha) * y * y, -1, 1,
                           points=[x], epsabs=1e-12, epsrel=1e-12)
            expected = x * x - lam * conv
            assert rhs_eval(rhs, x, alpha) == pytest.approx(expected, abs=1e-10)


class TestEquationSpec:
    def test_lambda_mapping(self):
        # u - lam*K u = g: the plus-sign equation carries lam = -1
        assert EquationSpec(Sign.PLUS_KERNEL, 1.0, RhsSpec.one()).lam == -1.0
        assert EquationSpec(Sign.MINUS_KERNEL, 1.0, RhsSpec.one()).lam == 1.0

    @pytest.mark.parametrize("alpha", [0.0, -0.5])
    def test_rejects_nonpositive_alpha(self, alpha):
        with pytest.raises(ValueError):
            EquationSpec(Sign.MINUS_KERNEL, alpha, RhsSpec.one())
        with pytest.raises(ValueError):
            KernelParams(alpha)


class TestMonomialMoments:
    def test_zeroth_is_kernel_integral(self):
        mu = monomial_kernel_integrals(0, 0.3, 1.2)
        assert mu[0] == pytest.approx(kernel_cdf_integral(0.3, 1.2), abs=1e-14)

    @pytest.mark.parametrize("alpha", [0.07, 0.3, 1.0, 2.5, 20.0])
    def test_matches_quadrature(self, alpha):
        # both recurrence directions against the adaptive oracle
        rng = np.random.default_rng(7)
        xs = rng.uniform(-1, 1, 3)
        mu = monomial_kernel_integrals(24, xs, alpha)
        for ix, x in enumerate(xs):
            for n in [1, 2, 7, 24]:
                ref, _ = quad(lambda y: y ** n * kernel_eval(x - y, alpha), -1, 1,
                              points=[x], limit=200, epsabs=1e-13, epsrel=1e-13)
                assert mu[n, ix] == pytest.approx(ref, abs=5e-13)

    def test_parity_in_x(self):
        mu_p = monomial_kernel_integrals(9, 0.4, 0.8)
        mu_m = monomial_kernel_integrals(9, -0.4, 0.8)
        signs = (-1.0) ** np.arange(10)
        np.testing.assert_allclose(mu_m, signs * mu_p, atol=1e-15)
