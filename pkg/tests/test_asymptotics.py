from fractions import Fraction as F

import numpy as np
import pytest

from lovelieb.core import EquationSpec, RhsSpec, Sign
from lovelieb.quadrature import RuleKind, make_rule
from lovelieb.nystrom import eval_solution, solve_nystrom
from lovelieb.asymptotics import (
    OuterKind,
    eval_series,
    large_alpha_series,
    small_alpha_outer,
)


class TestSeriesCoefficients:
    def test_minus_kernel_constant_rhs(self):
        # u0=1, u1=2/pi, u2=4/pi^2, u3=8/pi^3-2/(3pi)-2x^2/pi,
        # u4=16/pi^4-4/pi^2-4x^2/pi^2, all exact
        s = large_alpha_series(RhsSpec.one(), +1, 4)
        assert s.terms[0] == {0: {0: F(1)}}
        assert s.terms[1] == {0: {1: F(2)}}
        assert s.terms[2] == {0: {2: F(4)}}
        assert s.terms[3] == {0: {3: F(8), 1: F(-2, 3)}, 2: {1: F(-2)}}
        assert s.terms[4] == {0: {4: F(16), 2: F(-4)}, 2: {2: F(-4)}}

    def test_linear_rhs(self):
        # g=x: u0=x, u1=u2=u4=0, u3=4x/(3pi), exact
        s = large_alpha_series(RhsSpec.x(), +1, 4)
        assert s.terms[0] == {1: {0: F(1)}}
        assert s.terms[1] == {} and s.terms[2] == {} and s.terms[4] == {}
        assert s.terms[3] == {1: {1: F(4, 3)}}

    def test_sign_flip_changes_odd_terms_only(self):
        plus = large_alpha_series(RhsSpec.one(), +1, 4)
        minus = large_alpha_series(RhsSpec.one(), -1, 4)
        for n in (0, 2, 4):
            assert plus.terms[n] == minus.terms[n]
        for n in (1, 3):
            flipped = {m: {k: -v for k, v in p.items()}
                       for m, p in plus.terms[n].items()}
            assert minus.terms[n] == flipped

    def test_general_rhs_matches_closed_forms(self):
        # u1 = chi*g0, u2 = 2*chi^2*g0,
        # u3 = chi*(4*chi^2*g0 - g2) + 2*x*chi*g1 - x^2*chi*g0
        # for arbitrary polynomial g, with chi = lam/pi and moments
        # g_n = int y^n g(y) dy
        rng = np.random.default_rng(11)
        for lam in (+1, -1):
            coeffs = rng.integers(-20, 20, size=5) / 8.0
            s = large_alpha_series(RhsSpec.polynomial(coeffs), lam, 4)
            g0, g1, g2 = s.moments[0], s.moments[1], s.moments[2]

            def chi_poly(*terms):
                # sum of (fraction, chi_power) pairs as a pi-power dict
                out = {}
                for frac, power in terms:
                    val = F(lam) ** power * frac
                    out[power] = out.get(power, F(0)) + val
                return {k: v for k, v in out.items() if v != 0}

            def xpoly(**by_power):
                return {int(m[1:]): p for m, p in by_power.items() if p}

            assert s.terms[1] == xpoly(x0=chi_poly((g0, 1)))
            assert s.terms[2] == xpoly(x0=chi_poly((2 * g0, 2)))
            assert s.terms[3] == xpoly(x0=chi_poly((4 * g0, 3), (-g2, 1)),
                                       x1=chi_poly((2 * g1, 1)),
                                       x2=chi_poly((-g0, 1)))

    def test_degree_bound(self):
        # u_{2m+1} and u_{2m+2} are polynomials of degree at most 2m
        rng = np.random.default_rng(3)
        for _ in range(5):
            deg = rng.integers(0, 5)
            coeffs = rng.integers(-5, 6, size=deg + 1).astype(float)
            if not np.any(coeffs):
                coeffs[0] = 1.0
            s = large_alpha_series(RhsSpec.polynomial(coeffs), +1, 10)
            for n in range(1, 11):
                m = (n - 1) // 2
                assert s.term_degree(n) <= 2 * m

    def test_even_rhs_keeps_even_powers(self):
        s = large_alpha_series(RhsSpec.polynomial([1.0, 0.0, -0.5]), -1, 8)
        for term in s.terms:
            assert all(p % 2 == 0 for p in term)

    def test_rejects_alpha_dependent_rhs(self):
        with pytest.raises(ValueError):
            large_alpha_series(RhsSpec.hulthen(), +1, 2)


class TestEvalSeries:
    def test_order_zero_is_rhs(self):
        s = large_alpha_series(RhsSpec.polynomial([0.5, 0.0, 1.0]), +1, 0)
        xs = np.linspace(-1, 1, 7)
        np.testing.assert_allclose(eval_series(s, xs, 7.0), 0.5 + xs ** 2)

    def test_partial_sum_alpha_ten(self):
        s = large_alpha_series(RhsSpec.one(), +1, 4)
        expected = (1.0 + 2.0 / (10 * np.pi) + 4.0 / (100 * np.pi ** 2)
                    + (8 / np.pi ** 3 - 2 / (3 * np.pi)) / 1e3
                    + (16 / np.pi ** 4 - 4 / np.pi ** 2) / 1e4)
        assert eval_series(s, 0.0, 10.0) == pytest.approx(expected, abs=1e-15)

    def test_error_against_solver_alpha_ten(self):
        s = large_alpha_series(RhsSpec.one(), +1, 4)
        spec = EquationSpec(Sign.MINUS_KERNEL, 10.0, RhsSpec.one())
        ny = solve_nystrom(spec, make_rule(RuleKind.GAUSS_LEGENDRE, 128))
        err4 = abs(eval_series(s, 0.0, 10.0) - eval_solution(ny, 0.0))
        s2 = large_alpha_series(RhsSpec.one(), +1, 2)
        err2 = abs(eval_series(s2, 0.0, 10.0) - eval_solution(ny, 0.0))
        assert err4 < err2
        assert err4 < 5e-4

    def test_error_scales_like_alpha_to_minus_five(self):
        s = large_alpha_series(RhsSpec.one(), +1, 4)
        errs = []
        for alpha in (5.0, 10.0, 20.0):
            spec = EquationSpec(Sign.MINUS_KERNEL, alpha, RhsSpec.one())
            ny = solve_nystrom(spec, make_rule(RuleKind.GAUSS_LEGENDRE, 128))
            errs.append(abs(eval_series(s, 0.0, alpha) - eval_solution(ny, 0.0)))
        slope = np.polyfit(np.log([5.0, 10.0, 20.0]), np.log(errs), 1)[0]
        assert -5.5 < slope < -4.5


class TestOuterApproximations:
    def test_gaudin_two_term_center(self):
        for alpha in (0.05, 0.3):
            assert small_alpha_outer(OuterKind.GAUDIN_ONE_TWO_TERM, 0.0, alpha) \
                == pytest.approx(0.5 + alpha / (2 * np.pi), abs=1e-15)

    def test_semicircle_center(self):
        assert small_alpha_outer(OuterKind.LIEB_ONE_LEADING, 0.0, 0.2) \
            == pytest.approx(5.0, abs=1e-13)

    def test_gaudin_x_leading(self):
        assert small_alpha_outer(OuterKind.GAUDIN_X_LEADING, 0.6, 0.1) \
            == pytest.approx(0.3)

    @pytest.mark.parametrize("kind", [OuterKind.LIEB_X_HUTSON,
                                      OuterKind.LIEB_X_REICHERT])
    def test_odd_variants_are_odd(self, kind):
        xs = np.linspace(0.05, 0.95, 9)
        vp = small_alpha_outer(kind, xs, 0.1)
        vm = small_alpha_outer(kind, -xs, 0.1)
        np.testing.assert_allclose(vm, -vp, atol=1e-12)

    def test_domain_error_at_endpoints(self):
        for kind in OuterKind:
            with pytest.raises(ValueError):
                small_alpha_outer(kind, 1.0, 0.1)

    def test_two_term_outer_matches_solver(self):
        # alpha = 0.1, |x| <= 0.8: both two-term forms within 2 percent
        xs = np.linspace(-0.8, 0.8, 33)
        spec = EquationSpec(Sign.MINUS_KERNEL, 0.1, RhsSpec.one())
        ny = solve_nystrom(spec, make_rule(RuleKind.SIMPSON, 1025),
                           regularize=True, use_parity=True)
        u = eval_solution(ny, xs)
        approx = small_alpha_outer(OuterKind.LIEB_ONE_TWO_TERM, xs, 0.1)
        assert np.max(np.abs(approx - u) / np.abs(u)) < 0.02
