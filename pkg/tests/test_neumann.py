import math

import numpy as np
import pytest

from lovelieb.core import EquationSpec, NonConvergenceError, RhsSpec, Sign, kernel_cdf_integral
from lovelieb.quadrature import RuleKind, make_rule
from lovelieb.neumann import convergence_margin, solve_neumann
from lovelieb.nystrom import solve_nystrom


def lieb(alpha):
    return EquationSpec(Sign.MINUS_KERNEL, alpha, RhsSpec.one())


class TestMargin:
    def test_alpha_one_is_half(self):
        assert convergence_margin(lieb(1.0)) == pytest.approx(0.5, abs=1e-15)
        spec_p = EquationSpec(Sign.PLUS_KERNEL, 1.0, RhsSpec.one())
        assert convergence_margin(spec_p) == pytest.approx(0.5, abs=1e-15)

    def test_large_alpha_vanishes(self):
        assert convergence_margin(lieb(1e9)) < 1e-8

    def test_below_one_for_tiny_alpha(self):
        assert 0.0 < convergence_margin(lieb(1e-6)) < 1.0


class TestIteration:
    def test_single_step_from_constant_start(self):
        # u1 = 1 + lam*Kint(x; alpha) when u0 = g = 1
        rule = make_rule(RuleKind.GAUSS_LEGENDRE, 64)
        spec = lieb(1.0)
        with pytest.raises(NonConvergenceError) as err:
            solve_neumann(spec, rule, tol=1e-300, max_iter=1)
        u1 = err.value.last.values
        expected = 1.0 + spec.lam * kernel_cdf_integral(rule.nodes, 1.0)
        np.testing.assert_allclose(u1, expected, atol=1e-12)

    def test_agrees_with_nystrom(self):
        rule = make_rule(RuleKind.GAUSS_LEGENDRE, 64)
        sol, iters = solve_neumann(lieb(1.0), rule, tol=1e-10)
        direct = solve_nystrom(lieb(1.0), rule)
        np.testing.assert_allclose(sol.values, direct.values, atol=1e-8)
        assert iters > 1

    def test_slower_at_smaller_alpha(self):
        rule = make_rule(RuleKind.GAUSS_LEGENDRE, 64)
        _, it_01 = solve_neumann(lieb(0.1), rule, tol=1e-8, max_iter=5000)
        _, it_1 = solve_neumann(lieb(1.0), rule, tol=1e-8)
        assert it_01 > it_1

    def test_iteration_count_bound(self):
        rule = make_rule(RuleKind.GAUSS_LEGENDRE, 64)
        tol = 1e-10
        for alpha in [0.5, 1.0, 5.0]:
            _, iters = solve_neumann(lieb(alpha), rule, tol=tol)
            margin = convergence_margin(lieb(alpha))
            assert iters <= math.ceil(math.log(tol) / math.log(margin)) + 5

    def test_geometric_decay_rate(self):
        # successive sup-norm differences contract at most at the margin rate
        rule = make_rule(RuleKind.GAUSS_LEGENDRE, 64)
        spec = lieb(0.5)
        margin = convergence_margin(spec)
        g = np.ones(rule.n)
        kw = rule.weights[None, :] / (np.pi * (0.25 + (rule.nodes[:, None]
                                                       - rule.nodes[None, :]) ** 2)) * 0.5
        u = g.copy()
        diffs = []
        for _ in range(25):
            u_new = g + spec.lam * kw @ u
            diffs.append(np.max(np.abs(u_new - u)))
            u = u_new
        ratios = np.array(diffs[4:]) / np.array(diffs[3:-1])
        assert np.all(ratios <= margin + 0.05)

    def test_warm_start(self):
        rule = make_rule(RuleKind.GAUSS_LEGENDRE, 64)
        cold, it_cold = solve_neumann(lieb(1.0), rule, tol=1e-10)
        warm, it_warm = solve_neumann(lieb(1.0), rule, tol=1e-10, u0=cold.values)
        assert it_warm < it_cold
        np.testing.assert_allclose(warm.values, cold.values, atol=1e-9)

    def test_nonconvergence_reports_progress(self):
        rule = make_rule(RuleKind.GAUSS_LEGENDRE, 32)
        with pytest.raises(NonConvergenceError) as err:
            solve_neumann(lieb(0.3), rule, tol=1e-14, max_iter=3)
        assert err.value.iterations == 3
        assert err.value.achieved > 0
        assert err.value.last.values.shape == (32,)

    def test_validates_arguments(self):
        rule = make_rule(RuleKind.GAUSS_LEGENDRE, 16)
        with pytest.raises(ValueError):
            solve_neumann(lieb(1.0), rule, tol=0.0)
        with pytest.raises(ValueError):
            solve_neumann(lieb(1.0), rule, tol=1e-8, max_iter=0)
        with pytest.raises(ValueError):
            solve_neumann(lieb(1.0), rule, u0=np.ones(3))
