import numpy as np
import pytest

from lovelieb.quadrature import RuleKind, make_rule
from lovelieb.quadrature import _legendre_and_deriv


ALL_KINDS = [RuleKind.TRAPEZOID, RuleKind.SIMPSON, RuleKind.GAUSS_LEGENDRE,
             RuleKind.CLENSHAW_CURTIS]


def _valid_n(kind, n):
    return n if kind is not RuleKind.SIMPSON else n + (1 - n % 2)


class TestInvariants:
    @pytest.mark.parametrize("kind", ALL_KINDS)
    @pytest.mark.parametrize("n", [3, 8, 33, 100])
    def test_weights_sum_to_two(self, kind, n):
        rule = make_rule(kind, _valid_n(kind, n))
        assert abs(rule.weights.sum() - 2.0) < 1e-12

    @pytest.mark.parametrize("kind", ALL_KINDS)
    @pytest.mark.parametrize("n", [3, 16, 65])
    def test_weights_positive_nodes_ascending(self, kind, n):
        rule = make_rule(kind, _valid_n(kind, n))
        assert np.all(rule.weights > 0)
        assert np.all(np.diff(rule.nodes) > 0)
        assert rule.nodes[0] >= -1.0 and rule.nodes[-1] <= 1.0

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_symmetry(self, kind):
        rule = make_rule(kind, _valid_n(kind, 24))
        np.testing.assert_allclose(rule.nodes, -rule.nodes[::-1], atol=0)
        np.testing.assert_allclose(rule.weights, rule.weights[::-1], atol=0)


class TestExamples:
    def test_trapezoid_3(self):
        rule = make_rule(RuleKind.TRAPEZOID, 3)
        np.testing.assert_allclose(rule.nodes, [-1.0, 0.0, 1.0])
        np.testing.assert_allclose(rule.weights, [0.5, 1.0, 0.5])

    def test_gauss_2(self):
        rule = make_rule(RuleKind.GAUSS_LEGENDRE, 2)
        np.testing.assert_allclose(rule.nodes, [-1 / np.sqrt(3), 1 / np.sqrt(3)],
                                   atol=1e-15)
        np.testing.assert_allclose(rule.weights, [1.0, 1.0], atol=1e-15)

    def test_simpson_3(self):
        rule = make_rule(RuleKind.SIMPSON, 3)
        np.testing.assert_allclose(rule.nodes, [-1.0, 0.0, 1.0])
        np.testing.assert_allclose(rule.weights, [1 / 3, 4 / 3, 1 / 3])


class TestExactness:
    @pytest.mark.parametrize("n", [2, 7, 16])
    def test_gauss_degree(self, n):
        rule = make_rule(RuleKind.GAUSS_LEGENDRE, n)
        for d in range(2 * n):
            exact = 2.0 / (d + 1) if d % 2 == 0 else 0.0
            assert np.dot(rule.weights, rule.nodes ** d) == pytest.approx(
                exact, abs=1e-12)

    @pytest.mark.parametrize("n", [5, 9, 12])
    def test_clenshaw_curtis_degree(self, n):
        rule = make_rule(RuleKind.CLENSHAW_CURTIS, n)
        for d in range(n):
            exact = 2.0 / (d + 1) if d % 2 == 0 else 0.0
            assert np.dot(rule.weights, rule.nodes ** d) == pytest.approx(
                exact, abs=1e-12)

    def test_simpson_cubics(self):
        rule = make_rule(RuleKind.SIMPSON, 9)
        for d in range(4):
            exact = 2.0 / (d + 1) if d % 2 == 0 else 0.0
            assert np.dot(rule.weights, rule.nodes ** d) == pytest.approx(
                exact, abs=1e-12)

    @pytest.mark.parametrize("n", [16, 64, 256])
    def test_gauss_nodes_are_legendre_roots(self, n):
        rule = make_rule(RuleKind.GAUSS_LEGENDRE, n)
        p, _ = _legendre_and_deriv(n, rule.nodes)
        assert np.max(np.abs(p)) < 1e-12

    def test_gauss_newton_converged_at_large_n(self):
        # |P_n| itself scales like eps*n^2 near the endpoints, so at large n
        # the root criterion is the scale-aware Newton residual |P/P'|
        rule = make_rule(RuleKind.GAUSS_LEGENDRE, 1000)
        p, dp = _legendre_and_deriv(1000, rule.nodes)
        assert np.max(np.abs(p / dp)) < 1e-15


class TestErrors:
    def test_simpson_rejects_even_n(self):
        with pytest.raises(ValueError):
            make_rule(RuleKind.SIMPSON, 64)

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_n_too_small(self, kind):
        with pytest.raises(ValueError):
            make_rule(kind, 1)
