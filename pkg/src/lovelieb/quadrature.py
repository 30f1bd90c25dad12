"""Quadrature rules on [-1, 1].

Four classical rules (composite trapezoid, composite Simpson, Gauss-Legendre,
Clenshaw-Curtis) plus the composite midpoint rule that the element method
produces naturally.  All rules have strictly ascending nodes, positive
weights summing to 2, and are exactly symmetric about 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = ["RuleKind", "QuadratureRule", "make_rule", "gauss_legendre_nodes"]


class RuleKind(enum.Enum):
    TRAPEZOID = "trapezoid"
    SIMPSON = "simpson"
    GAUSS_LEGENDRE = "gauss"
    CLENSHAW_CURTIS = "clenshaw-curtis"
    MIDPOINT = "midpoint"


@dataclass(frozen=True)
class QuadratureRule:
    kind: RuleKind
    n: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def _legendre_and_deriv(n: int, x: np.ndarray):
    """P_n(x) and P_n'(x) by the three-term recurrence."""
    p0 = np.ones_like(x)
    p1 = x.copy()
    if n == 0:
        return p0, np.zeros_like(x)
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


def gauss_legendre_nodes(n: int):
    """Gauss-Legendre nodes/weights by Newton iteration on P_n.

    Chebyshev-angle starting guesses, 100-iteration cap, 1e-15 tolerance.
    Stable to n on the order of 10^3.
    """
    i = np.arange(n)
    x = -np.cos(np.pi * (4 * i + 3) / (4 * n + 2))
    for _ in range(100):
        p, dp = _legendre_and_deriv(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    _, dp = _legendre_and_deriv(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # enforce exact symmetry (the iteration is symmetric only to rounding)
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return x, w


def _clenshaw_curtis(n: int):
    # explicit cosine-sum weights; O(n^2) is fine at the sizes used here
    N = n - 1
    theta = np.pi * np.arange(n) / N
    w = np.empty(n)
    v = np.ones(n - 2)
    if N % 2 == 0:
        w[0] = w[N] = 1.0 / (N * N - 1)
        for k in range(1, N // 2):
            v -= 2.0 * np.cos(2.0 * k * theta[1:-1]) / (4.0 * k * k - 1)
        v -= np.cos(N * theta[1:-1]) / (N * N - 1)
    else:
        w[0] = w[N] = 1.0 / (N * N)
        for k in range(1, (N - 1) // 2 + 1):
            v -= 2.0 * np.cos(2.0 * k * theta[1:-1]) / (4.0 * k * k - 1)
    w[1:-1] = 2.0 * v / N
    x = -np.cos(theta)
    x[0], x[N] = -1.0, 1.0
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return x, w


def make_rule(kind: RuleKind, n: int) -> QuadratureRule:
    """Build an n-point rule of the given kind.

    Simpson requires odd n >= 3; every other kind requires n >= 2 (midpoint
    accepts n >= 1).
    """
    if kind is RuleKind.MIDPOINT:
        if n < 1:
            raise ValueError("midpoint rule needs n >= 1")
        h = 2.0 / n
        x = -1.0 + h * (np.arange(n) + 0.5)
        w = np.full(n, h)
    elif kind is RuleKind.TRAPEZOID:
        if n < 2:
            raise ValueError("trapezoid rule needs n >= 2")
        x = np.linspace(-1.0, 1.0, n)
        h = 2.0 / (n - 1)
        w = np.full(n, h)
        w[0] = w[-1] = h / 2.0
    elif kind is RuleKind.SIMPSON:
        if n < 3 or n % 2 == 0:
            raise ValueError(f"Simpson rule needs odd n >= 3, got {n}")
        x = np.linspace(-1.0, 1.0, n)
        h = 2.0 / (n - 1)
        w = np.full(n, 2.0 * h / 3.0)
        w[1::2] = 4.0 * h / 3.0
        w[0] = w[-1] = h / 3.0
    elif kind is RuleKind.GAUSS_LEGENDRE:
        if n < 2:
            raise ValueError("Gauss-Legendre rule needs n >= 2")
        x, w = gauss_legendre_nodes(n)
    elif kind is RuleKind.CLENSHAW_CURTIS:
        if n < 2:
            raise ValueError("Clenshaw-Curtis rule needs n >= 2")
        x, w = _clenshaw_curtis(n)
    else:  # pragma: no cover
        raise ValueError(f"unknown rule kind {kind}")
    return QuadratureRule(kind=kind, n=n, nodes=x, weights=w)
