"""Successive-approximation (Liouville-Neumann) solver.

The iteration u_n = g + lam * int K(x-y) u_{n-1}(y) dy contracts in the sup
norm with rate (2|lam|/pi) * arctan(1/alpha) < 1, so it converges for both
signs and every alpha > 0; the rate degrades as alpha -> 0.
"""

from __future__ import annotations

import numpy as np

from .core import EquationSpec, NonConvergenceError, kernel_eval, rhs_eval
from .nystrom import GridSolution
from .quadrature import QuadratureRule

__all__ = ["convergence_margin", "solve_neumann"]


def convergence_margin(spec: EquationSpec) -> float:
    """Contraction factor (2|lam|/pi) * arctan(1/alpha), always in (0, 1)."""
    return (2.0 * abs(spec.lam) / np.pi) * np.arctan(1.0 / spec.alpha)


def solve_neumann(spec: EquationSpec, rule: QuadratureRule, tol: float = 1e-10,
                  max_iter: int = 500, u0=None):
    """Iterate to the fixed point on the rule's nodes.

    Starts from u_0 = g unless a warm-start vector is supplied.  Stops when
    the max node-wise difference of successive iterates drops below tol;
    returns (GridSolution, iteration count).  Raises NonConvergenceError
    (carrying the last iterate and achieved difference) if max_iter is hit.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    nodes, weights = rule.nodes, rule.weights
    g = np.broadcast_to(
        np.asarray(rhs_eval(spec.rhs, nodes, spec.alpha), dtype=float), nodes.shape
    )
    kw = weights[None, :] * kernel_eval(nodes[:, None] - nodes[None, :], spec.alpha)
    lam = spec.lam
    u = g.copy() if u0 is None else np.asarray(u0, dtype=float).copy()
    if u.shape != nodes.shape:
        raise ValueError("warm start must match the rule's node count")
    for it in range(1, max_iter + 1):
        u_new = g + lam * (kw @ u)
        diff = float(np.max(np.abs(u_new - u)))
        if not np.isfinite(diff) or diff > 1e100:
            # the quadrature-discretized operator can fail to contract when
            # the rule cannot resolve the kernel peak (alpha << node spacing)
            raise NonConvergenceError(
                f"iteration diverged after {it} steps; the rule is too coarse "
                f"for alpha = {spec.alpha:g}",
                last=GridSolution(spec=spec, rule=rule, values=u),
                achieved=float("inf"),
                iterations=it,
            )
        u = u_new
        if diff < tol:
            sol = GridSolution(spec=spec, rule=rule, values=u)
            return sol, it
    raise NonConvergenceError(
        f"no convergence after {max_iter} iterations (last diff {diff:.3e})",
        last=GridSolution(spec=spec, rule=rule, values=u),
        achieved=diff,
        iterations=max_iter,
    )
