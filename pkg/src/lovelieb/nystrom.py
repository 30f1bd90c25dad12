"""Dense-linear-system solvers.

Nystrom collocation (optionally regularized and/or reduced by parity), the
piecewise-constant element method with exact per-element kernel integrals,
Richardson extrapolation over node counts, and a quadrature-free residual
diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .core import (
    EquationSpec,
    SolverError,
    kernel_cdf_integral,
    kernel_eval,
    rhs_eval,
)
from .quadrature import QuadratureRule, RuleKind, make_rule

__all__ = [
    "GridSolution",
    "RichardsonResult",
    "solve_nystrom",
    "eval_solution",
    "solve_elements",
    "richardson_extrapolate",
    "residual_norm",
]


@dataclass(frozen=True)
class GridSolution:
    """Node values u_i ~ u(x_i) plus everything needed to interpolate.

    For element-method solutions ``element_edges`` holds the subdivision and
    the natural closure uses exact per-element kernel integrals instead of
    the quadrature sum.
    """

    spec: EquationSpec
    rule: QuadratureRule
    values: np.ndarray
    regularized: bool = False
    element_edges: np.ndarray | None = None


def _solve_dense(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    try:
        sol = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SolverError(
            f"singular collocation system (cond ~ {np.linalg.cond(a):.3e}); "
            "not expected for lam = +-1"
        ) from exc
    return sol


def _assemble(spec: EquationSpec, nodes: np.ndarray, weights: np.ndarray,
              regularize: bool) -> np.ndarray:
    lam = spec.lam
    kmat = kernel_eval(nodes[:, None] - nodes[None, :], spec.alpha)
    a = -lam * weights[None, :] * kmat
    if regularize:
        # u(x)(1 - lam*Kint(x)) - lam * sum_j w_j K(x-x_j) (u_j - u(x)) = g(x):
        # exact diagonal integral, differenced off-diagonal terms
        kint = kernel_cdf_integral(nodes, spec.alpha)
        np.fill_diagonal(a, 0.0)
        diag = 1.0 - lam * kint - a.sum(axis=1)
        a[np.arange(len(nodes)), np.arange(len(nodes))] = diag
    else:
        a[np.arange(len(nodes)), np.arange(len(nodes))] += 1.0
    return a


def solve_nystrom(spec: EquationSpec, rule: QuadratureRule,
                  regularize: bool = False, use_parity: bool = False) -> GridSolution:
    """Solve by quadrature + collocation at the rule's nodes.

    With ``use_parity`` and a right-hand side of definite parity, the system
    is folded onto the non-negative nodes (kernel columns combined as
    K(x-y) +- K(x+y)), solved at half size, and mirrored back.
    """
    nodes, weights = rule.nodes, rule.weights
    a = _assemble(spec, nodes, weights, regularize)
    g = rhs_eval(spec.rhs, nodes, spec.alpha)
    g = np.broadcast_to(np.asarray(g, dtype=float), nodes.shape).copy()

    if not use_parity:
        u = _solve_dense(a, g)
        return GridSolution(spec=spec, rule=rule, values=u, regularized=regularize)

    parity = spec.rhs.parity()
    if parity is None:
        raise ValueError("use_parity requires a right-hand side of definite parity")
    n = rule.n
    if not np.allclose(nodes, -nodes[::-1], atol=1e-14):
        raise ValueError("parity reduction needs a symmetric rule")

    pos = np.nonzero(nodes > 1e-14)[0]
    ctr = np.nonzero(np.abs(nodes) <= 1e-14)[0]  # at most one zero node
    mirror = n - 1 - pos
    if parity == "even":
        keep = np.concatenate([ctr, pos])
        b = a[np.ix_(keep, pos)] + a[np.ix_(keep, mirror)]
        if ctr.size:
            b = np.hstack([a[np.ix_(keep, ctr)], b])
        u_half = _solve_dense(b, g[keep])
        u = np.empty(n)
        u[keep] = u_half
        u[n - 1 - pos] = u_half[ctr.size:]
    else:
        b = a[np.ix_(pos, pos)] - a[np.ix_(pos, mirror)]
        u_half = _solve_dense(b, g[pos])
        u = np.empty(n)
        u[pos] = u_half
        u[mirror] = -u_half
        if ctr.size:
            u[ctr] = 0.0
    return GridSolution(spec=spec, rule=rule, values=u, regularized=regularize)


def eval_solution(sol: GridSolution, x):
    """Natural interpolation of a grid solution.

    Nystrom solutions use u(x) = g(x) + lam * sum_j w_j u_j K(x - x_j); at the
    nodes this reproduces the solved values (the collocation identity).
    Element solutions use the exact per-element integrals instead.
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < -1.0) or np.any(x_arr > 1.0):
        raise ValueError("x must lie in [-1, 1]")
    xs = np.atleast_1d(x_arr)
    spec = sol.spec
    g = np.broadcast_to(
        np.asarray(rhs_eval(spec.rhs, xs, spec.alpha), dtype=float), xs.shape
    )
    if sol.element_edges is not None:
        kint = _element_kernel_integrals(xs, sol.element_edges, spec.alpha)
    else:
        kint = sol.rule.weights[None, :] * kernel_eval(
            xs[:, None] - sol.rule.nodes[None, :], spec.alpha
        )
    out = g + spec.lam * kint @ sol.values
    return float(out[0]) if x_arr.ndim == 0 else out.reshape(x_arr.shape)


def _element_kernel_integrals(xs: np.ndarray, edges: np.ndarray, alpha: float):
    # int_{a_j}^{b_j} K(x - y) dy = (1/pi)[arctan((x-a_j)/alpha) - arctan((x-b_j)/alpha)]
    t = np.arctan((xs[:, None] - edges[None, :]) / alpha) / np.pi
    return t[:, :-1] - t[:, 1:]


def solve_elements(spec: EquationSpec, n_elements: int) -> GridSolution:
    """Piecewise-constant midpoint collocation on n equal elements.

    The kernel integrals over each element are exact arctan differences, so
    small alpha poses no quadrature difficulty.  Returned as a GridSolution
    on the midpoints with element-length weights.
    """
    if n_elements < 1:
        raise ValueError("need at least one element")
    edges = np.linspace(-1.0, 1.0, n_elements + 1)
    rule = make_rule(RuleKind.MIDPOINT, n_elements)
    mids = rule.nodes
    kint = _element_kernel_integrals(mids, edges, spec.alpha)
    a = np.eye(n_elements) - spec.lam * kint
    g = np.broadcast_to(
        np.asarray(rhs_eval(spec.rhs, mids, spec.alpha), dtype=float), mids.shape
    )
    u = _solve_dense(a, g.copy())
    return GridSolution(spec=spec, rule=rule, values=u, element_edges=edges)


@dataclass(frozen=True)
class RichardsonResult:
    value: float
    order: float | None
    warning: bool
    levels: tuple


def richardson_extrapolate(spec: EquationSpec, rule_kind: RuleKind, n_list,
                           x_probe: float, regularize: bool = False) -> RichardsonResult:
    """Extrapolate u(x_probe) to n -> infinity from a sequence of solves.

    Fits u_n = u_inf + C n^(-p) with p estimated from the last three grids
    (the convergence order is measured, not assumed).  Non-monotone level
    differences disable extrapolation: the finest value is returned with the
    warning flag set.
    """
    n_list = list(n_list)
    if len(n_list) < 3:
        raise ValueError("need at least three grid sizes")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("grid sizes must be ascending")
    vals = []
    for n in n_list:
        sol = solve_nystrom(spec, make_rule(rule_kind, n), regularize=regularize)
        vals.append(eval_solution(sol, x_probe))
    u1, u2, u3 = vals[-3:]
    n1, n2, n3 = (float(n) for n in n_list[-3:])
    d1, d2 = u2 - u1, u3 - u2
    if d1 == 0.0 and d2 == 0.0:
        return RichardsonResult(value=vals[-1], order=None, warning=False,
                                levels=tuple(vals))
    if d1 * d2 <= 0.0 or abs(d2) >= abs(d1):
        return RichardsonResult(value=vals[-1], order=None, warning=True,
                                levels=tuple(vals))
    ratio = d1 / d2

    def model(p):
        return (n1 ** -p - n2 ** -p) / (n2 ** -p - n3 ** -p) - ratio

    lo, hi = 0.05, 30.0
    flo, fhi = model(lo), model(hi)
    if flo * fhi > 0.0:
        return RichardsonResult(value=vals[-1], order=None, warning=True,
                                levels=tuple(vals))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = model(mid)
        if flo * fm <= 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
        if hi - lo < 1e-12:
            break
    p = 0.5 * (lo + hi)
    c = d2 / (n3 ** -p - n2 ** -p)
    return RichardsonResult(value=u3 - c * n3 ** -p, order=p, warning=False,
                            levels=tuple(vals))


def residual_norm(spec: EquationSpec, sol: GridSolution, m_samples: int = 17) -> float:
    """Max residual |u - lam*int(K u) - g| at off-node sample points.

    The integral is evaluated by adaptive (Gauss-Kronrod) quadrature of the
    interpolated solution, so the check does not reuse the solver's own
    quadrature rule.
    """
    if m_samples < 1:
        raise ValueError("need at least one sample point")
    xs = -1.0 + 2.0 * (np.arange(m_samples) + 0.5) / m_samples
    lam, alpha = spec.lam, spec.alpha
    worst = 0.0
    for x in xs:
        integral, _ = quad(
            lambda y: kernel_eval(x - y, alpha) * eval_solution(sol, y),
            -1.0, 1.0, points=[x], limit=200, epsabs=1e-10, epsrel=1e-10,
        )
        res = abs(
            eval_solution(sol, x) - lam * integral - rhs_eval(spec.rhs, x, alpha)
        )
        worst = max(worst, res)
    return worst
