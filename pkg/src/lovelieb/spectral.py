"""Expansion methods: collocation and Galerkin over monomial, Chebyshev,
Legendre and cosine bases, plus the alpha > 1 even-Maclaurin linear system.

The workhorse is ``basis_kernel_integrals``: I_n(x) = int K(x-y) Phi_n(y) dy.
Chebyshev values come from a three-term recursion in n; monomial values from
the stable moment recurrence in :mod:`lovelieb.core`; Legendre and cosine
values (and any recursion fallback) from composite Gauss panels graded
towards the kernel peak at y = x.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .core import (
    EquationSpec,
    RhsKind,
    SolverError,
    kernel_eval,
    monomial_kernel_integrals,
    rhs_eval,
)
from .quadrature import RuleKind, gauss_legendre_nodes, make_rule

__all__ = [
    "Basis",
    "ExpansionSolution",
    "basis_kernel_integrals",
    "eval_basis",
    "eval_expansion",
    "solve_collocation",
    "solve_galerkin",
    "solve_maclaurin",
]


class Basis(enum.Enum):
    MONOMIAL_EVEN = "monomial-even"      # x^(2n)
    MONOMIAL_ODD = "monomial-odd"        # x^(2n+1)
    CHEBYSHEV_EVEN = "chebyshev-even"    # T_(2n)
    CHEBYSHEV_ODD = "chebyshev-odd"      # T_(2n+1)
    LEGENDRE_EVEN = "legendre-even"      # P_(2n)
    COSINE = "cosine"                    # cos(n*pi*x)

    @property
    def parity(self) -> str:
        return "odd" if self in (Basis.MONOMIAL_ODD, Basis.CHEBYSHEV_ODD) else "even"


@dataclass(frozen=True)
class ExpansionSolution:
    spec: EquationSpec
    basis: Basis
    coeffs: np.ndarray


# ---------------------------------------------------------------------------
# basis evaluation

def _cheb_t(n_max: int, x: np.ndarray) -> np.ndarray:
    """T_0..T_n at x, shape (n_max+1, len(x))."""
    out = np.empty((n_max + 1, x.size))
    out[0] = 1.0
    if n_max >= 1:
        out[1] = x
    for k in range(2, n_max + 1):
        out[k] = 2.0 * x * out[k - 1] - out[k - 2]
    return out


def _legendre_p(n_max: int, x: np.ndarray) -> np.ndarray:
    out = np.empty((n_max + 1, x.size))
    out[0] = 1.0
    if n_max >= 1:
        out[1] = x
    for k in range(2, n_max + 1):
        out[k] = ((2 * k - 1) * x * out[k - 1] - (k - 1) * out[k - 2]) / k
    return out


def eval_basis(basis: Basis, n_max: int, x) -> np.ndarray:
    """Phi_0..Phi_n at x via stable recurrences; shape (n_max+1,) + shape(x)."""
    x_arr = np.asarray(x, dtype=float)
    xf = np.atleast_1d(x_arr).ravel()
    if basis is Basis.MONOMIAL_EVEN:
        vals = np.power.outer(xf * xf, np.arange(n_max + 1)).T
    elif basis is Basis.MONOMIAL_ODD:
        vals = xf[None, :] * np.power.outer(xf * xf, np.arange(n_max + 1)).T
    elif basis is Basis.CHEBYSHEV_EVEN:
        vals = _cheb_t(2 * n_max, xf)[0::2]
    elif basis is Basis.CHEBYSHEV_ODD:
        vals = _cheb_t(2 * n_max + 1, xf)[1::2]
    elif basis is Basis.LEGENDRE_EVEN:
        vals = _legendre_p(2 * n_max, xf)[0::2]
    elif basis is Basis.COSINE:
        vals = np.cos(np.pi * np.outer(np.arange(n_max + 1), xf))
    else:  # pragma: no cover
        raise ValueError(f"unknown basis {basis}")
    return vals.reshape((n_max + 1,) + x_arr.shape)


def eval_expansion(sol: ExpansionSolution, x):
    """sum_n c_n Phi_n(x)."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < -1.0) or np.any(x_arr > 1.0):
        raise ValueError("x must lie in [-1, 1]")
    vals = eval_basis(sol.basis, len(sol.coeffs) - 1, x_arr)
    out = np.tensordot(sol.coeffs, vals, axes=(0, 0))
    return float(out) if x_arr.ndim == 0 else out


# ---------------------------------------------------------------------------
# kernel-basis integrals

def _graded_panels(x: float, alpha: float, min_width: float) -> np.ndarray:
    """Panel edges on [-1,1] refined geometrically towards y = x.

    Every panel ends up shorter than about twice its distance to x (or than
    ``min_width``), so a fixed-order Gauss rule per panel resolves both the
    kernel peak at y = x and any basis oscillation to machine accuracy.
    """
    edges = {-1.0, 1.0, x}
    width = max(alpha, 1e-8)
    for side in (-1.0, 1.0):
        d = width
        while d < 2.0:
            pt = x + side * d
            if -1.0 < pt < 1.0:
                edges.add(pt)
            d *= 2.0
    base = np.array(sorted(edges))
    out = [base[0]]
    for a, b in zip(base[:-1], base[1:]):
        k = max(1, int(np.ceil((b - a) / min_width)))
        out.extend(np.linspace(a, b, k + 1)[1:])
    return np.array(out)


_PANEL_X, _PANEL_W = gauss_legendre_nodes(24)


def _quad_kernel_basis(basis: Basis, n_max: int, x: float, alpha: float) -> np.ndarray:
    """I_n(x) for all n at once by graded composite Gauss quadrature."""
    if basis is Basis.COSINE:
        min_width = 2.0 / max(n_max, 1)
    elif basis in (Basis.CHEBYSHEV_EVEN, Basis.CHEBYSHEV_ODD, Basis.LEGENDRE_EVEN):
        min_width = 4.0 / max(2 * n_max + 1, 1)
    else:
        min_width = 2.0
    edges = _graded_panels(x, alpha, min_width)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    ys = (mid[:, None] + half[:, None] * _PANEL_X[None, :]).ravel()
    ws = (half[:, None] * _PANEL_W[None, :]).ravel()
    kern = kernel_eval(x - ys, alpha)
    phi = eval_basis(basis, n_max, ys)
    return phi @ (ws * kern)


def _cheb_recursion(m_max: int, x: float, alpha: float) -> np.ndarray | None:
    """C_m(z) = int_{-1}^{1} T_m(y) / (y - z) dy for z = x + i*alpha, by the
    forward recursion C_{m+1} = 2 z C_m - C_{m-1} + 2 t_m with
    t_m = int T_m dy.  Then I_m(x) = Im(C_m) / pi.

    The recursion's growing homogeneous solution amplifies rounding at rate
    rho = |z + sqrt(z^2-1)| per step, so it is attempted only when
    rho^m_max stays small; a None return tells the caller to integrate
    instead.  (The true C_m decay like rho^-m: blow-up past 1e6*|C_0| is
    also detected at run time as a belt-and-braces check.)
    """
    z = complex(x, alpha)
    s = np.sqrt(z * z - 1.0)
    rho = max(abs(z + s), abs(z - s))
    if m_max * np.log(rho) > np.log(1e5):
        return None
    c = np.empty(m_max + 1, dtype=complex)
    c[0] = np.log(1.0 - z) - np.log(-1.0 - z)
    if m_max >= 1:
        c[1] = 2.0 + z * c[0]
    limit = 1e6 * max(abs(c[0]), 1e-30)
    for m in range(1, m_max):
        t_m = 2.0 / (1.0 - m * m) if m % 2 == 0 else 0.0
        c[m + 1] = 2.0 * z * c[m] - c[m - 1] + 2.0 * t_m
        if abs(c[m + 1]) > limit:
            return None
    return c.imag / np.pi


def basis_kernel_integrals(basis: Basis, n_max: int, x: float, alpha: float):
    """I_n(x) = int_{-1}^{1} K(x-y) Phi_n(y) dy for n = 0..n_max.

    Returns (values, fallback) where ``fallback`` reports that the Chebyshev
    recursion was judged or detected unstable and quadrature was used.
    Values are even/odd in x with the parity of the basis functions.
    """
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not -1.0 <= x <= 1.0:
        raise ValueError("x must lie in [-1, 1]")
    fallback = False
    if basis in (Basis.MONOMIAL_EVEN, Basis.MONOMIAL_ODD):
        off = 0 if basis is Basis.MONOMIAL_EVEN else 1
        mu = monomial_kernel_integrals(2 * n_max + off, x, alpha)
        vals = mu[off::2]
    elif basis in (Basis.CHEBYSHEV_EVEN, Basis.CHEBYSHEV_ODD):
        off = 0 if basis is Basis.CHEBYSHEV_EVEN else 1
        c = _cheb_recursion(2 * n_max + off, x, alpha)
        if c is None:
            fallback = True
            vals = _quad_kernel_basis(basis, n_max, x, alpha)
        else:
            vals = c[off::2]
    else:
        vals = _quad_kernel_basis(basis, n_max, x, alpha)
    return vals, fallback


# ---------------------------------------------------------------------------
# solvers

def _check_parity(spec: EquationSpec, basis: Basis):
    rhs_parity = spec.rhs.parity()
    if basis is Basis.COSINE:
        return
    if rhs_parity is not None and rhs_parity != basis.parity:
        raise ValueError(
            f"basis {basis.value} has {basis.parity} parity but the "
            f"right-hand side is {rhs_parity}"
        )


def _operator_matrix(spec: EquationSpec, basis: Basis, n_basis: int,
                     points: np.ndarray) -> np.ndarray:
    """Rows Phi_n(x_i) - lam * I_n(x_i) of the discretized operator."""
    phi = eval_basis(basis, n_basis, points)
    mat = np.empty((points.size, n_basis + 1))
    for i, xi in enumerate(points):
        ints, _ = basis_kernel_integrals(basis, n_basis, float(xi), spec.alpha)
        mat[i] = phi[:, i] - spec.lam * ints
    return mat


def solve_collocation(spec: EquationSpec, basis: Basis, n_basis: int,
                      m_points: int | None = None) -> ExpansionSolution:
    """Collocate at Chebyshev-Gauss points on (0, 1].

    All bases here have definite parity, so collocating on half the interval
    loses nothing and keeps the square system nonsingular.  With
    m_points > n_basis + 1 the system is solved by least squares.
    """
    _check_parity(spec, basis)
    m = n_basis + 1 if m_points is None else m_points
    if m < n_basis + 1:
        raise ValueError("need at least n_basis + 1 collocation points")
    points = np.cos(np.pi * (2.0 * np.arange(m) + 1.0) / (4.0 * m))
    mat = _operator_matrix(spec, basis, n_basis, points)
    g = np.broadcast_to(
        np.asarray(rhs_eval(spec.rhs, points, spec.alpha), dtype=float), points.shape
    )
    coeffs, _, rank, sv = np.linalg.lstsq(mat, g, rcond=None)
    if rank < n_basis + 1:
        raise SolverError(
            f"rank-deficient collocation system: rank {rank} < {n_basis + 1}, "
            f"cond ~ {sv[0] / max(sv[-1], 1e-300):.3e}"
        )
    return ExpansionSolution(spec=spec, basis=basis, coeffs=coeffs)


def solve_galerkin(spec: EquationSpec, basis: Basis, n_basis: int) -> ExpansionSolution:
    """Galerkin projection; inner products by Gauss-Legendre quadrature with
    4*n_basis + 16 points."""
    _check_parity(spec, basis)
    rule = make_rule(RuleKind.GAUSS_LEGENDRE, 4 * n_basis + 16)
    op = _operator_matrix(spec, basis, n_basis, rule.nodes)
    phi = eval_basis(basis, n_basis, rule.nodes)
    g = np.broadcast_to(
        np.asarray(rhs_eval(spec.rhs, rule.nodes, spec.alpha), dtype=float),
        rule.nodes.shape,
    )
    wphi = phi * rule.weights[None, :]
    a = wphi @ op
    b = wphi @ g
    try:
        coeffs = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SolverError(
            f"singular Galerkin system (cond ~ {np.linalg.cond(a):.3e})"
        ) from exc
    return ExpansionSolution(spec=spec, basis=basis, coeffs=coeffs)


def solve_maclaurin(spec: EquationSpec, n_basis: int) -> ExpansionSolution:
    """Even-Maclaurin coefficients c_0..c_N for g = 1 and alpha > 1.

    Truncates the infinite linear system whose entries are the moments

        A_{0n} = int y^(2n) / (y^2 + a^2) dy,
        A_{mn} = int y^(2n) / (y^2 + a^2)^(m+1) * U_{2m}(y / sqrt(y^2 + a^2)) dy,

    evaluated by adaptive quadrature; the expansion of the kernel behind the
    system converges only for alpha > 1, hence the precondition.
    """
    if not spec.alpha > 1.0:
        raise ValueError("the Maclaurin system requires alpha > 1")
    if spec.rhs.kind is not RhsKind.ONE:
        raise ValueError("the Maclaurin system is derived for g = 1 only")
    n = n_basis
    alpha = spec.alpha
    a2 = alpha * alpha

    def u_cheb2(m, t):
        # U_m(t) by recurrence
        u0, u1 = 1.0, 2.0 * t
        if m == 0:
            return u0
        for _ in range(m - 1):
            u0, u1 = u1, 2.0 * t * u1 - u0
        return u1

    amat = np.empty((n + 1, n + 1))
    for nn in range(n + 1):
        amat[0, nn] = quad(lambda y: y ** (2 * nn) / (y * y + a2), -1.0, 1.0,
                           epsabs=1e-13, epsrel=1e-13)[0]
    for m in range(1, n + 1):
        for nn in range(n + 1):
            amat[m, nn] = quad(
                lambda y: y ** (2 * nn) / (y * y + a2) ** (m + 1)
                * u_cheb2(2 * m, y / np.sqrt(y * y + a2)),
                -1.0, 1.0, epsabs=1e-13, epsrel=1e-13,
            )[0]
    sys = np.eye(n + 1) - (spec.lam * alpha / np.pi) * amat
    rhs = np.zeros(n + 1)
    rhs[0] = 1.0
    coeffs = np.linalg.solve(sys, rhs)
    return ExpansionSolution(spec=spec, basis=Basis.MONOMIAL_EVEN, coeffs=coeffs)
