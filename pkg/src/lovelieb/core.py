"""Problem definition shared by every solver.

The integral equation treated throughout is

    u(x) - lam * int_{-1}^{1} K(x - y) u(y) dy = g(x),   -1 <= x <= 1,

with the Lorentzian kernel K(x) = alpha / (pi * (alpha^2 + x^2)).  The two
physical sign conventions are stored as an equation label (PLUS_KERNEL /
MINUS_KERNEL, the sign written in front of the integral); the mapping to the
internal parameter lam = -/+1 lives in exactly one place, ``Sign.lam``, so
that sign bugs cannot creep in through ad-hoc conversions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Sign",
    "RhsKind",
    "RhsSpec",
    "EquationSpec",
    "KernelParams",
    "SolverError",
    "NonConvergenceError",
    "kernel_eval",
    "kernel_cdf_integral",
    "rhs_eval",
    "monomial_kernel_integrals",
]


class SolverError(RuntimeError):
    """A numerical procedure failed (singular system, non-convergence...)."""


class NonConvergenceError(SolverError):
    """Iteration hit its cap before reaching the requested tolerance.

    Carries the last iterate and the difference that was achieved so callers
    can inspect or restart.
    """

    def __init__(self, message, last=None, achieved=None, iterations=None):
        super().__init__(message)
        self.last = last
        self.achieved = achieved
        self.iterations = iterations


class Sign(enum.Enum):
    """Sign in front of the integral: u +/- int K u = g."""

    PLUS_KERNEL = "plus"
    MINUS_KERNEL = "minus"

    @property
    def lam(self) -> float:
        # u - lam*int(K u) = g, so the '+' equation has lam = -1.
        return -1.0 if self is Sign.PLUS_KERNEL else 1.0


class RhsKind(enum.Enum):
    ONE = "one"
    X = "x"
    POLYNOMIAL = "polynomial"
    HULTHEN = "hulthen"
    QUADRATIC_WELL = "quadratic_well"
    # g obtained by applying the integral operator to a known polynomial u;
    # lets every solver be exercised against an exactly known solution.
    MANUFACTURED = "manufactured"


@dataclass(frozen=True)
class RhsSpec:
    """Right-hand side g(x).

    coeffs are ascending polynomial coefficients (POLYNOMIAL and
    MANUFACTURED); beta parametrises the quadratic well g = 1 - beta*x^2;
    lam is the operator sign baked into a MANUFACTURED right-hand side.
    """

    kind: RhsKind
    coeffs: tuple = ()
    beta: float = 0.0
    lam: float = 0.0

    def __post_init__(self):
        if self.kind in (RhsKind.POLYNOMIAL, RhsKind.MANUFACTURED):
            if len(self.coeffs) == 0:
                raise ValueError("polynomial right-hand side needs coefficients")
        if self.kind is RhsKind.MANUFACTURED and self.lam not in (-1.0, 1.0):
            raise ValueError("manufactured right-hand side needs lam = +-1")

    @staticmethod
    def one() -> "RhsSpec":
        return RhsSpec(RhsKind.ONE)

    @staticmethod
    def x() -> "RhsSpec":
        return RhsSpec(RhsKind.X)

    @staticmethod
    def polynomial(coeffs) -> "RhsSpec":
        return RhsSpec(RhsKind.POLYNOMIAL, coeffs=tuple(float(c) for c in coeffs))

    @staticmethod
    def hulthen() -> "RhsSpec":
        return RhsSpec(RhsKind.HULTHEN)

    @staticmethod
    def quadratic_well(beta: float) -> "RhsSpec":
        return RhsSpec(RhsKind.QUADRATIC_WELL, beta=float(beta))

    @staticmethod
    def manufactured(coeffs, lam: float) -> "RhsSpec":
        return RhsSpec(RhsKind.MANUFACTURED,
                       coeffs=tuple(float(c) for c in coeffs), lam=float(lam))

    def parity(self) -> str | None:
        """'even', 'odd', or None when g has no definite parity."""
        if self.kind in (RhsKind.ONE, RhsKind.HULTHEN, RhsKind.QUADRATIC_WELL):
            return "even"
        if self.kind is RhsKind.X:
            return "odd"
        # The kernel is even in x - y, so the operator preserves parity and a
        # manufactured g inherits the parity of the generating polynomial.
        nz = [i for i, c in enumerate(self.coeffs) if c != 0.0]
        if not nz:
            return "even"
        if all(i % 2 == 0 for i in nz):
            return "even"
        if all(i % 2 == 1 for i in nz):
            return "odd"
        return None


@dataclass(frozen=True)
class KernelParams:
    alpha: float

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")


@dataclass(frozen=True)
class EquationSpec:
    """One equation instance: sign, coupling alpha > 0, right-hand side."""

    sign: Sign
    alpha: float
    rhs: RhsSpec = field(default_factory=RhsSpec.one)

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    @property
    def lam(self) -> float:
        return self.sign.lam


def kernel_eval(x, alpha: float):
    """Lorentzian kernel K(x) = alpha / (pi * (alpha^2 + x^2))."""
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    x = np.asarray(x, dtype=float)
    out = alpha / (np.pi * (alpha * alpha + x * x))
    return float(out) if out.ndim == 0 else out


def kernel_cdf_integral(x, alpha: float):
    """Exact kernel integral over the interval,

        int_{-1}^{1} K(x - y) dy
            = (1/pi) * [arctan((1-x)/alpha) + arctan((1+x)/alpha)].

    Lies strictly between 0 and 1; tends to 1 on |x| < 1 as alpha -> 0 (the
    kernel approximates a Dirac delta) and to 0 as alpha -> infinity.
    """
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    x = np.asarray(x, dtype=float)
    out = (np.arctan((1.0 - x) / alpha) + np.arctan((1.0 + x) / alpha)) / np.pi
    return float(out) if out.ndim == 0 else out


def _poly_eval(coeffs, x):
    out = np.zeros_like(x)
    for c in reversed(coeffs):
        out = out * x + c
    return out


def rhs_eval(rhs: RhsSpec, x, alpha: float):
    """Evaluate g(x); the Hulthen variant binds to the equation's alpha."""
    x = np.asarray(x, dtype=float)
    if rhs.kind is RhsKind.ONE:
        out = np.ones_like(x)
    elif rhs.kind is RhsKind.X:
        out = x.copy()
    elif rhs.kind is RhsKind.POLYNOMIAL:
        out = _poly_eval(rhs.coeffs, x)
    elif rhs.kind is RhsKind.HULTHEN:
        out = 1.0 / (alpha * alpha + 4.0 * x * x)
    elif rhs.kind is RhsKind.QUADRATIC_WELL:
        out = 1.0 - rhs.beta * x * x
    elif rhs.kind is RhsKind.MANUFACTURED:
        # g = p(x) - lam * int K(x-y) p(y) dy, exact via the moment table.
        mu = monomial_kernel_integrals(len(rhs.coeffs) - 1, x, alpha)
        out = _poly_eval(rhs.coeffs, x)
        for j, c in enumerate(rhs.coeffs):
            if c != 0.0:
                out = out - rhs.lam * c * mu[j]
    else:  # pragma: no cover
        raise ValueError(f"unknown rhs kind {rhs.kind}")
    return float(out) if out.ndim == 0 else out


def monomial_kernel_integrals(n_max: int, x, alpha: float) -> np.ndarray:
    """Moments mu_n(x) = int_{-1}^{1} y^n K(x - y) dy for n = 0..n_max.

    Evaluated by the coupled two-term recurrence

        mu_n = x*mu_{n-1} + nu_{n-1},
        nu_n = x*nu_{n-1} - alpha^2*mu_{n-1} + (alpha/pi)*t_{n-1},

    where nu_n = (alpha/pi) int y^n (y-x) / ((y-x)^2 + alpha^2) dy and
    t_m = int y^m dy.  The recurrence matrix has eigenvalues x +- i*alpha, so
    it is run forward when |x + i*alpha| is close to or below 1 and backward
    (Miller style, started from zero high above n_max) otherwise; either way
    rounding errors never amplify.

    Returns an array of shape (n_max + 1,) + shape(x).
    """
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    x_arr = np.asarray(x, dtype=float)
    xf = np.atleast_1d(x_arr).ravel()

    mu = np.empty((n_max + 1, xf.size))
    nu = np.empty((n_max + 1, xf.size))
    mu[0] = kernel_cdf_integral(xf, alpha)
    a2 = alpha * alpha
    nu[0] = (alpha / (2.0 * np.pi)) * np.log(
        (a2 + (1.0 - xf) ** 2) / (a2 + (1.0 + xf) ** 2)
    )

    def t_mom(m):
        return 2.0 / (m + 1) if m % 2 == 0 else 0.0

    zmod = np.hypot(xf, alpha)
    forward = zmod <= 1.05
    if np.any(forward) and n_max >= 1:
        m_prev, v_prev = mu[0][forward], nu[0][forward]
        for n in range(1, n_max + 1):
            m_new = xf[forward] * m_prev + v_prev
            v_new = xf[forward] * v_prev - a2 * m_prev + (alpha / np.pi) * t_mom(n - 1)
            mu[n][forward], nu[n][forward] = m_new, v_new
            m_prev, v_prev = m_new, v_new
    back = ~forward
    if np.any(back):
        xb = xf[back]
        zb = zmod[back]
        # error introduced by the zero start decays like |z|^-buffer
        buf = int(np.ceil(40.0 / np.log10(np.min(zb)))) + 4
        n_top = n_max + buf
        det = xb * xb + a2
        m_cur = np.zeros_like(xb)
        v_cur = np.zeros_like(xb)
        for n in range(n_top, 0, -1):
            v_shift = v_cur - (alpha / np.pi) * t_mom(n - 1)
            m_prev = (xb * m_cur - v_shift) / det
            v_prev = (a2 * m_cur + xb * v_shift) / det
            if n - 1 <= n_max:
                mu[n - 1][back], nu[n - 1][back] = m_prev, v_prev
            m_cur, v_cur = m_prev, v_prev
        # overwrite with the exact n = 0 values
        mu[0][back] = kernel_cdf_integral(xb, alpha)
        nu[0][back] = (alpha / (2.0 * np.pi)) * np.log(
            (a2 + (1.0 - xb) ** 2) / (a2 + (1.0 + xb) ** 2)
        )

    return mu.reshape((n_max + 1,) + x_arr.shape)
