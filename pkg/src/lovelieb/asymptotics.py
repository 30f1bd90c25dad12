"""Large-coupling series and small-coupling outer approximations.

The large-alpha expansion u(x; alpha) = sum_n u_n(x) / alpha^n is generated
by the double recursion

    u_0 = g,
    u_{2m+1}(x) = (lam/pi) * sum_{q=0}^{m} (-1)^(m+q) int (x-y)^(2m-2q) u_{2q}(y) dy,
    u_{2m+2}(x) = (lam/pi) * sum_{q=0}^{m} (-1)^(m+q) int (x-y)^(2m-2q) u_{2q+1}(y) dy,

carried out in exact rational arithmetic: every coefficient is a polynomial
in 1/pi with Fraction coefficients, converted to floating point only at
evaluation time.  Both u_{2m+1} and u_{2m+2} are polynomials of degree at
most 2m.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import RhsKind, RhsSpec

__all__ = [
    "AsymptoticSeries",
    "OuterKind",
    "large_alpha_series",
    "eval_series",
    "small_alpha_outer",
]

# A term u_n is stored as {x_power: {pi_power: Fraction}} where pi_power k
# stands for a factor pi^(-k).
PiPoly = dict
XPoly = dict


def _pipoly_add(a: PiPoly, b: PiPoly) -> PiPoly:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + v
    return {k: v for k, v in out.items() if v != 0}


def _pipoly_scale(a: PiPoly, factor: Fraction, pi_shift: int = 0) -> PiPoly:
    if factor == 0:
        return {}
    return {k + pi_shift: v * factor for k, v in a.items()}


def _xpoly_add(a: XPoly, b: XPoly) -> XPoly:
    out = {m: dict(p) for m, p in a.items()}
    for m, p in b.items():
        out[m] = _pipoly_add(out.get(m, {}), p)
    return {m: p for m, p in out.items() if p}


def _xpoly_scale(a: XPoly, factor: Fraction, pi_shift: int = 0) -> XPoly:
    return {m: _pipoly_scale(p, factor, pi_shift) for m, p in a.items() if factor != 0}


def _moment(u: XPoly, j: int) -> PiPoly:
    """int_{-1}^{1} y^j u(y) dy for a polynomial term u."""
    out: PiPoly = {}
    for m, p in u.items():
        k = j + m
        if k % 2 == 0:
            out = _pipoly_add(out, _pipoly_scale(p, Fraction(2, k + 1)))
    return out


def _convolve_power(k: int, u: XPoly) -> XPoly:
    """int_{-1}^{1} (x - y)^(2k) u(y) dy expanded in powers of x."""
    out: XPoly = {}
    for j in range(2 * k + 1):
        mom = _moment(u, j)
        if not mom:
            continue
        coeff = Fraction(math.comb(2 * k, j)) * (-1) ** j
        out = _xpoly_add(out, {2 * k - j: _pipoly_scale(mom, coeff)})
    return out


@dataclass(frozen=True)
class AsymptoticSeries:
    """Terms u_0..u_M of the inverse-coupling expansion, held exactly."""

    lam: int
    terms: tuple            # tuple of XPoly
    moments: dict           # g_n = int y^n g(y) dy, Fraction-valued

    @property
    def order(self) -> int:
        return len(self.terms) - 1

    def term_degree(self, n: int) -> int:
        t = self.terms[n]
        return max(t) if t else 0


def _rhs_xpoly(rhs: RhsSpec) -> XPoly:
    if rhs.kind is RhsKind.ONE:
        return {0: {0: Fraction(1)}}
    if rhs.kind is RhsKind.X:
        return {1: {0: Fraction(1)}}
    if rhs.kind is RhsKind.POLYNOMIAL:
        return {
            m: {0: Fraction(c)} for m, c in enumerate(rhs.coeffs) if c != 0.0
        }
    raise ValueError(
        "large-alpha expansion needs an alpha-independent polynomial "
        f"right-hand side, not {rhs.kind.value}"
    )


def large_alpha_series(rhs: RhsSpec, lam: int, order: int) -> AsymptoticSeries:
    """Compute u_0..u_order by the exact double recursion.

    lam is +1 for the minus-kernel equation and -1 for the plus-kernel one;
    flipping it changes the sign of the odd-index terms only.
    """
    if lam not in (1, -1):
        raise ValueError("lam must be +1 or -1")
    if order < 0:
        raise ValueError("order must be >= 0")
    g = _rhs_xpoly(rhs)
    chi = Fraction(lam)
    terms = [g]
    for n in range(1, order + 1):
        m, odd = divmod(n - 1, 2)
        acc: XPoly = {}
        for q in range(m + 1):
            src = terms[2 * q + odd]
            contrib = _convolve_power(m - q, src)
            acc = _xpoly_add(acc, _xpoly_scale(contrib, Fraction((-1) ** (m + q))))
        terms.append(_xpoly_scale(acc, chi, pi_shift=1))
    moments = {j: _moment(g, j).get(0, Fraction(0)) for j in range(2 * order + 1)}
    return AsymptoticSeries(lam=lam, terms=tuple(terms), moments=moments)


def _term_value(term: XPoly, x: float) -> float:
    total = 0.0
    for m, p in term.items():
        c = sum(float(v) * np.pi ** (-k) for k, v in p.items())
        total += c * x ** m
    return total


def eval_series(series: AsymptoticSeries, x, alpha: float):
    """Partial sum sum_{n<=M} u_n(x) / alpha^n.

    The expansion is asymptotic for large alpha (derived under alpha > 2);
    regime validity is the caller's concern.
    """
    x_arr = np.asarray(x, dtype=float)
    xs = np.atleast_1d(x_arr)
    out = np.zeros_like(xs)
    for n, term in enumerate(series.terms):
        vals = np.array([_term_value(term, xi) for xi in xs.ravel()]).reshape(xs.shape)
        out = out + vals / alpha ** n
    return float(out[0]) if x_arr.ndim == 0 else out.reshape(x_arr.shape)


class OuterKind(enum.Enum):
    """Closed-form small-alpha outer approximations (invalid at x = +-1)."""

    LIEB_ONE_LEADING = "lieb-one-leading"        # semicircle / alpha
    LIEB_ONE_TWO_TERM = "lieb-one-two-term"
    GAUDIN_ONE_TWO_TERM = "gaudin-one-two-term"
    GAUDIN_X_LEADING = "gaudin-x-leading"        # x/2
    LIEB_X_HUTSON = "lieb-x-hutson"
    LIEB_X_REICHERT = "lieb-x-reichert"


def _lieb_x_form(x, alpha, a_fn, b_fn):
    lead = (x / (2.0 * alpha)) * np.sqrt(1.0 - x * x)
    log16 = 1.0 + np.log(16.0 * np.pi / alpha)
    t2 = a_fn(x) / (4.0 * np.pi * np.sqrt(1.0 - x * x)) * log16
    t3 = -b_fn(x) / (4.0 * np.pi) * np.log((1.0 + x) / 2.0)
    t4 = b_fn(-x) / (4.0 * np.pi) * np.log((1.0 - x) / 2.0)
    return lead + t2 + t3 + t4


def small_alpha_outer(kind: OuterKind, x, alpha: float):
    """Evaluate the named outer approximation; requires |x| < 1 strictly.

    The two odd-equation variants share one template but disagree in their
    coefficient functions; both are exposed, neither is privileged.
    """
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    x_arr = np.asarray(x, dtype=float)
    if np.any(np.abs(x_arr) >= 1.0):
        raise ValueError("outer approximations require |x| < 1 strictly")
    x_arr = np.atleast_1d(x_arr)
    if kind is OuterKind.LIEB_ONE_LEADING:
        out = np.sqrt(1.0 - x_arr * x_arr) / alpha
    elif kind is OuterKind.LIEB_ONE_TWO_TERM:
        root = np.sqrt(1.0 - x_arr * x_arr)
        out = root / alpha + (
            x_arr * np.log((1.0 - x_arr) / (1.0 + x_arr))
            + np.log(16.0 * np.pi / alpha) + 1.0
        ) / (2.0 * np.pi * root)
    elif kind is OuterKind.GAUDIN_ONE_TWO_TERM:
        out = 0.5 + alpha / (2.0 * np.pi * (1.0 - x_arr * x_arr))
    elif kind is OuterKind.GAUDIN_X_LEADING:
        out = x_arr / 2.0
    elif kind is OuterKind.LIEB_X_HUTSON:
        out = _lieb_x_form(
            x_arr, alpha,
            lambda t: np.sqrt((1.0 + t) / 2.0) - np.sqrt((1.0 - t) / 2.0),
            lambda t: 1.0 / np.sqrt(2.0 * (1.0 + t)),
        )
    elif kind is OuterKind.LIEB_X_REICHERT:
        out = _lieb_x_form(
            x_arr, alpha,
            lambda t: t,
            lambda t: (2.0 * t * t - 1.0) / np.sqrt(1.0 - t * t),
        )
    else:  # pragma: no cover
        raise ValueError(f"unknown outer kind {kind}")
    return float(out[0]) if np.asarray(x).ndim == 0 else out.reshape(np.shape(x))
