"""Whole-line solutions: the analytic oracle layer.

Fourier-transform solutions of u +- int_R K(x-y) u(y) dy = g(x) for three
catalogued right-hand sides (top hat, odd and even Lorentzians), built on a
self-contained complex digamma.  The minus-sign equation has 1 in the kernel
of its operator (the symbol vanishes at k = 0), so its even solutions are
defined only up to an additive constant via a finite-part integral.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

__all__ = [
    "PoleError",
    "InfiniteRhs",
    "InfiniteProblem",
    "digamma",
    "beta_fn",
    "sine_step_sum",
    "u_plus_tophat",
    "u_plus_lorentzian",
    "resolvent_plus",
    "u_minus_odd_lorentzian",
    "u_minus_even_finite_part",
]


class PoleError(ValueError):
    """Function evaluated at one of its poles."""


class InfiniteRhs(enum.Enum):
    TOP_HAT = "tophat"            # 1 on |x| < L, 0 outside
    ODD_LORENTZIAN = "odd"        # x / (x^2 + kappa^2)
    EVEN_LORENTZIAN = "even"      # kappa / (x^2 + kappa^2)


@dataclass(frozen=True)
class InfiniteProblem:
    plus_sign: bool
    alpha: float
    rhs: InfiniteRhs
    param: float                  # L for the top hat, kappa otherwise

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise ValueError("alpha must be positive")
        if not self.param > 0.0:
            raise ValueError("the right-hand-side parameter must be positive")


# Bernoulli numbers B_2..B_16 for the asymptotic tail of psi.
_BERNOULLI = (
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0,
)


def digamma(z) -> complex:
    """psi(z) for complex z, accurate to >= 12 significant digits.

    Uses the recurrence psi(z) = psi(z + 1) - 1/z to push Re(z) up to 16,
    then the asymptotic series log z - 1/(2z) - sum B_2n / (2n z^2n) with
    Bernoulli numbers through B_16.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleError(f"digamma pole at z = {z.real:g}")
    acc = 0.0 + 0.0j
    while z.real < 16.0:
        acc -= 1.0 / z
        z += 1.0
    zinv2 = 1.0 / (z * z)
    tail = 0.0 + 0.0j
    power = zinv2
    for n, b in enumerate(_BERNOULLI, start=1):
        tail += b / (2.0 * n) * power
        power *= zinv2
    return acc + np.log(z) - 0.5 / z - tail


def beta_fn(z) -> complex:
    """beta(z) = (1/2) [psi((z+1)/2) - psi(z/2)]; beta(1) = log 2."""
    z = complex(z)
    return 0.5 * (digamma((z + 1.0) / 2.0) - digamma(z / 2.0))


def _euler_alternating(term, tol: float = 1e-12, start: int = 1) -> float:
    """sum_{n>=start} (-1)^n term(n) by partial-sum averaging (Euler
    transformation); terms must decrease slowly and smoothly in n."""
    n0, depth = 24, 40
    for _ in range(6):
        n = start
        s = 0.0
        sgn = -1.0 if start % 2 else 1.0
        sgn = (-1.0) ** start
        partials = []
        for _ in range(n0 + depth):
            s += sgn * term(n)
            partials.append(s)
            sgn = -sgn
            n += 1
        row = np.array(partials[n0 - 1:])
        prev = row[-1]
        while row.size > 1:
            row = 0.5 * (row[:-1] + row[1:])
            if abs(row[-1] - prev) < tol:
                return float(row[-1])
            prev = row[-1]
        n0 *= 2
        depth *= 2
    return float(prev)


def sine_step_sum(x: float, alpha: float) -> float:
    """S(X) = (1/pi) int_0^inf sin(kX) / (k (1 + e^(-alpha k))) dk.

    Expanding (1 + e^(-alpha k))^(-1) as an alternating geometric series
    turns each term into an arctangent, leaving

        S(X) = (1/pi) [ (pi/2) sgn(X) + sum_{n>=1} (-1)^n arctan(X/(n alpha)) ],

    summed with Euler acceleration (the raw terms decay only like 1/n).
    Behaves like 1/4 + alpha/(4 pi X) for large X and vanishes at X = 0.
    """
    if x == 0.0:
        return 0.0
    mag = _euler_alternating(lambda n: math.atan(abs(x) / (n * alpha)))
    val = 0.5 + mag / np.pi
    return val if x > 0 else -val


def u_plus_tophat(x: float, length: float, alpha: float) -> float:
    """Plus-sign whole-line solution for the top-hat right-hand side."""
    if length <= 0.0 or alpha <= 0.0:
        raise ValueError("length and alpha must be positive")
    return sine_step_sum(length + x, alpha) + sine_step_sum(length - x, alpha)


def u_plus_lorentzian(x: float, kappa: float, alpha: float, parity: str) -> float:
    """Plus-sign solution for the odd (x/(x^2+k^2)) or even (k/(x^2+k^2))
    Lorentzian right-hand side, via beta((kappa - i x)/alpha)."""
    if kappa <= 0.0 or alpha <= 0.0:
        raise ValueError("kappa and alpha must be positive")
    z = complex(kappa, -x) / alpha
    b = beta_fn(z)
    if parity == "odd":
        return b.imag / alpha
    if parity == "even":
        return b.real / alpha
    raise ValueError("parity must be 'odd' or 'even'")


def resolvent_plus(x: float, alpha: float) -> float:
    """Resolvent kernel M_+(x) = Re beta(1 + i x/alpha) / (pi alpha), where
    u = g - M_+ * g solves the plus-sign equation."""
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    return beta_fn(complex(1.0, x / alpha)).real / (np.pi * alpha)


def u_minus_odd_lorentzian(x: float, kappa: float, alpha: float) -> float:
    """Odd integrable minus-sign solution for g = x/(x^2+kappa^2):
    u = -(1/alpha) Im psi((kappa - i x)/alpha)."""
    if kappa <= 0.0 or alpha <= 0.0:
        raise ValueError("kappa and alpha must be positive")
    z = complex(kappa, -x) / alpha
    return -digamma(z).imag / alpha


def u_minus_even_finite_part(x: float, kappa: float, alpha: float,
                             eps0: float = 1e-3) -> float:
    """Even minus-sign particular solution for g = kappa/(x^2+kappa^2).

    The Fourier inversion integrand e^(-kappa k) cos(kx) / (1 - e^(-alpha k))
    has a 1/(alpha k) pole at k = 0 (the minus symbol vanishes there); the
    finite part subtracts it on [0, eps0] and adds log(eps0)/alpha back
    analytically.  The result is defined up to an additive constant, the
    homogeneous solution u = 1; only differences of values are meaningful.
    """
    if kappa <= 0.0 or alpha <= 0.0:
        raise ValueError("kappa and alpha must be positive")
    if not 0.0 < eps0 < 1.0:
        raise ValueError("eps0 must lie in (0, 1)")

    def regular_part(k):
        # (h(k) - 1) / (alpha k) with h = e^(-kappa k) cos(kx) * q(alpha k),
        # q(t) = t / (1 - e^(-t)); series below keeps it stable as k -> 0
        if k * alpha < 1e-5:
            c0 = 0.5 - kappa / alpha
            c1 = (kappa * kappa / 2.0 - x * x / 2.0 + alpha * alpha / 12.0
                  - kappa * alpha / 2.0) / alpha
            return c0 + c1 * k
        t = alpha * k
        q = t / -math.expm1(-t)
        h = math.exp(-kappa * k) * math.cos(k * x) * q
        return (h - 1.0) / (alpha * k)

    head, _ = quad(regular_part, 0.0, eps0, epsabs=1e-12, epsrel=1e-12)

    def tail_envelope(k):
        return math.exp(-kappa * k) / -math.expm1(-alpha * k)

    if abs(x) < 1e-12:
        tail, _ = quad(tail_envelope, eps0, np.inf, epsabs=1e-11, epsrel=1e-11,
                       limit=400)
    else:
        # QAWF handles the cos(kx) oscillation without roundoff complaints
        tail, _ = quad(tail_envelope, eps0, np.inf, weight="cos", wvar=x,
                       limit=400)
    return head + math.log(eps0) / alpha + tail
