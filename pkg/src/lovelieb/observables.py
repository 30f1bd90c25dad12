"""Physics functionals of solutions.

Capacitance and added mass of the two-disc problems, the coupling/energy
curves of the two quantum gas models, the classical analytic bounds as a
pass/fail report, endpoint sweeps in alpha, and the two-term power fit used
to summarise the endpoint curve.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .core import EquationSpec, RhsKind, RhsSpec, Sign, SolverError, kernel_cdf_integral, rhs_eval
from .nystrom import GridSolution, eval_solution, solve_nystrom
from .quadrature import RuleKind, make_rule
from .spectral import ExpansionSolution, eval_expansion

__all__ = [
    "NystromConfig",
    "EnergyModel",
    "EnergyCurve",
    "BoundCheck",
    "BoundReport",
    "PowerFit",
    "capacitance",
    "added_mass",
    "energy_curve",
    "interpolate_energy",
    "bound_report",
    "endpoint_sweep",
    "power_fit",
]


@dataclass(frozen=True)
class NystromConfig:
    """Reusable Nystrom solve configuration for sweeps."""

    kind: RuleKind = RuleKind.SIMPSON
    n: int = 513
    regularize: bool = True
    use_parity: bool = True

    def solve(self, spec: EquationSpec) -> GridSolution:
        rule = make_rule(self.kind, self.n)
        parity = self.use_parity and spec.rhs.parity() is not None
        return solve_nystrom(spec, rule, regularize=self.regularize,
                             use_parity=parity)


def capacitance(sol: GridSolution) -> float:
    """C(alpha) = int_{-1}^{1} u dx via the solution's own rule (g = 1 only)."""
    if sol.spec.rhs.kind is not RhsKind.ONE:
        raise ValueError("capacitance is defined for the g = 1 problem")
    return float(np.dot(sol.rule.weights, sol.values))


def added_mass(sol: GridSolution) -> float:
    """A(alpha) = 8 int_0^1 x u dx via the positive-node half sum (g = x only)."""
    if sol.spec.rhs.kind is not RhsKind.X:
        raise ValueError("added mass is defined for the g = x problem")
    x, w, u = sol.rule.nodes, sol.rule.weights, sol.values
    pos = x > 0.0
    return float(8.0 * np.sum(w[pos] * x[pos] * u[pos]))


class EnergyModel(enum.Enum):
    LIEB_LINIGER = "lieb-liniger"   # minus-kernel equation
    GAUDIN = "gaudin"               # plus-kernel equation

    @property
    def sign(self) -> Sign:
        return Sign.MINUS_KERNEL if self is EnergyModel.LIEB_LINIGER else Sign.PLUS_KERNEL


@dataclass(frozen=True)
class EnergyCurve:
    """(gamma, e) pairs obtained by eliminating alpha parametrically."""

    model: EnergyModel
    points: tuple           # ((gamma, e), ...) ordered by gamma
    alpha_grid: tuple
    failed: tuple = ()      # ((alpha, message), ...)

    @property
    def gammas(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])

    @property
    def energies(self) -> np.ndarray:
        return np.array([p[1] for p in self.points])


def energy_curve(model: EnergyModel, alpha_grid,
                 solver_config: NystromConfig | None = None) -> EnergyCurve:
    """Solve the g = 1 equation on the alpha grid and map to (gamma, e).

    Lieb-Liniger:  gamma = 2*pi*alpha / int(u),
                   e = gamma^3 / (2*pi*alpha^3) * int(x^2 u).
    Gaudin:        gamma = pi*alpha / (2*int(u)),
                   e = -gamma^2/4 + 2*gamma^3 / (pi*alpha^3) * int(x^2 u).

    Per-point solver failures are recorded in ``failed`` and skipped.
    """
    alpha_grid = [float(a) for a in alpha_grid]
    if any(a <= 0.0 for a in alpha_grid):
        raise ValueError("alpha grid must be strictly positive")
    cfg = solver_config or NystromConfig(kind=RuleKind.GAUSS_LEGENDRE, n=128,
                                         regularize=False)
    pts, failed = [], []
    for alpha in alpha_grid:
        spec = EquationSpec(model.sign, alpha, RhsSpec.one())
        try:
            sol = cfg.solve(spec)
        except SolverError as exc:
            failed.append((alpha, str(exc)))
            continue
        x, w, u = sol.rule.nodes, sol.rule.weights, sol.values
        i0 = float(np.dot(w, u))
        i2 = float(np.dot(w, x * x * u))
        if model is EnergyModel.LIEB_LINIGER:
            gamma = 2.0 * np.pi * alpha / i0
            e = gamma ** 3 / (2.0 * np.pi * alpha ** 3) * i2
        else:
            gamma = np.pi * alpha / (2.0 * i0)
            e = -gamma * gamma / 4.0 + 2.0 * gamma ** 3 / (np.pi * alpha ** 3) * i2
        pts.append((gamma, e))
    pts.sort(key=lambda p: p[0])
    return EnergyCurve(model=model, points=tuple(pts),
                       alpha_grid=tuple(alpha_grid), failed=tuple(failed))


def interpolate_energy(curve: EnergyCurve, gamma: float) -> float:
    """e at a requested gamma by monotone cubic interpolation of the curve."""
    g = curve.gammas
    if not (g[0] <= gamma <= g[-1]):
        raise ValueError(f"gamma {gamma} outside curve range [{g[0]}, {g[-1]}]")
    return float(PchipInterpolator(g, curve.energies)(gamma))


@dataclass(frozen=True)
class BoundCheck:
    name: str
    applicable: bool
    bound: float
    observed: float
    passed: bool

    @property
    def margin(self) -> float:
        return self.bound - self.observed


@dataclass(frozen=True)
class BoundReport:
    checks: tuple

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks if c.applicable)

    def __getitem__(self, name: str) -> BoundCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def bound_report(spec: EquationSpec, sol) -> BoundReport:
    """Evaluate the classical a-priori bounds against a computed solution.

    (lower)  u > 1 everywhere          [minus kernel, g = 1 only]
    (sup-kint)   sup|u| <= sup |g| / (1 - Kint)
    (sup-linear) sup|u| <= sup pi |g| (1 - |x| + alpha) / alpha
    (reich)      sup|u| <= pi / (2 arctan alpha)   [g = 1 only]

    Report-only: nothing is raised on failure.
    """
    xs = np.linspace(-1.0, 1.0, 401)
    if isinstance(sol, GridSolution):
        uvals = np.concatenate([sol.values, eval_solution(sol, xs)])
        u_nodes = sol.values
    elif isinstance(sol, ExpansionSolution):
        uvals = eval_expansion(sol, xs)
        u_nodes = uvals
    else:
        raise TypeError("sol must be a GridSolution or ExpansionSolution")
    sup_u = float(np.max(np.abs(uvals)))
    g_abs = np.abs(np.broadcast_to(
        np.asarray(rhs_eval(spec.rhs, xs, spec.alpha), dtype=float), xs.shape))
    kint = kernel_cdf_integral(xs, spec.alpha)

    is_one = spec.rhs.kind is RhsKind.ONE
    lower_applicable = is_one and spec.sign is Sign.MINUS_KERNEL
    min_u = float(np.min(u_nodes))
    checks = [
        BoundCheck("lower", lower_applicable, bound=np.inf, observed=min_u,
                   passed=(min_u > 1.0) if lower_applicable else True),
        BoundCheck("sup-kint", True,
                   bound=float(np.max(g_abs / (1.0 - kint))), observed=sup_u,
                   passed=sup_u <= float(np.max(g_abs / (1.0 - kint)))),
        BoundCheck("sup-linear", True,
                   bound=float(np.max(np.pi * g_abs * (1.0 - np.abs(xs) + spec.alpha)
                                      / spec.alpha)),
                   observed=sup_u,
                   passed=sup_u <= float(np.max(np.pi * g_abs
                                                * (1.0 - np.abs(xs) + spec.alpha)
                                                / spec.alpha))),
        BoundCheck("reich", is_one,
                   bound=float(np.pi / (2.0 * np.arctan(spec.alpha))),
                   observed=sup_u,
                   passed=(sup_u <= np.pi / (2.0 * np.arctan(spec.alpha)))
                   if is_one else True),
    ]
    return BoundReport(checks=tuple(checks))


def endpoint_sweep(sign: Sign, alpha_grid,
                   solver_config: NystromConfig | None = None):
    """u(1; alpha) for the g = 1 equation over an alpha grid."""
    alpha_grid = [float(a) for a in alpha_grid]
    if any(a <= 0.0 for a in alpha_grid):
        raise ValueError("alpha grid must be strictly positive")
    cfg = solver_config or NystromConfig(kind=RuleKind.SIMPSON, n=1025,
                                         regularize=True, use_parity=True)
    out = []
    for alpha in alpha_grid:
        spec = EquationSpec(sign, alpha, RhsSpec.one())
        sol = cfg.solve(spec)
        out.append((alpha, float(eval_solution(sol, 1.0))))
    return out


@dataclass(frozen=True)
class PowerFit:
    """Least-squares parameters of the model a * alpha^b + c."""

    a: float
    b: float
    c: float
    rmse: float

    def __call__(self, x):
        return self.a * np.asarray(x, dtype=float) ** self.b + self.c


def power_fit(points, max_iter: int = 200) -> PowerFit:
    """Fit a*x^b + c by Gauss-Newton with the analytic Jacobian.

    Initial guess: c from the largest-abscissa value, b from the log-log
    slope of (value - c), a from matching the smallest-abscissa point.
    Steps are halved when they fail to reduce the sum of squares; hitting
    the iteration cap raises SolverError carrying the best iterate.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 4:
        raise ValueError("need at least 4 (x, y) points")
    x, y = pts[:, 0], pts[:, 1]
    if np.any(x <= 0.0):
        raise ValueError("abscissae must be positive")

    if np.ptp(y) == 0.0:
        # flat data: the exponent is unidentifiable, a = 0 describes it exactly
        return PowerFit(a=0.0, b=0.0, c=float(y[0]), rmse=0.0)

    imax = int(np.argmax(x))
    c0 = float(y[imax])
    resid = y - c0
    mask = (np.abs(resid) > 1e-12) & (np.arange(len(y)) != imax)
    s = float(np.sign(np.sum(resid[mask]))) or 1.0
    usable = mask & (s * resid > 0.0)
    if np.count_nonzero(usable) >= 2:
        b0 = float(np.polyfit(np.log(x[usable]), np.log(s * resid[usable]), 1)[0])
    else:
        b0 = -0.5
    imin = int(np.argmin(x))
    a0 = float((y[imin] - c0) / x[imin] ** b0)
    theta = np.array([a0, b0, c0])

    def sse(th):
        return float(np.sum((th[0] * x ** th[1] + th[2] - y) ** 2))

    best = theta.copy()
    best_sse = sse(theta)
    for _ in range(max_iter):
        a, b, c = theta
        xb = x ** b
        r = a * xb + c - y
        jac = np.column_stack([xb, a * xb * np.log(x), np.ones_like(x)])
        step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        scale = 1.0
        for _ in range(25):
            cand = theta + scale * step
            if sse(cand) < best_sse:
                break
            scale *= 0.5
        else:
            # no descent direction left: converged to working precision
            theta = best
            break
        theta = cand
        best_sse = sse(theta)
        best = theta.copy()
        if np.max(np.abs(scale * step)) < 1e-13 * max(1.0, np.max(np.abs(theta))):
            break
    else:
        raise SolverError(
            f"power fit did not converge in {max_iter} iterations "
            f"(best (a, b, c) = {tuple(best)}, sse = {best_sse:.3e})"
        )
    rmse = float(np.sqrt(best_sse / len(x)))
    return PowerFit(a=float(best[0]), b=float(best[1]), c=float(best[2]), rmse=rmse)
