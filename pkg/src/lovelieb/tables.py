"""Operations layer: every user-facing task as a function returning a table.

The CLI renders these tables as CSV and the HTTP service as JSON; both call
the same functions with the same argument conventions, so the two surfaces
cannot drift apart.  Tables are rectangular, finite-valued, and carry a
string metadata block (no timestamps: identical requests must produce
byte-identical output).
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import __version__
from .core import EquationSpec, RhsSpec, Sign, kernel_eval, rhs_eval
from .asymptotics import OuterKind, small_alpha_outer
from .infinite import (
    InfiniteRhs,
    u_minus_even_finite_part,
    u_minus_odd_lorentzian,
    u_plus_lorentzian,
    u_plus_tophat,
)
from .neumann import solve_neumann
from .nystrom import (
    GridSolution,
    eval_solution,
    residual_norm,
    solve_elements,
    solve_nystrom,
)
from .observables import EnergyModel, NystromConfig, endpoint_sweep, energy_curve, power_fit
from .quadrature import RuleKind, make_rule
from .spectral import (
    Basis,
    eval_expansion,
    solve_collocation,
    solve_galerkin,
    solve_maclaurin,
)

__all__ = [
    "OutputTable",
    "parse_rhs",
    "parse_grid",
    "solve_table",
    "sweep_table",
    "energy_table",
    "infinite_table",
    "fit_table",
    "fig_table",
]

_QUAD_NAMES = {
    "trapezoid": RuleKind.TRAPEZOID,
    "simpson": RuleKind.SIMPSON,
    "gauss": RuleKind.GAUSS_LEGENDRE,
    "cc": RuleKind.CLENSHAW_CURTIS,
}

_SIGN_NAMES = {"plus": Sign.PLUS_KERNEL, "minus": Sign.MINUS_KERNEL}


@dataclass
class OutputTable:
    columns: list
    rows: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("table rows must match the column count")
            if not all(np.isfinite(v) for v in row):
                raise ValueError("table values must be finite")

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key, val in self.metadata.items():
            buf.write(f"# {key} = {val}\n")
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(_fmt(v) for v in row) + "\n")
        return buf.getvalue()

    @staticmethod
    def parse_csv(text: str) -> "OutputTable":
        metadata, columns, rows = {}, None, []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, val = body.partition("=")
                    metadata[key.strip()] = val.strip()
                continue
            if columns is None:
                columns = [c.strip() for c in line.split(",")]
                continue
            rows.append([float(v) for v in line.split(",")])
        if columns is None:
            raise ValueError("no header row found")
        return OutputTable(columns=columns, rows=rows, metadata=metadata)


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def parse_rhs(text: str) -> RhsSpec:
    """Parse one/x/poly:<c0,c1,...>/hulthen/qwell:<beta>."""
    name, _, arg = text.partition(":")
    name = name.strip().lower()
    if name == "one":
        return RhsSpec.one()
    if name == "x":
        return RhsSpec.x()
    if name == "poly":
        coeffs = [float(c) for c in arg.split(",") if c.strip()]
        if not coeffs:
            raise ValueError("poly needs coefficients, e.g. poly:0,0,1")
        return RhsSpec.polynomial(coeffs)
    if name == "hulthen":
        return RhsSpec.hulthen()
    if name == "qwell":
        if not arg:
            raise ValueError("qwell needs a beta, e.g. qwell:0.5")
        return RhsSpec.quadratic_well(float(arg))
    raise ValueError(f"unknown right-hand side {text!r}")


def parse_grid(text, log: bool = False) -> np.ndarray:
    """Parse 'start:stop:count' (count points, inclusive) or 'a,b,c' lists."""
    if not isinstance(text, str):
        return np.asarray(list(text), dtype=float)
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("range syntax is start:stop:count")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError("range count must be >= 1")
        if log:
            if start <= 0 or stop <= 0:
                raise ValueError("log spacing needs positive endpoints")
            return np.geomspace(start, stop, count)
        return np.linspace(start, stop, count)
    vals = [float(v) for v in text.split(",") if v.strip()]
    if not vals:
        raise ValueError(f"could not parse grid {text!r}")
    return np.asarray(vals)


def _probe_residual(spec: EquationSpec, sol, m_samples: int = 9) -> float:
    if isinstance(sol, GridSolution):
        return residual_norm(spec, sol, m_samples)
    xs = -1.0 + 2.0 * (np.arange(m_samples) + 0.5) / m_samples
    worst = 0.0
    for x in xs:
        integral, _ = quad(
            lambda y: kernel_eval(x - y, spec.alpha) * eval_expansion(sol, y),
            -1.0, 1.0, points=[x], limit=200, epsabs=1e-10, epsrel=1e-10,
        )
        worst = max(
            worst,
            abs(eval_expansion(sol, x) - spec.lam * integral
                - rhs_eval(spec.rhs, x, spec.alpha)),
        )
    return worst


def _eval_any(sol, x):
    if isinstance(sol, GridSolution):
        return eval_solution(sol, x)
    return eval_expansion(sol, x)


def solve_table(sign: str, rhs: str, alpha: float, method: str = "nystrom",
                quad_name: str = "gauss", n: int = 129, probes: int = 201,
                regularize: bool = False, parity: bool = False,
                command: str = "") -> OutputTable:
    """Solve one equation instance and tabulate (x, u) at probe points."""
    spec = EquationSpec(_SIGN_NAMES[_key(sign, _SIGN_NAMES)], alpha, parse_rhs(rhs))
    if probes < 2:
        raise ValueError("need at least 2 probe points")
    kind = _QUAD_NAMES[_key(quad_name, _QUAD_NAMES)]
    if method == "nystrom":
        sol = solve_nystrom(spec, make_rule(kind, n), regularize=regularize,
                            use_parity=parity)
    elif method == "elements":
        sol = solve_elements(spec, n)
    elif method == "neumann":
        sol, _ = solve_neumann(spec, make_rule(kind, n), tol=1e-10, max_iter=2000)
    elif method in ("collocation", "galerkin"):
        par = spec.rhs.parity()
        if par is None:
            raise ValueError(f"{method} needs a right-hand side of definite parity")
        basis = Basis.CHEBYSHEV_EVEN if par == "even" else Basis.CHEBYSHEV_ODD
        solver = solve_collocation if method == "collocation" else solve_galerkin
        sol = solver(spec, basis, n)
    elif method == "maclaurin":
        sol = solve_maclaurin(spec, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    xs = np.linspace(-1.0, 1.0, probes)
    us = np.atleast_1d(_eval_any(sol, xs))
    meta = {
        "command": command or f"solve --sign {sign} --rhs {rhs} --alpha {alpha} "
                              f"--method {method}",
        "version": __version__,
        "sign": sign, "rhs": rhs, "alpha": _fmt(alpha), "method": method,
        "quad": quad_name, "n": str(n),
        "regularize": str(regularize).lower(), "parity": str(parity).lower(),
        "residual_norm": _fmt(_probe_residual(spec, sol)),
    }
    return OutputTable(columns=["x", "u"],
                       rows=[[float(x), float(u)] for x, u in zip(xs, us)],
                       metadata=meta)


def _key(name: str, table: dict) -> str:
    name = name.strip().lower()
    if name not in table:
        raise ValueError(f"expected one of {sorted(table)}, got {name!r}")
    return name


def sweep_table(sign: str, alphas, quad_name: str = "simpson", n: int = 1025,
                regularize: bool = True, parity: bool = True,
                log: bool = False, command: str = "") -> OutputTable:
    """Endpoint values u(1; alpha) over an alpha grid."""
    grid = parse_grid(alphas, log=log)
    cfg = NystromConfig(kind=_QUAD_NAMES[_key(quad_name, _QUAD_NAMES)], n=n,
                        regularize=regularize, use_parity=parity)
    pts = endpoint_sweep(_SIGN_NAMES[_key(sign, _SIGN_NAMES)], grid, cfg)
    meta = {
        "command": command or f"sweep --sign {sign}",
        "version": __version__,
        "sign": sign, "quad": quad_name, "n": str(n),
        "regularize": str(regularize).lower(), "log": str(log).lower(),
    }
    return OutputTable(columns=["alpha", "u_at_1"],
                       rows=[[a, u] for a, u in pts], metadata=meta)


def energy_table(model: str, alphas, quad_name: str = "gauss", n: int = 128,
                 command: str = "") -> OutputTable:
    """(gamma, e) energy curve for the named gas model."""
    models = {m.value: m for m in EnergyModel}
    grid = parse_grid(alphas)
    cfg = NystromConfig(kind=_QUAD_NAMES[_key(quad_name, _QUAD_NAMES)], n=n,
                        regularize=False, use_parity=True)
    curve = energy_curve(models[_key(model, models)], grid, cfg)
    meta = {
        "command": command or f"energy --model {model}",
        "version": __version__,
        "model": model, "quad": quad_name, "n": str(n),
        "failed_points": str(len(curve.failed)),
    }
    return OutputTable(columns=["gamma", "e"],
                       rows=[[g, e] for g, e in curve.points], metadata=meta)


def infinite_table(sign: str, rhs: str, alpha: float, xs,
                   command: str = "") -> OutputTable:
    """Whole-line solutions; adds the closed-form column when one exists."""
    plus = _key(sign, _SIGN_NAMES) == "plus"
    name, _, arg = rhs.partition(":")
    name = name.strip().lower()
    kinds = {k.value: k for k in InfiniteRhs}
    if name not in kinds:
        raise ValueError(f"expected rhs one of {sorted(kinds)}, got {name!r}")
    kind = kinds[name]
    if not arg:
        raise ValueError(f"rhs {name} needs a parameter, e.g. {name}:0.5")
    param = float(arg)
    if param <= 0.0:
        raise ValueError("the right-hand-side parameter must be positive")
    grid = parse_grid(xs)

    closed = None
    if plus:
        if kind is InfiniteRhs.TOP_HAT:
            fn = lambda x: u_plus_tophat(x, param, alpha)
        elif kind is InfiniteRhs.ODD_LORENTZIAN:
            fn = lambda x: u_plus_lorentzian(x, param, alpha, "odd")
            if abs(alpha - param) < 1e-14:
                closed = lambda x: (1.0 / (2.0 * x)
                                    - np.pi / (2.0 * alpha * np.sinh(np.pi * x / alpha))
                                    if x != 0.0 else 0.0)
        else:
            fn = lambda x: u_plus_lorentzian(x, param, alpha, "even")
            if abs(alpha - 2.0 * param) < 1e-14:
                closed = lambda x: np.pi / (2.0 * alpha * np.cosh(np.pi * x / alpha))
    else:
        if kind is InfiniteRhs.ODD_LORENTZIAN:
            fn = lambda x: u_minus_odd_lorentzian(x, param, alpha)
            if abs(alpha - param) < 1e-14:
                closed = lambda x: (np.pi / (2.0 * alpha * np.tanh(np.pi * x / alpha))
                                    - 1.0 / (2.0 * x) if x != 0.0 else 0.0)
        elif kind is InfiniteRhs.EVEN_LORENTZIAN:
            fn = lambda x: u_minus_even_finite_part(x, param, alpha)
        else:
            raise ValueError("the minus-sign top-hat case is not catalogued")

    cols = ["x", "u"] + (["u_closed_form"] if closed else [])
    rows = []
    for x in grid:
        row = [float(x), float(fn(float(x)))]
        if closed:
            row.append(float(closed(float(x))))
        rows.append(row)
    meta = {
        "command": command or f"infinite --sign {sign} --rhs {rhs}",
        "version": __version__,
        "sign": sign, "rhs": rhs, "alpha": _fmt(alpha),
    }
    return OutputTable(columns=cols, rows=rows, metadata=meta)


def fit_table(points, command: str = "") -> OutputTable:
    """Two-term power fit a*x^b + c of (abscissa, value) points."""
    fit = power_fit(points)
    meta = {
        "command": command or "fit",
        "version": __version__,
        "model": "a*alpha^b + c",
    }
    return OutputTable(columns=["a", "b", "c", "rmse"],
                       rows=[[fit.a, fit.b, fit.c, fit.rmse]], metadata=meta)


def fig_table(fig_id: int) -> OutputTable:
    """Plot data for the four survey figures.

    1: minus-kernel g=1 solution at alpha=0.1 (Simpson, 128 intervals) with
       its two-term small-alpha approximation.
    2: plus-kernel g=1 solution at alpha=0.1 (64 intervals) with its
       two-term approximation.
    3: endpoint sweep u(1; alpha) over 33 log-spaced alpha in [0.05, 0.8]
       with the fitted power curve (parameters in metadata).
    4: minus-kernel g=x solution at alpha=0.1 with both odd-equation outer
       approximations, which disagree near the endpoints.

    The outer approximations diverge at x = +-1, so figure tables are
    emitted on the interior nodes only.
    """
    if fig_id == 1:
        spec = EquationSpec(Sign.MINUS_KERNEL, 0.1, RhsSpec.one())
        sol = solve_nystrom(spec, make_rule(RuleKind.SIMPSON, 129),
                            regularize=True, use_parity=True)
        xs = sol.rule.nodes[1:-1]
        rows = [[float(x), float(u), float(a)] for x, u, a in zip(
            xs, eval_solution(sol, xs),
            small_alpha_outer(OuterKind.LIEB_ONE_TWO_TERM, xs, 0.1))]
        meta = {"command": "fig 1", "version": __version__,
                "equation": "minus g=1", "alpha": "0.1",
                "solver": "nystrom simpson n=129 regularized",
                "note": "interior nodes only; approximation diverges at x=+-1"}
        return OutputTable(columns=["x", "u_numeric", "u_approx_two_term"],
                           rows=rows, metadata=meta)
    if fig_id == 2:
        spec = EquationSpec(Sign.PLUS_KERNEL, 0.1, RhsSpec.one())
        sol = solve_nystrom(spec, make_rule(RuleKind.SIMPSON, 65),
                            regularize=True, use_parity=True)
        xs = sol.rule.nodes[1:-1]
        rows = [[float(x), float(u), float(a)] for x, u, a in zip(
            xs, eval_solution(sol, xs),
            small_alpha_outer(OuterKind.GAUDIN_ONE_TWO_TERM, xs, 0.1))]
        meta = {"command": "fig 2", "version": __version__,
                "equation": "plus g=1", "alpha": "0.1",
                "solver": "nystrom simpson n=65 regularized",
                "note": "interior nodes only; approximation diverges at x=+-1"}
        return OutputTable(columns=["x", "u_numeric", "u_approx_two_term"],
                           rows=rows, metadata=meta)
    if fig_id == 3:
        alphas = np.geomspace(0.05, 0.8, 33)
        pts = endpoint_sweep(Sign.MINUS_KERNEL, alphas, NystromConfig(n=1025))
        fit = power_fit(pts)
        rows = [[a, u, float(fit(a))] for a, u in pts]
        meta = {"command": "fig 3", "version": __version__,
                "equation": "minus g=1", "alpha_grid": "0.05..0.8 log 33",
                "solver": "nystrom simpson n=1025 regularized",
                "fit_a": _fmt(fit.a), "fit_b": _fmt(fit.b),
                "fit_c": _fmt(fit.c), "fit_rmse": _fmt(fit.rmse)}
        return OutputTable(columns=["alpha", "u_at_1", "u_fit"],
                           rows=rows, metadata=meta)
    if fig_id == 4:
        spec = EquationSpec(Sign.MINUS_KERNEL, 0.1, RhsSpec.x())
        sol = solve_nystrom(spec, make_rule(RuleKind.SIMPSON, 129),
                            regularize=True, use_parity=True)
        xs = sol.rule.nodes[1:-1]
        rows = [[float(x), float(u), float(h), float(r)] for x, u, h, r in zip(
            xs, eval_solution(sol, xs),
            small_alpha_outer(OuterKind.LIEB_X_HUTSON, xs, 0.1),
            small_alpha_outer(OuterKind.LIEB_X_REICHERT, xs, 0.1))]
        meta = {"command": "fig 4", "version": __version__,
                "equation": "minus g=x", "alpha": "0.1",
                "solver": "nystrom simpson n=129 regularized",
                "note": "interior nodes only; approximations diverge at x=+-1"}
        return OutputTable(columns=["x", "u_numeric", "u_hutson", "u_reichert"],
                           rows=rows, metadata=meta)
    raise ValueError("figure id must be 1, 2, 3 or 4")
