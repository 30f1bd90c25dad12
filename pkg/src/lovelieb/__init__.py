"""Love-Lieb integral equation toolkit.

Solvers (Nystrom, element, successive approximation, expansion methods),
large/small coupling approximations, physics observables, and exact
whole-line solutions used as internal oracles.
"""

from .core import (
    EquationSpec,
    KernelParams,
    NonConvergenceError,
    RhsKind,
    RhsSpec,
    Sign,
    SolverError,
    kernel_cdf_integral,
    kernel_eval,
    rhs_eval,
)
from .quadrature import QuadratureRule, RuleKind, make_rule

__version__ = "0.1.0"
