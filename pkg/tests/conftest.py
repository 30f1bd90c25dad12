import numpy as np
import pytest

from lovelieb.core import EquationSpec, RhsSpec, Sign
from lovelieb.quadrature import RuleKind, make_rule
from lovelieb.nystrom import solve_nystrom


@pytest.fixture(scope="session")
def probes():
    return np.linspace(-1.0, 1.0, 11)


@pytest.fixture(scope="session")
def lieb_one():
    """Minus-kernel g=1 spec factory."""
    return lambda alpha: EquationSpec(Sign.MINUS_KERNEL, alpha, RhsSpec.one())


@pytest.fixture(scope="session")
def gaudin_one():
    return lambda alpha: EquationSpec(Sign.PLUS_KERNEL, alpha, RhsSpec.one())


def gauss_solve(spec, n=64, **kw):
    return solve_nystrom(spec, make_rule(RuleKind.GAUSS_LEGENDRE, n), **kw)
