import numpy as np
import pytest

from memdiff import KernelParams, ScalarProblem


def problem(alpha, beta, mu, rho) -> ScalarProblem:
    return ScalarProblem(KernelParams(alpha, beta, mu), rho)


@pytest.fixture
def double_root_problem():
    # (rho + beta)^2 + 4 alpha rho = 4 - 4 = 0: repeated pole
    return problem(1.0, 3.0, 1.0, -1.0)


@pytest.fixture
def two_root_problem():
    # discriminant 1 - 3/4 = 1/4: poles at -1/4 and -3/4
    return problem(3.0 / 16.0, 0.0, 1.0, -1.0)


@pytest.fixture
def complex_pair_problem():
    # discriminant 1 - 8 = -7
    return problem(1.0, 1.0, 1.0, -2.0)


def sup_deviation(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
    return float(np.max(np.abs(a - b))) / scale
