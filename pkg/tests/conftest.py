import math

import numpy as np
import pytest

from qwthermo.initial import BlochAngles, localized
from qwthermo.walker import HADAMARD, evolve


def dense_walk_matrix(n_half: int, theta: float) -> np.ndarray:
    """Explicit one-step matrix on sites -n_half..n_half, state ordered
    (a_{-n}, ..., a_n, b_{-n}, ..., b_n).  Built entry by entry from the
    map so it shares no code with the array implementation."""
    n = 2 * n_half + 1
    c, s = math.cos(theta), math.sin(theta)
    u = np.zeros((2 * n, 2 * n))
    for i in range(n):
        if i + 1 < n:
            u[i, i + 1] = c
            u[i, n + i + 1] = s
        if i - 1 >= 0:
            u[n + i, i - 1] = s
            u[n + i, n + i - 1] = -c
    return u


@pytest.fixture(scope="session")
def hadamard_gamma0_5000():
    return evolve(localized(BlochAngles(0.0, 0.0)), HADAMARD, 5000)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture(scope="session")
def gaussian_pi3_1000():
    from qwthermo.initial import GaussianSpec, distributed_phase, gaussian

    theta, gamma = math.pi / 4, math.pi / 3
    spec = GaussianSpec(10, gamma, distributed_phase(theta, gamma))
    return evolve(gaussian(spec), theta, 1000)


def random_admissible_models(rng, n):
    """Rejection-sample balanced rate models whose populations stay in [0, 1]
    and whose rates stay non-negative on t in [1, 100]."""
    from qwthermo.master import MasterModel, closed_form_solution, rates_positive

    models = []
    grid = np.linspace(1, 100, 4001)
    while len(models) < n:
        m = MasterModel.balanced(
            w_a=rng.uniform(0.05, 1.0),
            lambda_plus_inf=rng.uniform(0.3, 0.9),
            K=rng.uniform(-0.1, 0.1),
            c=rng.uniform(0.2, 1.5),
            omega=rng.uniform(0.1, 3.0),
            delta=rng.uniform(0, 2 * math.pi),
            d=rng.uniform(-0.1, 0.1),
        )
        if closed_form_solution(m, grid).admissible and rates_positive(m, 1, 100):
            models.append(m)
    return models


ACCEPTANCE_RESULTS: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[key])
