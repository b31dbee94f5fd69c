import math

import numpy as np
import pytest

from qwthermo.errors import InsufficientDataError, ValidationError
from qwthermo.initial import BlochAngles, localized
from qwthermo.sweep import BasisRun, localized_q0_grid, parallel_map
from qwthermo.thermo import chi_from_q0, chi_localized_closed, q0_localized_hadamard
from qwthermo.walker import HADAMARD, evolve


def square(x):
    return x * x


def test_parallel_map_preserves_order():
    assert parallel_map(square, range(7), jobs=1) == [0, 1, 4, 9, 16, 25, 36]
    assert parallel_map(square, range(7), jobs=2) == [0, 1, 4, 9, 16, 25, 36]


@pytest.mark.parametrize("theta", [0.4, HADAMARD, 1.3])
def test_basis_superposition_matches_direct_runs(theta, rng):
    run = BasisRun.run(theta, 80)
    for _ in range(4):
        angles = BlochAngles(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
        direct = evolve(localized(angles), theta, 80)
        combo = run.trajectory(angles)
        np.testing.assert_allclose(combo.q, direct.q, atol=1e-14)
        np.testing.assert_allclose(combo.p_left, direct.p_left, atol=1e-14)
        np.testing.assert_allclose(combo.p_right, direct.p_right, atol=1e-14)


def test_grid_methods_agree():
    gammas = np.linspace(0, math.pi, 3)
    phis = np.linspace(0, 2 * math.pi, 3)
    basis = localized_q0_grid(gammas, phis, steps=300, window=(200, 300))
    direct = localized_q0_grid(gammas, phis, steps=300, window=(200, 300), method="direct", jobs=2)
    np.testing.assert_allclose(basis.q0, direct.q0, atol=1e-13)
    np.testing.assert_allclose(basis.std, direct.std, atol=1e-12)
    assert len(list(basis.rows())) == 9


def test_grid_tracks_closed_form():
    gammas = np.linspace(0, math.pi, 7)
    phis = np.linspace(0, 2 * math.pi, 7)
    grid = localized_q0_grid(gammas, phis, steps=3000, window=(2000, 3000))
    for g, p, q0, _ in grid.rows():
        closed = q0_localized_hadamard(g, p)
        assert q0 == pytest.approx(closed.conjugate(), abs=0.005)
        assert chi_from_q0(q0, HADAMARD).chi == pytest.approx(float(chi_localized_closed(g, p)), abs=0.002)


def test_grid_validation():
    with pytest.raises(InsufficientDataError):
        localized_q0_grid([0.0], [0.0], steps=100, window=(50, 200))
    with pytest.raises(InsufficientDataError):
        localized_q0_grid([0.0], [0.0], steps=100, window=(50, 100))
    with pytest.raises(ValidationError):
        localized_q0_grid([0.0], [0.0], steps=200, window=(50, 200), method="magic")
