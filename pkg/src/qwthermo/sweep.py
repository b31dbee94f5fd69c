"""Parameter sweeps over initial conditions.

Every localized start is ``alpha |0, L> + beta |0, R>``, and the walk is
linear, so evolving the two basis states once determines the state of every
localized start at every step.  :class:`BasisRun` records the 2x2 Gram
matrices of the two basis trajectories; contracting them with a coin vector
reproduces that start's ``P_L(t)``, ``P_R(t)`` and ``Q(t)`` exactly (up to
round-off).  This turns a grid of thousands of direct runs into two.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import TypeVar

import numpy as np

from .errors import InsufficientDataError, ResourceLimitError, ValidationError
from .initial import BlochAngles, localized
from .thermo import estimate_q0_numeric
from .walker import (
    DEFAULT_MAX_SITES,
    HADAMARD,
    Trajectory,
    advance_window,
    check_theta,
    evolve,
)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> list[R]:
    """``map`` that fans out over ``jobs`` processes; results keep input order."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


@dataclass
class BasisRun:
    """Gram matrices of the evolved ``|0, L>`` and ``|0, R>`` states.

    ``aa[t, i, j] = sum_k a_i conj(a_j)``, ``bb`` likewise for the lower
    component and ``ab[t, i, j] = sum_k a_i conj(b_j)``, for rows ``t``.
    """

    t: np.ndarray
    aa: np.ndarray
    bb: np.ndarray
    ab: np.ndarray
    theta: float

    @classmethod
    def run(
        cls,
        theta: float,
        steps: int,
        record_from: int = 0,
        max_sites: int = DEFAULT_MAX_SITES,
    ) -> BasisRun:
        theta = check_theta(theta)
        if steps < 0 or not 0 <= record_from <= steps:
            raise ValidationError("need 0 <= record_from <= steps")
        size = 1 + 2 * steps
        if size > max_sites:
            raise ResourceLimitError(f"window of {size} sites exceeds max_sites={max_sites}")
        c, s = math.cos(theta), math.sin(theta)
        a = np.zeros((2, size), dtype=np.complex128)
        b = np.zeros((2, size), dtype=np.complex128)
        a[0, steps] = 1.0
        b[1, steps] = 1.0
        lo, hi = steps, steps + 1
        n = steps - record_from + 1
        aa = np.empty((n, 2, 2), dtype=np.complex128)
        bb = np.empty_like(aa)
        ab = np.empty_like(aa)
        for t in range(steps + 1):
            if t:
                lo, hi = advance_window(a, b, lo, hi, c, s)
            if t >= record_from:
                A, B = a[:, lo:hi], b[:, lo:hi]
                r = t - record_from
                aa[r] = A @ A.conj().T
                bb[r] = B @ B.conj().T
                ab[r] = A @ B.conj().T
        return cls(np.arange(record_from, steps + 1), aa, bb, ab, theta)

    def _contract(self, gram: np.ndarray, coins: np.ndarray) -> np.ndarray:
        # value[t, n] = sum_ij v_i conj(v_j) gram[t, i, j]
        return np.einsum("ni,tij,nj->tn", coins, gram, coins.conj())

    def columns(self, coins: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``P_L``, ``P_R`` and ``Q`` of shape ``(rows, n_coins)``."""
        coins = np.atleast_2d(np.asarray(coins, dtype=np.complex128))
        pl = self._contract(self.aa, coins).real
        pr = self._contract(self.bb, coins).real
        q = self._contract(self.ab, coins)
        return pl, pr, q

    def trajectory(self, angles: BlochAngles) -> Trajectory:
        pl, pr, q = self.columns(np.array([angles.coin]))
        return Trajectory(self.t.copy(), pl[:, 0], pr[:, 0], q[:, 0], pl[:, 0] + pr[:, 0], self.theta)


@dataclass
class Q0Grid:
    gammas: np.ndarray
    phis: np.ndarray
    q0: np.ndarray
    std: np.ndarray
    window: tuple[int, int]
    theta: float

    def rows(self):
        for i, g in enumerate(self.gammas):
            for j, p in enumerate(self.phis):
                yield float(g), float(p), complex(self.q0[i, j]), float(self.std[i, j])


def _coin_grid(gammas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    g, p = np.meshgrid(gammas, phis, indexing="ij")
    return np.column_stack([np.cos(g / 2).ravel(), (np.exp(1j * p) * np.sin(g / 2)).ravel()])


def _direct_q0(args: tuple[float, float, float, int, tuple[int, int]]) -> tuple[complex, float]:
    gamma, phi, theta, steps, window = args
    traj = evolve(localized(BlochAngles(gamma, phi)), theta, steps)
    est = estimate_q0_numeric(traj, window)
    return est.value, est.std


def localized_q0_grid(
    gammas: Sequence[float],
    phis: Sequence[float],
    theta: float = HADAMARD,
    steps: int = 5000,
    window: tuple[int, int] = (4000, 5000),
    method: str = "basis",
    jobs: int = 1,
) -> Q0Grid:
    """Tail-averaged ``Q(t)`` for every localized start on a ``(gamma, phi)`` grid.

    ``method="basis"`` contracts two basis runs; ``method="direct"`` evolves
    each grid point separately (fanned out over ``jobs`` processes).
    """
    gammas = np.asarray(gammas, dtype=float)
    phis = np.asarray(phis, dtype=float)
    lo, hi = window
    if hi > steps:
        raise InsufficientDataError(f"window end {hi} beyond steps={steps}")
    if hi - lo + 1 < 100:
        raise InsufficientDataError("tail window needs >= 100 samples")
    if method == "basis":
        run = BasisRun.run(theta, steps, record_from=lo)
        _, _, q = run.columns(_coin_grid(gammas, phis))
        q = q[: hi - lo + 1]
        q0 = q.mean(axis=0).reshape(gammas.size, phis.size)
        std = q.std(axis=0).reshape(gammas.size, phis.size)
    elif method == "direct":
        args = [(float(g), float(p), theta, hi, window) for g in gammas for p in phis]
        res = parallel_map(_direct_q0, args, jobs)
        q0 = np.array([r[0] for r in res]).reshape(gammas.size, phis.size)
        std = np.array([r[1] for r in res]).reshape(gammas.size, phis.size)
    else:
        raise ValidationError(f"unknown method {method!r}")
    return Q0Grid(gammas, phis, q0, std, (lo, hi), theta)
