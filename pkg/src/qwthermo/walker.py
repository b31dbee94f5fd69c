"""Unitary evolution of the coined quantum walk on the integer line.

The state is stored as two dense complex arrays ``a`` (left chirality) and
``b`` (right chirality) over a window of consecutive sites starting at
``offset``.  Each step grows the window by one site on each side, which is
exactly the light cone of the map, so nothing is ever truncated.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from typing import overload

import numpy as np

from .errors import ResourceLimitError, ValidationError

HADAMARD = math.pi / 4
DEFAULT_MAX_SITES = 20_000_001


def check_theta(theta: float) -> float:
    """Validate a coin angle; ``theta`` must lie in ``[0, pi/2]``."""
    theta = float(theta)
    if not (0.0 <= theta <= math.pi / 2 + 1e-15) or math.isnan(theta):
        raise ValidationError(f"coin angle theta={theta!r} outside [0, pi/2]")
    return min(theta, math.pi / 2)


@dataclass(frozen=True)
class SpinorField:
    """Walker amplitudes ``(a_k, b_k)`` for ``k = offset .. offset + len - 1``."""

    offset: int
    a: np.ndarray
    b: np.ndarray
    time: int = 0

    def __post_init__(self) -> None:
        a = np.ascontiguousarray(self.a, dtype=np.complex128)
        b = np.ascontiguousarray(self.b, dtype=np.complex128)
        if a.ndim != 1 or a.shape != b.shape:
            raise ValidationError("a and b must be 1-d arrays of equal length")
        if self.time < 0:
            raise ValidationError("time must be non-negative")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_sites(cls, sites: dict[int, tuple[complex, complex]], time: int = 0) -> SpinorField:
        lo, hi = min(sites), max(sites)
        a = np.zeros(hi - lo + 1, dtype=np.complex128)
        b = np.zeros_like(a)
        for k, (ak, bk) in sites.items():
            a[k - lo] = ak
            b[k - lo] = bk
        return cls(lo, a, b, time)

    def __len__(self) -> int:
        return self.a.size

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + self.a.size)

    @property
    def norm(self) -> float:
        return float(np.vdot(self.a, self.a).real + np.vdot(self.b, self.b).real)

    def amplitude(self, k: int) -> tuple[complex, complex]:
        i = k - self.offset
        if 0 <= i < self.a.size:
            return complex(self.a[i]), complex(self.b[i])
        return 0j, 0j


@dataclass(frozen=True)
class ChiralitySummary:
    """Global chirality probabilities and interference term at one step."""

    p_left: float
    p_right: float
    q: complex
    time: int
    norm: float = 1.0


def step(field: SpinorField, theta: float) -> SpinorField:
    """Advance the walk by one time step.

    ``a_k <- a_{k+1} cos(theta) + b_{k+1} sin(theta)`` and
    ``b_k <- a_{k-1} sin(theta) - b_{k-1} cos(theta)``.  The returned field
    covers one extra site on each side.
    """
    theta = check_theta(theta)
    c, s = math.cos(theta), math.sin(theta)
    n = field.a.size
    a = np.zeros(n + 2, dtype=np.complex128)
    b = np.zeros(n + 2, dtype=np.complex128)
    # new window starts at offset - 1: old site j sits at new index j + 1
    a[: n] = c * field.a + s * field.b
    b[2:] = s * field.a - c * field.b
    return SpinorField(field.offset - 1, a, b, field.time + 1)


def observables(field: SpinorField) -> ChiralitySummary:
    p_left = float(np.vdot(field.a, field.a).real)
    p_right = float(np.vdot(field.b, field.b).real)
    # vdot conjugates its first argument: sum_k a_k conj(b_k)
    q = complex(np.vdot(field.b, field.a))
    return ChiralitySummary(p_left, p_right, q, field.time, p_left + p_right)


def position_distribution(field: SpinorField) -> dict[int, float]:
    """Site occupation probabilities ``|a_k|^2 + |b_k|^2`` (zero sites dropped)."""
    prob = np.abs(field.a) ** 2 + np.abs(field.b) ** 2
    return {int(k): float(p) for k, p in zip(field.sites, prob) if p != 0.0}


def inner_product(x: SpinorField, y: SpinorField) -> complex:
    """``<x|y>`` with sites missing from either window treated as zero."""
    lo = max(x.offset, y.offset)
    hi = min(x.offset + len(x), y.offset + len(y))
    if hi <= lo:
        return 0j
    xs = slice(lo - x.offset, hi - x.offset)
    ys = slice(lo - y.offset, hi - y.offset)
    return complex(np.vdot(x.a[xs], y.a[ys]) + np.vdot(x.b[xs], y.b[ys]))


@dataclass
class Trajectory(Sequence):
    """Recorded observables of one run, stored column-wise.

    Indexing yields :class:`ChiralitySummary` rows; the raw columns are
    available as arrays for vectorized post-processing.
    """

    t: np.ndarray
    p_left: np.ndarray
    p_right: np.ndarray
    q: np.ndarray
    norm: np.ndarray
    theta: float
    final_state: SpinorField | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return self.t.size

    @overload
    def __getitem__(self, i: int) -> ChiralitySummary: ...
    @overload
    def __getitem__(self, i: slice) -> list[ChiralitySummary]: ...

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        return ChiralitySummary(
            float(self.p_left[i]),
            float(self.p_right[i]),
            complex(self.q[i]),
            int(self.t[i]),
            float(self.norm[i]),
        )

    def __iter__(self) -> Iterator[ChiralitySummary]:
        for i in range(len(self)):
            yield self[i]

    def eigen_columns(self) -> dict[str, np.ndarray]:
        """Reduced-density eigenvalues and entropy (bits) for every row."""
        from .density import eigenvalues, entropy_bits

        lp, lm = eigenvalues(self.p_left, self.p_right, self.q)
        return {"lambda_plus": lp, "lambda_minus": lm, "entropy_bits": entropy_bits(lp, lm)}

    @classmethod
    def from_summaries(cls, rows: Sequence[ChiralitySummary], theta: float = HADAMARD) -> Trajectory:
        return cls(
            t=np.array([r.time for r in rows], dtype=np.int64),
            p_left=np.array([r.p_left for r in rows]),
            p_right=np.array([r.p_right for r in rows]),
            q=np.array([r.q for r in rows], dtype=np.complex128),
            norm=np.array([r.norm for r in rows]),
            theta=theta,
        )


def advance_window(a: np.ndarray, b: np.ndarray, lo: int, hi: int, c: float, s: float) -> tuple[int, int]:
    """In-place step on preallocated buffers whose live sites are ``[lo, hi)``.

    The last axis indexes sites, so stacked states evolve together.  Returns
    the new live range ``(lo - 1, hi + 1)``; callers must leave one free slot
    on each side.
    """
    A, B = a[..., lo:hi], b[..., lo:hi]
    new_a = c * A + s * B
    new_b = s * A - c * B
    a[..., lo - 1 : hi - 1] = new_a
    a[..., hi - 1 : hi + 1] = 0.0
    b[..., lo + 1 : hi + 1] = new_b
    b[..., lo - 1 : lo + 1] = 0.0
    return lo - 1, hi + 1


def evolve(
    init: SpinorField,
    theta: float,
    steps: int,
    record_every: int = 1,
    max_sites: int = DEFAULT_MAX_SITES,
) -> Trajectory:
    """Run ``steps`` iterations of the map and record observables.

    Rows are taken at ``t = init.time + j * record_every``; the row count is
    ``steps // record_every + 1``.  The state is never renormalized, so the
    ``norm`` column exposes any accumulated drift.

    Raises
    ------
    ResourceLimitError
        If the final window would hold more than ``max_sites`` sites.
    """
    theta = check_theta(theta)
    if steps < 0:
        raise ValidationError("steps must be >= 0")
    if record_every < 1:
        raise ValidationError("record_every must be >= 1")
    n0 = len(init)
    size = n0 + 2 * steps
    if size > max_sites:
        raise ResourceLimitError(f"window of {size} sites exceeds max_sites={max_sites}")

    c, s = math.cos(theta), math.sin(theta)
    a = np.zeros(size, dtype=np.complex128)
    b = np.zeros(size, dtype=np.complex128)
    a[steps : steps + n0] = init.a
    b[steps : steps + n0] = init.b
    lo, hi = steps, steps + n0

    n_rows = steps // record_every + 1
    t_col = init.time + record_every * np.arange(n_rows, dtype=np.int64)
    pl = np.empty(n_rows)
    pr = np.empty(n_rows)
    q = np.empty(n_rows, dtype=np.complex128)

    def record(row: int) -> None:
        aa, bb = a[lo:hi], b[lo:hi]
        pl[row] = np.vdot(aa, aa).real
        pr[row] = np.vdot(bb, bb).real
        q[row] = np.vdot(bb, aa)

    record(0)
    for t in range(1, steps + 1):
        lo, hi = advance_window(a, b, lo, hi, c, s)
        if t % record_every == 0:
            record(t // record_every)

    final = SpinorField(init.offset - steps, a[lo:hi].copy(), b[lo:hi].copy(), init.time + steps)
    return Trajectory(t_col, pl, pr, q, pl + pr, theta, final)
