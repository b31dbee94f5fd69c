"""Envelope extraction and power-law fitting of the approach to equilibrium."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import InsufficientDataError, TooFewPeaksError, ValidationError

Branch = Literal["upper", "lower", "abs"]

MIN_SERIES = 16
MIN_PEAKS = 5
MIN_FIT_PEAKS = 20
NEGLIGIBLE_K = 0.01


@dataclass(frozen=True)
class EnvelopeSeries:
    t: np.ndarray
    value: np.ndarray
    branch: Branch

    def __post_init__(self) -> None:
        if self.t.size > 1 and np.any(np.diff(self.t) <= 0):
            raise ValidationError("envelope times must be strictly increasing")

    def __len__(self) -> int:
        return self.t.size

    def window(self, t_lo: float, t_hi: float) -> EnvelopeSeries:
        m = (self.t >= t_lo) & (self.t <= t_hi)
        return EnvelopeSeries(self.t[m], self.value[m], self.branch)


@dataclass(frozen=True)
class PowerLawFit:
    exponent_c: float
    amplitude_K: float
    residual_rms: float
    window: tuple[float, float]
    n_peaks: int

    @property
    def decaying(self) -> bool:
        return self.exponent_c > 0.0

    def to_json(self) -> dict:
        return {
            "exponent_c": self.exponent_c,
            "amplitude_K": self.amplitude_K,
            "residual_rms": self.residual_rms,
            "window": list(self.window),
            "n_peaks": self.n_peaks,
            "decaying": self.decaying,
        }


def _local_extrema(x: np.ndarray, w: int, sign: int) -> np.ndarray:
    """Indices where ``sign * x`` is >= its ``w`` neighbours on each side
    (strictly > on the left, so plateaus give one point) and ``sign * x > 0``."""
    y = sign * x
    n = y.size
    idx = np.arange(w, n - w)
    keep = y[idx] > 0.0
    for d in range(1, w + 1):
        keep &= y[idx] > y[idx - d]
        keep &= y[idx] >= y[idx + d]
    return idx[keep]


def extract_envelope(
    t: np.ndarray,
    lambda_plus: np.ndarray,
    lambda_plus_inf: float,
    w: int = 2,
) -> tuple[EnvelopeSeries, EnvelopeSeries]:
    """Upper and lower envelopes of ``x(t) = lambda_plus(t) - lambda_plus_inf``.

    Upper peaks are local maxima with ``x > 0``; lower peaks are local minima
    with ``x < 0``.  A point is an extremum when it dominates its ``w``
    nearest neighbours on each side.
    """
    t = np.asarray(t, dtype=float)
    x = np.asarray(lambda_plus, dtype=float) - lambda_plus_inf
    if t.size != x.size:
        raise ValidationError("t and lambda_plus differ in length")
    if x.size < MIN_SERIES:
        raise TooFewPeaksError(f"series of {x.size} points; need >= {MIN_SERIES}")
    if w < 1:
        raise ValidationError("w must be >= 1")
    up = _local_extrema(x, w, +1)
    down = _local_extrema(x, w, -1)
    for name, idx in (("upper", up), ("lower", down)):
        if idx.size < MIN_PEAKS:
            raise TooFewPeaksError(f"{name} branch has {idx.size} peaks; need >= {MIN_PEAKS}")
    return EnvelopeSeries(t[up], x[up], "upper"), EnvelopeSeries(t[down], x[down], "lower")


def merge_branches(upper: EnvelopeSeries, lower: EnvelopeSeries) -> EnvelopeSeries:
    """Pool both branches as ``|value|`` ordered by time (ties keep the upper point)."""
    t = np.concatenate([upper.t, lower.t])
    v = np.abs(np.concatenate([upper.value, lower.value]))
    order = np.argsort(t, kind="stable")
    t, v = t[order], v[order]
    first = np.concatenate([[True], np.diff(t) > 0])
    return EnvelopeSeries(t[first], v[first], "abs")


def fit_power_law(
    env: EnvelopeSeries,
    window: tuple[float, float] | None = None,
    min_peaks: int = MIN_FIT_PEAKS,
) -> PowerLawFit:
    """Least-squares line through ``(ln t, ln |value|)``.

    ``exponent_c`` is minus the slope and ``amplitude_K`` the exponential of
    the intercept, so the fit reads ``|value| ~ K t**(-c)``.  The default
    window is ``[t_max / 10, t_max]``.
    """
    if window is None:
        t_max = float(env.t[-1]) if len(env) else 0.0
        window = (t_max / 10.0, t_max)
    sub = env.window(*window)
    ok = (sub.t > 0) & (sub.value != 0)
    t, v = sub.t[ok], np.abs(sub.value[ok])
    if t.size < min_peaks:
        raise InsufficientDataError(f"{t.size} peaks in window {window}; need >= {min_peaks}")
    lt, lv = np.log(t), np.log(v)
    slope, intercept = np.polyfit(lt, lv, 1)
    resid = lv - (slope * lt + intercept)
    return PowerLawFit(
        exponent_c=float(-slope),
        amplitude_K=float(math.exp(intercept)),
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        window=(float(window[0]), float(window[1])),
        n_peaks=int(t.size),
    )
