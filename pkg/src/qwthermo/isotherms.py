"""Level curves of the entanglement temperature over initial conditions.

Localized starts (Hadamard coin) live on the ``(gamma, phi)`` plane where
``cos(phi) sin(2 gamma) = (tanh beta / tanh beta0)^2 - 1``.  Wide Gaussian
starts live on the ``(gamma, theta)`` plane where
``|cos gamma| = |cos theta| tanh(beta)``.  Both equations are monotone in
the solved-for angle on each branch, so every grid line is solved by a
bracketed root search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import ValidationError
from .thermo import characteristic_temperature

DEFAULT_SAMPLES = 512
_DEGENERATE = 1e-12
_XTOL = 1e-15


class UnreachableTemperatureError(ValidationError):
    """No initial condition produces the requested temperature."""


@dataclass
class Isotherm:
    """Curve branches for one temperature level.

    Each branch is an ``(n, 2)`` array of ``(x, y)`` points: ``(gamma, phi)``
    for localized maps, ``(gamma, theta)`` for distributed maps.
    """

    level: float
    rhs: float
    branches: list[np.ndarray] = field(default_factory=list)

    def rows(self):
        for branch_id, pts in enumerate(self.branches):
            for x, y in pts:
                yield self.level, branch_id, float(x), float(y)


def _solve_cos(target: float, lo: float = 0.0, hi: float = math.pi) -> float:
    """Root of ``cos(x) = target`` on ``[lo, hi]`` where cos is monotone."""
    target = min(1.0, max(-1.0, target))
    f = lambda x: math.cos(x) - target
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        # target sits at a bracket end within round-off
        return lo if abs(f_lo) < abs(f_hi) else hi
    return brentq(f, lo, hi, xtol=_XTOL, rtol=4 * np.finfo(float).eps)


def localized_rhs(t_ratio: float) -> float:
    """``(tanh beta / tanh beta0)^2 - 1`` for ``T = t_ratio * T0``."""
    if not t_ratio > 0.0:
        raise ValidationError(f"t_ratio={t_ratio!r} must be positive")
    beta0 = 1.0 / characteristic_temperature()
    beta = beta0 / t_ratio
    return (math.tanh(beta) / math.tanh(beta0)) ** 2 - 1.0


def isotherm_localized(t_ratio: float, samples: int = DEFAULT_SAMPLES) -> Isotherm:
    """Points ``(gamma, phi)`` with temperature ``t_ratio * T0``.

    For ``R != 0`` the solution set is two closed loops, one per lobe of
    ``sin(2 gamma)``.  Each lobe is sampled uniformly in ``gamma`` between its
    turning points and yields two branches, ``phi`` and ``2 pi - phi``.
    ``R = 0`` (``T = T0``) gives the straight lines ``gamma in {0, pi/2, pi}``
    and ``phi in {pi/2, 3 pi/2}``.
    """
    if samples < 2:
        raise ValidationError("samples must be >= 2")
    r = localized_rhs(t_ratio)
    curve = Isotherm(t_ratio, r)
    if abs(r) > 1.0 + _DEGENERATE:
        raise UnreachableTemperatureError(
            f"T/T0={t_ratio} needs cos(phi) sin(2 gamma) = {r:.6g}, outside [-1, 1]"
        )
    if abs(r) < _DEGENERATE:
        grid_phi = np.linspace(0.0, 2.0 * math.pi, samples)
        grid_gamma = np.linspace(0.0, math.pi, samples)
        for g in (0.0, math.pi / 2, math.pi):
            curve.branches.append(np.column_stack([np.full(samples, g), grid_phi]))
        for p in (math.pi / 2, 3 * math.pi / 2):
            curve.branches.append(np.column_stack([grid_gamma, np.full(samples, p)]))
        return curve

    r = max(-1.0, min(1.0, r))
    g_turn = 0.5 * math.asin(abs(r))
    lobes = [(g_turn, math.pi / 2 - g_turn), (math.pi / 2 + g_turn, math.pi - g_turn)]
    for g_lo, g_hi in lobes:
        gammas = np.linspace(g_lo, g_hi, samples) if g_hi > g_lo else np.array([g_lo])
        phis = np.array([_solve_cos(r / math.sin(2.0 * g)) for g in gammas])
        curve.branches.append(np.column_stack([gammas, phis]))
        curve.branches.append(np.column_stack([gammas, 2.0 * math.pi - phis]))
    return curve


def isotherm_distributed(temperature: float, samples: int = DEFAULT_SAMPLES) -> Isotherm:
    """Points ``(gamma, theta)`` with wide-Gaussian temperature ``T`` (units of eps).

    For every ``theta`` on a uniform grid over ``[0, pi/2]`` the two solutions
    ``gamma`` and ``pi - gamma`` of ``|cos gamma| = |cos theta| tanh(1/T)``
    form branches symmetric about ``gamma = pi/2``; at ``T = inf`` they merge
    into the single line ``gamma = pi/2``.
    """
    if not temperature > 0.0:
        raise ValidationError(f"temperature={temperature!r} must be positive")
    if samples < 2:
        raise ValidationError("samples must be >= 2")
    scale = math.tanh(1.0 / temperature)
    thetas = np.linspace(0.0, math.pi / 2, samples)
    curve = Isotherm(temperature, scale)
    if scale == 0.0:
        curve.branches.append(np.column_stack([np.full(samples, math.pi / 2), thetas]))
        return curve
    left = np.array([_solve_cos(abs(math.cos(t)) * scale, 0.0, math.pi / 2) for t in thetas])
    curve.branches.append(np.column_stack([left, thetas]))
    curve.branches.append(np.column_stack([math.pi - left, thetas]))
    return curve
