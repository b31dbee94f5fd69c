"""Two-state master equation with time-dependent population rates.

    d(lambda_-)/dt = lambda_+ w_{+-} - lambda_- w_{-+}
    d(lambda_+)/dt = lambda_- w_{-+} - lambda_+ w_{+-}

with ``w_{+-} = w_b + xi(t)``, ``w_{-+} = w_a - xi(t)`` and

    xi(t) = K t^-c [omega sin(omega t + delta) + (c/t - w_a - w_b) cos(omega t + delta)].

Its exact solution is ``lambda_+ = L+ + K t^-c cos(omega t + delta) + d exp(-(w_a + w_b) t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DetailedBalanceError, StepSizeError, ValidationError

BALANCE_TOL = 1e-12
TRUNCATION_TOL = 1e-4


class Rates(NamedTuple):
    w_plus_minus: float
    w_minus_plus: float

    @property
    def negative(self) -> bool:
        return bool(np.any(np.asarray(self.w_plus_minus) < 0) or np.any(np.asarray(self.w_minus_plus) < 0))


class Populations(NamedTuple):
    lambda_plus: float
    lambda_minus: float

    @property
    def admissible(self) -> bool:
        lp = np.asarray(self.lambda_plus)
        lm = np.asarray(self.lambda_minus)
        return bool(np.all((lp >= 0) & (lp <= 1) & (lm >= 0) & (lm <= 1)))


def detailed_balance_residual(w_a: float, w_b: float, lambda_plus_inf: float) -> float:
    """``w_b / w_a - (1 - L+) / L+``; zero when the rates balance."""
    if not w_a > 0.0:
        raise ValidationError("w_a must be positive")
    if not 0.0 < lambda_plus_inf < 1.0:
        raise ValidationError("lambda_plus_inf must lie in (0, 1)")
    return w_b / w_a - (1.0 - lambda_plus_inf) / lambda_plus_inf


@dataclass(frozen=True)
class MasterModel:
    """Rate-model constants.  Construction enforces ``w_b L+ = w_a L-``."""

    w_a: float
    w_b: float
    K: float
    c: float
    omega: float
    delta: float
    d: float
    lambda_plus_inf: float

    def __post_init__(self) -> None:
        if self.w_a < 0 or self.w_b < 0:
            raise ValidationError("asymptotic rates must be non-negative")
        if self.c <= 0:
            raise ValidationError("power-law exponent c must be positive")
        if not 0.0 <= self.lambda_plus_inf <= 1.0:
            raise ValidationError("lambda_plus_inf must lie in [0, 1]")
        lp, lm = self.lambda_plus_inf, self.lambda_minus_inf
        gap = abs(self.w_b * lp - self.w_a * lm)
        if gap > BALANCE_TOL * max(1.0, self.w_a, self.w_b):
            raise DetailedBalanceError(
                f"detailed balance w_b/w_a = L-/L+ violated: w_a={self.w_a}, w_b={self.w_b}, "
                f"L+={lp} (w_b L+ - w_a L- = {self.w_b * lp - self.w_a * lm:.3g})"
            )

    @classmethod
    def balanced(cls, w_a: float, lambda_plus_inf: float, **kw) -> MasterModel:
        """Build with ``w_b`` derived from detailed balance."""
        if not 0.0 < lambda_plus_inf <= 1.0:
            raise ValidationError("lambda_plus_inf must lie in (0, 1]")
        w_b = w_a * (1.0 - lambda_plus_inf) / lambda_plus_inf
        return cls(w_a=w_a, w_b=w_b, lambda_plus_inf=lambda_plus_inf, **kw)

    @property
    def lambda_minus_inf(self) -> float:
        return 1.0 - self.lambda_plus_inf

    @property
    def total_rate(self) -> float:
        return self.w_a + self.w_b


def xi(model: MasterModel, t):
    phase = model.omega * np.asarray(t, dtype=float) + model.delta
    return (model.K / t**model.c) * (
        model.omega * np.sin(phase) + (model.c / t - model.total_rate) * np.cos(phase)
    )


def population_rates(model: MasterModel, t) -> Rates:
    if np.any(np.asarray(t) <= 0):
        raise ValidationError("rates are defined for t > 0 only")
    x = xi(model, t)
    return Rates(model.w_b + x, model.w_a - x)


def closed_form_solution(model: MasterModel, t) -> Populations:
    if np.any(np.asarray(t) <= 0):
        raise ValidationError("solution is defined for t > 0 only")
    t = np.asarray(t, dtype=float)
    lp = (
        model.lambda_plus_inf
        + model.K / t**model.c * np.cos(model.omega * t + model.delta)
        + model.d * np.exp(-model.total_rate * t)
    )
    if lp.ndim == 0:
        lp = float(lp)
    return Populations(lp, 1.0 - lp)


def rates_positive(model: MasterModel, t0: float, t1: float, n: int = 20001) -> bool:
    """Check ``w_{+-}, w_{-+} >= 0`` on a dense grid over ``[t0, t1]``."""
    return not population_rates(model, np.linspace(t0, t1, n)).negative


def _rhs(model: MasterModel, t: float, lp: float, total: float) -> float:
    phase = model.omega * t + model.delta
    x = (model.K / t**model.c) * (
        model.omega * math.sin(phase) + (model.c / t - model.total_rate) * math.cos(phase)
    )
    return (total - lp) * (model.w_a - x) - lp * (model.w_b + x)


def _rk4(model: MasterModel, t: float, lp: float, h: float, total: float) -> float:
    k1 = _rhs(model, t, lp, total)
    k2 = _rhs(model, t + 0.5 * h, lp + 0.5 * h * k1, total)
    k3 = _rhs(model, t + 0.5 * h, lp + 0.5 * h * k2, total)
    k4 = _rhs(model, t + h, lp + h * k3, total)
    return lp + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def integrate_master(
    model: MasterModel,
    t0: float,
    t1: float,
    dt: float = 0.01,
    check_every: int = 1,
) -> np.ndarray:
    """Classical RK4 on the master equation from the closed-form state at ``t0``.

    Only ``lambda_+`` is integrated; ``lambda_-`` is the conserved total minus
    ``lambda_+``, so the sum is preserved to round-off.  Every
    ``check_every`` steps the local error is estimated by step doubling and
    :class:`StepSizeError` is raised if it exceeds ``1e-4``.

    Returns an ``(n, 3)`` array of ``(t, lambda_plus, lambda_minus)``.
    """
    if not t0 > 0.0:
        raise ValidationError("t0 must be positive (rates are singular at t = 0)")
    if not t1 > t0:
        raise ValidationError("t1 must exceed t0")
    if not dt > 0.0:
        raise ValidationError("dt must be positive")
    n = round((t1 - t0) / dt)
    if n < 1 or not math.isclose(t0 + n * dt, t1, rel_tol=1e-9, abs_tol=1e-12):
        raise ValidationError("(t1 - t0) must be a whole number of steps dt")
    lp0, lm0 = closed_form_solution(model, t0)
    total = lp0 + lm0
    out = np.empty((n + 1, 3))
    out[0] = t0, lp0, lm0
    lp = lp0
    for i in range(n):
        t = t0 + i * dt
        new = _rk4(model, t, lp, dt, total)
        if check_every and i % check_every == 0:
            half = _rk4(model, t, lp, 0.5 * dt, total)
            half = _rk4(model, t + 0.5 * dt, half, 0.5 * dt, total)
            err = abs(new - half) / 15.0
            if not err <= TRUNCATION_TOL:
                raise StepSizeError(f"local truncation estimate {err:.3g} at t={t:.6g} exceeds {TRUNCATION_TOL}")
        lp = new
        out[i + 1] = t0 + (i + 1) * dt, lp, total - lp
    return out
