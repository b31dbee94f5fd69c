"""End-to-end transient pipeline: simulate, take the reduced-density
eigenvalue, subtract its equilibrium value and fit the envelope decay."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstraintError, InsufficientDataError, TooFewPeaksError
from .initial import BlochAngles, InitialSpec, build
from .isotherms import localized_rhs
from .sweep import parallel_map
from .thermo import (
    chi_from_q0,
    estimate_q0_numeric,
    q0_chi_distributed,
    q0_chi_localized_hadamard,
)
from .transient import (
    NEGLIGIBLE_K,
    EnvelopeSeries,
    PowerLawFit,
    extract_envelope,
    fit_power_law,
    merge_branches,
)
from .walker import HADAMARD, Trajectory, evolve

_HADAMARD_TOL = 1e-12


def analytic_lambda_plus(spec: InitialSpec, theta: float) -> float | None:
    """Equilibrium ``Lambda_+ = 1/2 + sqrt(chi)`` when a closed form for chi exists.

    Closed forms cover localized starts under the Hadamard coin and wide
    Gaussian starts; anything else returns ``None``.
    """
    if isinstance(spec, BlochAngles):
        if abs(theta - HADAMARD) > _HADAMARD_TOL:
            return None
        chi = q0_chi_localized_hadamard(spec.gamma, spec.phi).chi
    else:
        try:
            chi = q0_chi_distributed(spec.gamma, theta).chi
        except ConstraintError:
            return None
    return 0.5 + math.sqrt(chi)


def numeric_lambda_plus(traj: Trajectory, tail: float = 0.2) -> float:
    """``Lambda_+`` from the tail-averaged interference term of a run."""
    t_hi = int(traj.t[-1])
    t_lo = int(t_hi - tail * (t_hi - traj.t[0]))
    est = estimate_q0_numeric(traj, (t_lo, t_hi))
    return 0.5 + math.sqrt(chi_from_q0(est.value, traj.theta).chi)


@dataclass
class TransientResult:
    lambda_plus_inf: float
    lambda_source: str
    window: tuple[float, float]
    max_abs_deviation: float
    upper: EnvelopeSeries | None = None
    lower: EnvelopeSeries | None = None
    fit: PowerLawFit | None = None
    fit_upper: PowerLawFit | None = None
    fit_lower: PowerLawFit | None = None
    note: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def negligible_transient(self) -> bool:
        """True when the envelope amplitude ``K`` (or, lacking a fit, the
        largest deviation in the window) stays below 0.01."""
        if self.fit is not None:
            return self.fit.amplitude_K < NEGLIGIBLE_K
        return self.max_abs_deviation < NEGLIGIBLE_K

    def to_json(self) -> dict:
        out = self.fit.to_json() if self.fit else {
            "exponent_c": None,
            "amplitude_K": None,
            "residual_rms": None,
            "window": [float(x) for x in self.window],
            "n_peaks": 0,
        }
        out.update(
            lambda_plus_inf=self.lambda_plus_inf,
            lambda_source=self.lambda_source,
            max_abs_deviation=self.max_abs_deviation,
            negligible_transient=self.negligible_transient,
            branches={
                "upper": self.fit_upper.to_json() if self.fit_upper else None,
                "lower": self.fit_lower.to_json() if self.fit_lower else None,
            },
        )
        if self.note:
            out["note"] = self.note
        return out


def analyze_trajectory(
    traj: Trajectory,
    lambda_plus_inf: float,
    window: tuple[float, float] | None = None,
    w: int = 2,
    lambda_source: str = "given",
) -> TransientResult:
    """Envelope and power-law fits of ``lambda_+(t) - Lambda_+``.

    The pooled ``|value|`` envelope gives the headline fit; each branch is
    also fitted on its own.  Fewer than the required peaks leaves the fits
    as ``None`` with the reason in ``note``.
    """
    lp = traj.eigen_columns()["lambda_plus"]
    t = traj.t.astype(float)
    if window is None:
        window = (float(t[-1]) / 10.0, float(t[-1]))
    in_win = (t >= window[0]) & (t <= window[1])
    dev = float(np.max(np.abs(lp[in_win] - lambda_plus_inf))) if in_win.any() else math.nan
    res = TransientResult(lambda_plus_inf, lambda_source, window, dev)
    try:
        res.upper, res.lower = extract_envelope(t, lp, lambda_plus_inf, w=w)
        res.fit = fit_power_law(merge_branches(res.upper, res.lower), window)
        res.fit_upper = fit_power_law(res.upper, window)
        res.fit_lower = fit_power_law(res.lower, window)
    except (TooFewPeaksError, InsufficientDataError) as exc:
        res.note = str(exc)
    return res


def analyze_transient(
    spec: InitialSpec,
    theta: float,
    steps: int,
    window: tuple[float, float] | None = None,
    w: int = 2,
) -> tuple[Trajectory, TransientResult]:
    traj = evolve(build(spec), theta, steps)
    lam = analytic_lambda_plus(spec, theta)
    source = "analytic"
    if lam is None:
        lam, source = numeric_lambda_plus(traj), "numeric"
    return traj, analyze_trajectory(traj, lam, window, w, source)


def isotherm_phi(t_ratio: float, gamma: float) -> float | None:
    """``phi`` in ``[0, pi]`` putting a localized Hadamard start at ``T = t_ratio T0``."""
    s = math.sin(2.0 * gamma)
    if s == 0.0:
        return None
    target = localized_rhs(t_ratio) / s
    if abs(target) > 1.0:
        return None
    return math.acos(target)


def _exponent_point(args: tuple[float, float, int]) -> dict:
    gamma, phi, steps = args
    _, res = analyze_transient(BlochAngles(gamma, phi), HADAMARD, steps)
    return {
        "gamma": gamma,
        "phi": phi,
        "exponent_c": res.fit.exponent_c if res.fit else math.nan,
        "amplitude_K": res.fit.amplitude_K if res.fit else math.nan,
    }


def exponent_along_isotherm(
    t_ratio: float,
    gammas: np.ndarray,
    steps: int,
    jobs: int = 1,
) -> list[dict]:
    """Fitted exponent ``c`` versus ``gamma`` for starts on one isotherm.

    Grid points where the isotherm has no solution are skipped.
    """
    args = []
    for g in gammas:
        phi = isotherm_phi(t_ratio, float(g))
        if phi is not None:
            args.append((float(g), phi, steps))
    return parallel_map(_exponent_point, args, jobs)

