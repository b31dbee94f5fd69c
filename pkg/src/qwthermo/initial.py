"""Initial walker states: a single site with arbitrary chirality, or a
Gaussian packet sharing one chirality vector across all sites."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import ConstraintError, NarrowGaussianWarning, ValidationError
from .walker import SpinorField, check_theta

WIDE_SIGMA = 10.0
_EDGE = 1e-12


@dataclass(frozen=True)
class BlochAngles:
    gamma: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.gamma <= math.pi):
            raise ValidationError(f"gamma={self.gamma!r} outside [0, pi]")
        if not (0.0 <= self.phi <= 2.0 * math.pi):
            raise ValidationError(f"phi={self.phi!r} outside [0, 2 pi]")

    @property
    def coin(self) -> tuple[complex, complex]:
        """Chirality vector ``(cos(gamma/2), exp(i phi) sin(gamma/2))``."""
        return (
            complex(math.cos(self.gamma / 2.0)),
            complex(math.cos(self.phi), math.sin(self.phi)) * math.sin(self.gamma / 2.0),
        )


@dataclass(frozen=True)
class GaussianSpec:
    """Gaussian packet of width ``sigma0`` sites.

    ``cutoff_sites`` is the half-width of the stored window; ``None`` means
    ``ceil(6 * sigma0)``.  Values below that are rejected.
    """

    sigma0: float
    gamma: float
    phi: float = 0.0
    cutoff_sites: int | None = None

    def __post_init__(self) -> None:
        if not self.sigma0 > 0.0:
            raise ValidationError(f"sigma0={self.sigma0!r} must be positive")
        if not (0.0 <= self.gamma <= math.pi):
            raise ValidationError(f"gamma={self.gamma!r} outside [0, pi]")
        minimum = math.ceil(6.0 * self.sigma0)
        if self.cutoff_sites is not None and self.cutoff_sites < minimum:
            raise ValidationError(
                f"cutoff_sites={self.cutoff_sites} too small; need >= ceil(6 sigma0) = {minimum}"
            )

    @property
    def half_width(self) -> int:
        return max(math.ceil(6.0 * self.sigma0), self.cutoff_sites or 0)


InitialSpec = BlochAngles | GaussianSpec


def localized(angles: BlochAngles) -> SpinorField:
    a0, b0 = angles.coin
    return SpinorField(0, np.array([a0]), np.array([b0]))


def gaussian(spec: GaussianSpec) -> SpinorField:
    """Sampled Gaussian packet, renormalized over the truncated window.

    Warns with :class:`NarrowGaussianWarning` when ``sigma0 < 10``, where the
    asymptotic interference value for extended states is no longer reliable.
    """
    if spec.sigma0 < WIDE_SIGMA:
        warnings.warn(
            f"sigma0={spec.sigma0} below {WIDE_SIGMA}; wide-packet regime not satisfied",
            NarrowGaussianWarning,
            stacklevel=2,
        )
    m = spec.half_width
    k = np.arange(-m, m + 1, dtype=float)
    weights = np.exp(-(k**2) / (2.0 * spec.sigma0**2))
    amp = np.sqrt(weights / weights.sum())
    a0, b0 = BlochAngles(spec.gamma, spec.phi % (2.0 * math.pi)).coin
    return SpinorField(-m, amp * a0, amp * b0)


def distributed_phase(theta: float, gamma: float) -> float:
    """Phase ``phi`` in ``[0, pi]`` with ``cos(phi) = tan(theta) / tan(gamma)``.

    The mirror value ``2 pi - phi`` satisfies the same condition and gives the
    same real part of the initial interference term.
    """
    theta = check_theta(theta)
    sin_g, cos_g = math.sin(gamma), math.cos(gamma)
    sin_t, cos_t = math.sin(theta), math.cos(theta)
    if abs(sin_g) < _EDGE:
        raise ConstraintError(f"cos(phi) = tan(theta)/tan(gamma) is singular at gamma={gamma!r}")
    if abs(cos_t) < _EDGE:
        if abs(cos_g) < _EDGE:
            raise ConstraintError("cos(phi) = tan(theta)/tan(gamma) is singular at theta = gamma = pi/2")
        raise ConstraintError("cos(phi) = tan(theta)/tan(gamma) has no solution at theta = pi/2")
    ratio = (sin_t * cos_g) / (cos_t * sin_g)
    if abs(ratio) > 1.0 + _EDGE:
        raise ConstraintError(
            f"cos(phi) = tan(theta)/tan(gamma) = {ratio:.6g} has no solution (|ratio| > 1)"
        )
    return math.acos(max(-1.0, min(1.0, ratio)))


@dataclass(frozen=True)
class DistributedValidity:
    temperature_defined: bool
    phase_solvable: bool
    infinite_temperature: bool
    cos_gamma: float
    cos_theta: float


def distributed_validity(theta: float, gamma: float) -> DistributedValidity:
    """Report whether ``|cos gamma| < |cos theta|`` holds and whether the
    phase condition can be solved; never raises."""
    cg, ct = abs(math.cos(gamma)), abs(math.cos(check_theta(theta)))
    try:
        distributed_phase(theta, gamma)
        solvable = True
    except ConstraintError:
        solvable = False
    return DistributedValidity(cg < ct, solvable, cg < _EDGE and ct > _EDGE, cg, ct)


def spec_from_dict(data: dict[str, Any], theta: float | None = None) -> InitialSpec:
    """Parse the JSON initial-state record.

    A gaussian record without ``phi`` gets the phase from
    :func:`distributed_phase`, which needs ``theta``.
    """
    kind = data.get("kind")
    if kind == "localized":
        return BlochAngles(float(data["gamma"]), float(data.get("phi", 0.0)))
    if kind == "gaussian":
        gamma = float(data["gamma"])
        if data.get("phi") is None:
            if theta is None:
                raise ValidationError("gaussian spec without phi needs theta")
            phi = distributed_phase(theta, gamma)
        else:
            phi = float(data["phi"])
        cutoff = data.get("cutoff_sites")
        return GaussianSpec(float(data["sigma0"]), gamma, phi, None if cutoff is None else int(cutoff))
    raise ValidationError(f"unknown initial-state kind {kind!r}")


def spec_to_dict(spec: InitialSpec) -> dict[str, Any]:
    if isinstance(spec, BlochAngles):
        return {"kind": "localized", "gamma": spec.gamma, "phi": spec.phi}
    return {
        "kind": "gaussian",
        "sigma0": spec.sigma0,
        "gamma": spec.gamma,
        "phi": spec.phi,
        "cutoff_sites": spec.half_width,
    }


def build(spec: InitialSpec) -> SpinorField:
    return localized(spec) if isinstance(spec, BlochAngles) else gaussian(spec)
