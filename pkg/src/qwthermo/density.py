"""Reduced coin density operator, its spectrum, and the global chirality map.

Tracing the walker's pure state over positions leaves the 2x2 operator

    rho_c = [[P_L, Q], [conj(Q), P_R]]

whose two eigenvalues fix the coin-position entanglement entropy.  The
global state itself stays pure, so its von Neumann entropy is identically
zero; only ``rho_c`` carries entropy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PositivityError, ValidationError
from .walker import ChiralitySummary, check_theta

NATS_PER_BIT = math.log(2.0)
DET_TOL = 1e-12


@dataclass(frozen=True)
class ReducedDensity:
    p_left: float
    p_right: float
    q: complex

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.p_left, self.q], [self.q.conjugate(), self.p_right]], dtype=np.complex128
        )

    @property
    def trace(self) -> float:
        return self.p_left + self.p_right

    @property
    def determinant(self) -> float:
        return self.p_left * self.p_right - abs(self.q) ** 2


@dataclass(frozen=True)
class EigenPair:
    """Eigenvalues of ``rho_c`` with the entanglement entropy in bits.

    ``mixing_angle`` and ``phase`` describe the eigenvector of the larger
    eigenvalue, ``(cos(m/2), exp(-i*phase) sin(m/2))`` in the (L, R) basis.
    """

    lambda_plus: float
    lambda_minus: float
    entropy_bits: float
    mixing_angle: float = 0.0
    phase: float = 0.0

    @property
    def entropy_nats(self) -> float:
        return self.entropy_bits * NATS_PER_BIT


def reduced_density(summary: ChiralitySummary) -> ReducedDensity:
    rho = ReducedDensity(summary.p_left, summary.p_right, complex(summary.q))
    det = rho.determinant
    if abs(rho.trace - 1.0) > 1e-10:
        raise PositivityError(f"trace {rho.trace!r} differs from 1")
    if det < -DET_TOL or det > 0.25 + DET_TOL:
        raise PositivityError(f"determinant {det!r} outside [0, 1/4]")
    return rho


def _clamped_det(p_left, p_right, q):
    det = np.asarray(p_left * p_right - np.abs(q) ** 2, dtype=float)
    if np.any(det < -DET_TOL) or np.any(det > 0.25 + DET_TOL):
        raise PositivityError("reduced density determinant outside [0, 1/4]")
    return np.clip(det, 0.0, 0.25)


def eigenvalues(p_left, p_right, q):
    """Vectorized ``lambda_pm = (1 +- sqrt(1 - 4 det)) / 2``."""
    det = _clamped_det(np.asarray(p_left), np.asarray(p_right), np.asarray(q))
    root = np.sqrt(1.0 - 4.0 * det)
    return 0.5 * (1.0 + root), 0.5 * (1.0 - root)


def entropy_bits(lambda_plus, lambda_minus):
    """Shannon entropy of the eigenvalue pair in bits, with 0 log 0 = 0."""
    lp = np.asarray(lambda_plus, dtype=float)
    lm = np.asarray(lambda_minus, dtype=float)
    out = -_xlog2x(lp) - _xlog2x(lm)
    return float(out) if out.ndim == 0 else out


def _xlog2x(x: np.ndarray) -> np.ndarray:
    safe = np.where(x > 0.0, x, 1.0)
    return np.where(x > 0.0, x * np.log2(safe), 0.0)


def eigensystem(rho: ReducedDensity) -> EigenPair:
    lp, lm = eigenvalues(rho.p_left, rho.p_right, rho.q)
    lp, lm = float(lp), float(lm)
    angle = math.atan2(2.0 * abs(rho.q), rho.p_left - rho.p_right)
    phase = math.atan2(rho.q.imag, rho.q.real) if rho.q != 0 else 0.0
    return EigenPair(lp, lm, entropy_bits(lp, lm), angle, phase)


def gcd_step(p_left: float, p_right: float, re_q: float, theta: float) -> tuple[float, float]:
    """One application of the global chirality map.

    The doubly stochastic matrix ``[[cos^2, sin^2], [sin^2, cos^2]]`` mixes
    the pair and ``re_q * sin(2 theta) * (+1, -1)`` adds the interference
    correction.  Results outside ``[0, 1]`` mean ``re_q`` is unphysical for
    the given distribution; they are returned, not raised.
    """
    theta = check_theta(theta)
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    kick = re_q * math.sin(2.0 * theta)
    return c2 * p_left + s2 * p_right + kick, s2 * p_left + c2 * p_right - kick


def gcd_stationary(re_q0: float, theta: float) -> tuple[float, float]:
    """Fixed point ``Pi_{L,R} = (1 +- 2 Re(Q0) / tan(theta)) / 2``."""
    theta = check_theta(theta)
    if theta == 0.0:
        raise ValidationError("stationary chirality distribution needs theta > 0")
    shift = 2.0 * re_q0 / math.tan(theta)
    pi_l, pi_r = 0.5 * (1.0 + shift), 0.5 * (1.0 - shift)
    if not (0.0 <= pi_l <= 1.0 and 0.0 <= pi_r <= 1.0):
        raise ValidationError(
            f"stationary distribution ({pi_l}, {pi_r}) leaves [0, 1]; "
            "requires chi = |Q0|^2 + (Re Q0 / tan theta)^2 < 1/4"
        )
    return pi_l, pi_r
