"""Entanglement thermodynamics of the coin as a two-level canonical system.

The asymptotic eigenvalues of the reduced coin operator are
``Lambda_pm = 1/2 +- sqrt(chi)`` and are read as Boltzmann weights
``exp(+-beta*eps) / Z`` of a two-level system with energies ``-+eps``.
Everything here is a closed-form function of the scalar ``chi``; the
energy unit ``eps`` is fixed to 1.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import asdict, dataclass

import numpy as np

from .density import NATS_PER_BIT, entropy_bits
from .errors import ConstraintError, InsufficientDataError, ValidationError
from .walker import HADAMARD, ChiralitySummary, Trajectory, check_theta

EPSILON = 1.0
CHI_MAX = 0.25
#: chi of the Hadamard walk from a localized start with gamma = 0.
CHI0 = 0.75 - 1.0 / math.sqrt(2.0)
#: 0.5 * (1 - 1/sqrt(2)), prefactor of the localized Hadamard Q0.
_KAPPA = 0.5 * (1.0 - 1.0 / math.sqrt(2.0))


@dataclass(frozen=True)
class ChiParameter:
    """Validated ``chi`` with its provenance.

    ``complement`` optionally carries ``1/4 - chi`` (the asymptotic
    determinant ``Lambda+ Lambda-``) computed without cancellation.  Near
    ``chi = 1/4`` the temperature depends on that gap alone, and a rounded
    ``chi`` cannot resolve it.
    """

    chi: float
    q0: complex | None = None
    theta: float | None = None
    complement: float | None = None

    def __post_init__(self) -> None:
        if not (0.0 <= self.chi < CHI_MAX) or math.isnan(self.chi):
            raise ConstraintError(f"chi={self.chi!r} violates 0 <= chi < 1/4")
        if self.complement is not None and (
            not self.complement > 0.0 or abs(self.complement - (CHI_MAX - self.chi)) > 1e-15
        ):
            raise ConstraintError(f"complement {self.complement!r} inconsistent with chi={self.chi!r}")

    @property
    def gap(self) -> float:
        """``1/4 - chi``."""
        return CHI_MAX - self.chi if self.complement is None else self.complement


@dataclass(frozen=True)
class ThermoRecord:
    chi: float
    beta: float
    temperature: float
    partition: float
    helmholtz: float
    internal_energy: float
    entropy_bits: float
    lambda_plus: float
    lambda_minus: float
    epsilon: float = EPSILON

    @property
    def entropy_nats(self) -> float:
        return self.entropy_bits * NATS_PER_BIT

    def to_json(self) -> dict:
        """Plain dict; infinities become the strings ``"inf"`` / ``"-inf"``."""
        out = asdict(self)
        for key, value in out.items():
            if isinstance(value, float) and math.isinf(value):
                out[key] = "inf" if value > 0 else "-inf"
        out["t_ratio"] = _json_float(self.temperature / characteristic_temperature())
        return out


def _json_float(x: float):
    return ("inf" if x > 0 else "-inf") if math.isinf(x) else x


def chi_from_q0(q0: complex, theta: float) -> ChiParameter:
    """``chi = |Q0|^2 + (Re Q0 / tan theta)^2``."""
    theta = check_theta(theta)
    if theta == 0.0:
        raise ValidationError("chi needs theta > 0 (tan theta = 0)")
    q0 = complex(q0)
    chi = abs(q0) ** 2 + (q0.real / math.tan(theta)) ** 2
    return ChiParameter(chi, q0, theta)


def thermo_functions(chi: ChiParameter | float) -> ThermoRecord:
    """All equilibrium functions for a given ``chi``.

    ``chi = 0`` is the infinite-temperature point: ``beta = 0``, ``T = inf``,
    ``Z = 2``, ``A = -inf`` and one bit of entropy.
    """
    if not isinstance(chi, ChiParameter):
        chi = ChiParameter(float(chi))
    x = chi.chi
    root = math.sqrt(x)
    # (1 + 2r)/(1 - 2r) = (1 + 2r)^2 / (4 gap) keeps beta accurate as chi -> 1/4
    lp = 0.5 + root
    lm = chi.gap / lp
    beta = (math.log1p(2.0 * root) - 0.5 * math.log(4.0 * chi.gap)) / EPSILON if root else 0.0
    z = 2.0 * math.cosh(beta * EPSILON)
    if beta == 0.0:
        temperature, helmholtz = math.inf, -math.inf
    else:
        temperature = 1.0 / beta
        helmholtz = -math.log(z) / beta
    u = -2.0 * EPSILON * root
    return ThermoRecord(x, beta, temperature, z, helmholtz, u, entropy_bits(lp, lm), lp, lm)


def characteristic_temperature() -> float:
    """``T0 = 2 / ln((1 + 2 sqrt(chi0)) / (1 - 2 sqrt(chi0)))`` = 2 / ln(1 + sqrt 2)."""
    r = 2.0 * math.sqrt(CHI0)
    return 2.0 * EPSILON / math.log((1.0 + r) / (1.0 - r))


def q0_localized_hadamard(gamma: float, phi: float) -> complex:
    """Closed-form long-time ``Q`` for a localized start, Hadamard coin.

    The simulator (``Q = sum a b*``, coin ``e^{i phi}``) converges to the
    complex conjugate of this value.  ``chi`` only sees ``|Q0|`` and
    ``Re Q0`` so the thermodynamics is unaffected.
    """
    return _KAPPA * complex(
        math.cos(gamma) + math.sin(gamma) * math.cos(phi),
        math.sqrt(2.0) * math.sin(gamma) * math.sin(phi),
    )


def chi_localized_closed(gamma, phi):
    """``chi0 * (1 + cos(phi) sin(2 gamma))``; accepts arrays."""
    return CHI0 * (1.0 + np.cos(phi) * np.sin(2.0 * np.asarray(gamma)))


def q0_chi_localized_hadamard(gamma: float, phi: float) -> ChiParameter:
    """``chi`` for a localized start under the Hadamard coin.

    Computed from the asymptotic ``Q0`` and checked against the compact
    form ``chi0 (1 + cos phi sin 2 gamma)``.
    """
    q0 = q0_localized_hadamard(gamma, phi)
    chi = chi_from_q0(q0, HADAMARD)
    compact = float(chi_localized_closed(gamma, phi))
    if abs(chi.chi - compact) > 1e-12:
        raise ArithmeticError(f"chi mismatch: {chi.chi} vs {compact}")
    return chi


def _check_distributed(gamma: float, theta: float) -> tuple[float, float]:
    theta = check_theta(theta)
    cg, ct = abs(math.cos(gamma)), abs(math.cos(theta))
    if not cg < ct:
        raise ConstraintError(
            f"distributed start requires |cos gamma| < |cos theta| (got {cg:.6g} >= {ct:.6g})"
        )
    return cg, ct


def q0_chi_distributed(gamma: float, theta: float) -> ChiParameter:
    """Wide Gaussian start: ``Q0 = cos(gamma) tan(theta) / 2``, ``chi = (cos gamma / 2 cos theta)^2``."""
    cg, ct = _check_distributed(gamma, theta)
    q0 = 0.5 * math.cos(gamma) * math.tan(theta)
    compact = (math.cos(gamma) / (2.0 * math.cos(theta))) ** 2
    via_q0 = chi_from_q0(q0, theta)
    if abs(via_q0.chi - compact) > 1e-14:
        raise ArithmeticError(f"chi mismatch: {via_q0.chi} vs {compact}")
    gap = (ct - cg) * (ct + cg) / (4.0 * ct * ct)
    return ChiParameter(compact, complex(q0), theta, complement=gap)


def beta_distributed(gamma: float, theta: float) -> float:
    """``beta*eps = 0.5 ln((|cos theta| + |cos gamma|) / (|cos theta| - |cos gamma|))``."""
    cg, ct = _check_distributed(gamma, theta)
    return 0.5 * math.log((ct + cg) / (ct - cg))


@dataclass(frozen=True)
class Q0Estimate:
    value: complex
    std: float
    n_samples: int
    window: tuple[int, int]


def estimate_q0_numeric(
    trajectory: Trajectory | Sequence[ChiralitySummary],
    window: tuple[int, int],
    min_samples: int = 100,
) -> Q0Estimate:
    """Tail average of ``Q(t)`` over ``t_lo <= t <= t_hi``.

    The decaying oscillation of ``Q(t)`` averages out over a long window;
    the window standard deviation is returned as a rough uncertainty.
    """
    if not isinstance(trajectory, Trajectory):
        trajectory = Trajectory.from_summaries(list(trajectory))
    lo, hi = window
    if hi > trajectory.t[-1]:
        raise InsufficientDataError(f"window end {hi} beyond last recorded step {trajectory.t[-1]}")
    mask = (trajectory.t >= lo) & (trajectory.t <= hi)
    n = int(mask.sum())
    if n < min_samples:
        raise InsufficientDataError(f"window {window} holds {n} samples; need >= {min_samples}")
    q = trajectory.q[mask]
    return Q0Estimate(complex(q.mean()), float(q.std()), n, (lo, hi))


def thermo_table(chis: Sequence[float]) -> list[dict]:
    """Rows of ``beta*eps``, ``S0``, ``beta*U``, ``beta*A`` versus ``chi``.

    Raw values are in nats; ``*_log2`` columns divide by ``ln 2``.
    """
    rows = []
    for chi in chis:
        rec = thermo_functions(chi)
        beta_u = rec.beta * rec.internal_energy
        beta_a = -math.log(rec.partition)
        raw = {
            "beta_eps": rec.beta * EPSILON,
            "entropy": rec.entropy_nats,
            "beta_u": beta_u,
            "beta_a": beta_a,
        }
        row = {"chi": rec.chi, **raw}
        row.update({f"{k}_log2": v / NATS_PER_BIT for k, v in raw.items()})
        rows.append(row)
    return rows
