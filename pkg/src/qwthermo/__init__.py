"""Coin-position entanglement thermodynamics of the quantum walk on the line."""

from .density import eigensystem, gcd_stationary, gcd_step, reduced_density
from .initial import BlochAngles, GaussianSpec, distributed_phase, gaussian, localized
from .thermo import (
    CHI0,
    characteristic_temperature,
    chi_from_q0,
    q0_chi_distributed,
    q0_chi_localized_hadamard,
    thermo_functions,
)
from .walker import HADAMARD, SpinorField, evolve, observables, step

__version__ = "0.1.0"

__all__ = [
    "CHI0",
    "HADAMARD",
    "BlochAngles",
    "GaussianSpec",
    "SpinorField",
    "characteristic_temperature",
    "chi_from_q0",
    "distributed_phase",
    "eigensystem",
    "evolve",
    "gaussian",
    "gcd_stationary",
    "gcd_step",
    "localized",
    "observables",
    "q0_chi_distributed",
    "q0_chi_localized_hadamard",
    "reduced_density",
    "step",
    "thermo_functions",
]
