"""Semiclassical tunneling in the quartic double well at finite and infinite Euclidean size."""

from .model import DoubleWellParams, potential, temperature_to_size, size_to_temperature
from .elliptic import EllipticModulus, complete_K, incomplete_F, jacobi_sn_cn_dn
from .background import (
    KinkPath,
    FiniteInstanton,
    VacuumPath,
    NoInstantonError,
    SingularPointError,
    boundary_size,
    solve_energy_for_size,
)
from .action import classical_action, asymptotic_action, zero_mode_norm_sq
from .fluctuation import (
    DeterminantMismatchError,
    build_stability_operator,
    regularized_ratio,
    spectrum_finite_difference,
)
from .propagator import TunnelingReport, amplitude_finite, amplitude_infinite, omega_infinity

__version__ = "0.1.0"

__all__ = [
    "DoubleWellParams", "potential", "temperature_to_size", "size_to_temperature",
    "EllipticModulus", "complete_K", "incomplete_F", "jacobi_sn_cn_dn",
    "KinkPath", "FiniteInstanton", "VacuumPath", "NoInstantonError", "SingularPointError",
    "boundary_size", "solve_energy_for_size",
    "classical_action", "asymptotic_action", "zero_mode_norm_sq",
    "DeterminantMismatchError", "build_stability_operator", "regularized_ratio",
    "spectrum_finite_difference",
    "TunnelingReport", "amplitude_finite", "amplitude_infinite", "omega_infinity",
]
