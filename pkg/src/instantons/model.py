"""Quartic double-well potential and its parameters."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DoubleWellParams",
    "potential",
    "potential_expanded",
    "d_potential",
    "dd_potential",
    "temperature_to_size",
    "size_to_temperature",
]


@dataclass(frozen=True)
class DoubleWellParams:
    """Mass, well frequency, quartic constant and action quantum.

    The well position ``a = sqrt(M omega^2 / delta)`` is derived, never set.
    Defaults are reduced units ``M = omega = delta = hbar = 1``.

    Note that the curvature at the minima is ``V''(+-a) = 2 M omega^2``, so
    small oscillations inside a well have angular frequency
    :attr:`well_frequency` ``= sqrt(2) omega`` rather than ``omega``.
    """

    M: float = 1.0
    omega: float = 1.0
    delta: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("M", "omega", "delta", "hbar"):
            value = float(getattr(self, name))
            if not (value > 0.0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def a(self) -> float:
        return math.sqrt(self.M * self.omega ** 2 / self.delta)

    @property
    def barrier_height(self) -> float:
        return self.delta * self.a ** 4 / 4.0

    @property
    def well_frequency(self) -> float:
        return math.sqrt(2.0) * self.omega


def potential(p: DoubleWellParams, x):
    """``V(x) = M omega^2 / (4 a^2) (x - a)^2 (x + a)^2``."""
    x = np.asarray(x, dtype=float)
    a = p.a
    v = p.M * p.omega ** 2 / (4.0 * a * a) * ((x - a) * (x + a)) ** 2
    return v if v.ndim else float(v)


def potential_expanded(p: DoubleWellParams, x):
    # Polynomial form; only for cross-checking the factored one.
    x = np.asarray(x, dtype=float)
    v = -0.5 * p.M * p.omega ** 2 * x ** 2 + 0.25 * p.delta * x ** 4 + 0.25 * p.delta * p.a ** 4
    return v if v.ndim else float(v)


def d_potential(p: DoubleWellParams, x):
    """``V'(x) = delta x^3 - M omega^2 x``, evaluated in factored form."""
    x = np.asarray(x, dtype=float)
    a = p.a
    v = p.M * p.omega ** 2 / (a * a) * x * (x - a) * (x + a)
    return v if v.ndim else float(v)


def dd_potential(p: DoubleWellParams, x):
    """``V''(x) = M omega^2 (3 x^2 / a^2 - 1)``."""
    x = np.asarray(x, dtype=float)
    v = p.M * p.omega ** 2 * (3.0 * x * x / p.a ** 2 - 1.0)
    return v if v.ndim else float(v)


def temperature_to_size(p: DoubleWellParams, T: float, kB: float = 1.0) -> float:
    """Euclidean time extent ``L = hbar / (kB T)``."""
    if not T > 0.0:
        raise ValueError(f"temperature must be positive, got {T!r}")
    if not kB > 0.0:
        raise ValueError(f"kB must be positive, got {kB!r}")
    return p.hbar / (kB * T)


def size_to_temperature(p: DoubleWellParams, L: float, kB: float = 1.0) -> float:
    if not L > 0.0:
        raise ValueError(f"size must be positive, got {L!r}")
    if math.isinf(L):
        return 0.0
    return p.hbar / (kB * L)
