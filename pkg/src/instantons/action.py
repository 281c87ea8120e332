"""Classical Euclidean action and zero-mode norm of a background."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy import integrate

from .background import ClassicalPath, KinkPath, VacuumPath
from .model import DoubleWellParams, potential

__all__ = [
    "QuadratureError",
    "ActionResult",
    "classical_action",
    "action_parts",
    "asymptotic_action",
    "zero_mode_norm_sq",
    "compute_action",
]

# tanh(w) >= 1 - 1e-14 for w beyond this; the kink integrals are cut there.
_KINK_CUTOFF = 0.5 * math.log(2e14)


class QuadratureError(ArithmeticError):
    def __init__(self, message, value, abserr):
        super().__init__(f"{message} (value={value!r}, estimated error={abserr!r})")
        self.value = value
        self.abserr = abserr


@dataclass(frozen=True)
class ActionResult:
    action: float
    zero_mode_norm_sq: float
    window: tuple[float, float]
    kinetic: float
    potential: float


def _window(path: ClassicalPath, L: float | None) -> tuple[float, float]:
    L = path.L if L is None else float(L)
    if L is None or not L > 0.0:
        raise ValueError("a positive window size is required")
    if math.isinf(L):
        if isinstance(path, KinkPath):
            half = math.sqrt(2.0) * _KINK_CUTOFF / path.params.omega
            return (path.tau0 - half, path.tau0 + half)
        if isinstance(path, VacuumPath):
            return (-math.inf, math.inf)
        raise ValueError(f"{type(path).__name__} needs a finite window")
    return (-0.5 * L, 0.5 * L)


def _integrate(path: ClassicalPath, integrand, L, epsrel) -> tuple[float, tuple[float, float]]:
    lo, hi = _window(path, L)
    if math.isinf(lo):
        return 0.0, (lo, hi)
    # Integrands are smooth and peaked at tau0; split there.
    cuts = [lo, hi]
    if lo < path.tau0 < hi:
        cuts = [lo, path.tau0, hi]
    total, err = 0.0, 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        val, e = integrate.quad(integrand, a, b, epsabs=0.0, epsrel=epsrel, limit=400)
        total += val
        err += e
    if err > 10 * epsrel * abs(total) and err > 1e-300:
        raise QuadratureError("window quadrature did not reach the requested accuracy", total, err)
    return total, (lo, hi)


def action_parts(path: ClassicalPath, L: float | None = None, epsrel: float = 1e-11):
    """Kinetic ``int (M/2) xdot^2`` and potential ``int V(x)`` parts of the action."""
    p = path.params
    kin, _ = _integrate(path, lambda t: 0.5 * p.M * path.velocity(t) ** 2, L, epsrel)
    pot, _ = _integrate(path, lambda t: potential(p, path.position(t)), L, epsrel)
    return kin, pot


def classical_action(path: ClassicalPath, L: float | None = None, epsrel: float = 1e-11) -> float:
    """``A = int_{-L/2}^{L/2} ((M/2) xdot^2 + V(x)) dtau``.

    With ``L = inf`` the kink integrand is cut where ``a - |x| < 1e-14 a``;
    the neglected tail is below ``1e-28`` in units of the action.
    """
    p = path.params

    def lagrangian(t):
        return 0.5 * p.M * path.velocity(t) ** 2 + potential(p, path.position(t))

    value, _ = _integrate(path, lagrangian, L, epsrel)
    return value


def asymptotic_action(p: DoubleWellParams) -> float:
    """Infinite-size kink action ``(2 sqrt 2 / 3) M^2 omega^3 / delta``."""
    return 2.0 * math.sqrt(2.0) / 3.0 * p.M ** 2 * p.omega ** 3 / p.delta


def zero_mode_norm_sq(path: ClassicalPath, L: float | None = None, epsrel: float = 1e-11) -> float:
    """Squared norm of the velocity, ``2 int_0^{L/2} xdot^2 dtau``.

    Integrated over the full window, which equals the one-sided form for the
    even velocity profiles of centred backgrounds. A vanishing norm (vacuum
    path) is returned as 0 with a warning since no zero mode exists then.
    """
    value, _ = _integrate(path, lambda t: path.velocity(t) ** 2, L, epsrel)
    if value == 0.0:
        warnings.warn("zero-mode norm vanishes: the background has no translational mode",
                      RuntimeWarning, stacklevel=2)
    return value


def compute_action(path: ClassicalPath, L: float | None = None) -> ActionResult:
    kin, pot = action_parts(path, L)
    norm = zero_mode_norm_sq(path, L)
    return ActionResult(kin + pot, norm, _window(path, L), kin, pot)
