"""Classical Euclidean backgrounds of the double well.

Two families are provided:

* :class:`KinkPath`, the ``E = 0`` (anti)kink ``+-a tanh(omega (tau - tau0) / sqrt 2)``
  which connects the minima in infinite time;
* :class:`FiniteInstanton`, the ``E > 0`` elliptic solution which reaches
  ``x = a`` at ``tau = L/2``.

For ``E > 0`` the finite instanton is written with the elliptic argument
``w = (kappa/2)^(1/4) omega (tau - tau0)`` and modulus
``s^2 = (1 + 1/sqrt(2 kappa)) / 2`` where ``kappa = 1/2 + 2E/(delta a^4)``.
Internally the small quantity ``eps = 2 kappa - 1 = 4E/(delta a^4)`` is kept
instead of ``kappa`` so that energies down to ``1e-300 delta a^4`` resolve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from .elliptic import (
    DegenerateModulusError,
    EllipticModulus,
    complete_K,
    incomplete_F_sincos,
    jacobi_sn_cn_dn,
)
from .model import DoubleWellParams, d_potential, potential

__all__ = [
    "SingularPointError",
    "NoInstantonError",
    "ClassicalPath",
    "VacuumPath",
    "KinkPath",
    "FiniteInstanton",
    "kink_position",
    "instanton_position_1",
    "instanton_position_2",
    "velocity",
    "boundary_size",
    "boundary_size_branch2",
    "solve_energy_for_size",
    "time_of_position",
    "euler_lagrange_residual",
]


class SingularPointError(ValueError):
    """The elliptic background is evaluated at (or beyond) one of its poles."""


class NoInstantonError(RuntimeError):
    """No finite-size instanton satisfies the boundary conditions."""


def _scalar_or_array(v):
    v = np.asarray(v, dtype=float)
    return v if v.ndim else float(v)


class ClassicalPath:
    """Interface shared by all backgrounds.

    Subclasses provide ``params``, ``E``, ``L``, ``tau0``, ``sign`` and
    :meth:`position`. The default :meth:`velocity` uses the first integral
    ``(M/2) xdot^2 - V(x) = E`` with the sign of the branch.
    """

    def position(self, tau):
        raise NotImplementedError

    def velocity(self, tau):
        x = np.asarray(self.position(tau))
        v = self.sign * np.sqrt(2.0 * (self.E + potential(self.params, x)) / self.params.M)
        return _scalar_or_array(v)

    @property
    def window(self) -> tuple[float, float]:
        return (-0.5 * self.L, 0.5 * self.L)


@dataclass(frozen=True)
class VacuumPath(ClassicalPath):
    """The trivial solution sitting in one of the minima."""

    params: DoubleWellParams
    L: float = math.inf
    sign: int = 1
    tau0: float = 0.0

    @property
    def E(self) -> float:
        return 0.0

    def position(self, tau):
        return _scalar_or_array(np.full(np.shape(tau), self.sign * self.params.a))

    def velocity(self, tau):
        return _scalar_or_array(np.zeros(np.shape(tau)))


@dataclass(frozen=True)
class KinkPath(ClassicalPath):
    """``sign * a * tanh(omega (tau - tau0) / sqrt 2)``; ``sign = -1`` is the antikink."""

    params: DoubleWellParams
    tau0: float = 0.0
    sign: int = 1
    L: float = math.inf

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def E(self) -> float:
        return 0.0

    def position(self, tau):
        return kink_position(self, tau)

    def velocity(self, tau):
        p = self.params
        w = p.omega * (np.asarray(tau, dtype=float) - self.tau0) / math.sqrt(2.0)
        with np.errstate(over="ignore"):
            sech = 1.0 / np.cosh(w)
        return _scalar_or_array(self.sign * p.a * p.omega / math.sqrt(2.0) * sech * sech)


@dataclass(frozen=True)
class FiniteInstanton(ClassicalPath):
    """Elliptic finite-size (anti)instanton of energy ``E >= 0``.

    ``L`` defaults to the size at which the path reaches ``+-a`` at
    ``tau = +-L/2`` (see :func:`boundary_size`). Construction fails if the
    window would reach the first pole, i.e. unless ``w*/K(s) < 1`` with
    ``w* = (kappa/2)^(1/4) omega L / 2``.
    """

    params: DoubleWellParams
    E: float
    L: float | None = None
    tau0: float = 0.0
    sign: int = 1
    kappa: float = field(init=False)
    s: EllipticModulus = field(init=False)
    eps: float = field(init=False, repr=False)

    def __post_init__(self):
        E = float(self.E)
        if not (E >= 0.0 and math.isfinite(E)):
            raise ValueError(f"instanton energy must be finite and >= 0, got {E!r}")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        p = self.params
        eps = 4.0 * E / (p.delta * p.a ** 4)
        sq = math.sqrt(1.0 + eps)
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "kappa", 0.5 + 0.5 * eps)
        object.__setattr__(self, "s", EllipticModulus.from_complement(_complement(E, eps, sq)))
        if self.L is None:
            object.__setattr__(self, "L", boundary_size(p, E))
        if not self.L > 0.0:
            raise ValueError(f"size must be positive, got {self.L!r}")
        if self.period_ratio >= 1.0:
            raise SingularPointError(
                f"window L={self.L!r} reaches the pole of the E={E!r} instanton "
                f"(w*/K = {self.period_ratio:.6g})")

    @property
    def argument_scale(self) -> float:
        """``(kappa/2)^(1/4) omega``, the factor converting time to elliptic argument."""
        return (1.0 + self.eps) ** 0.25 * self.params.omega / math.sqrt(2.0)

    @property
    def amplitude(self) -> float:
        """``(2 kappa)^(1/4) a``."""
        return (1.0 + self.eps) ** 0.25 * self.params.a

    @property
    def quarter_period(self) -> float:
        try:
            return complete_K(self.s)
        except DegenerateModulusError:
            return math.inf

    @property
    def period_ratio(self) -> float:
        """``w*/K(s)`` for the current window."""
        K = self.quarter_period
        if math.isinf(K):
            return 0.0
        return self.argument_scale * 0.5 * self.L / K

    def varpi(self, tau):
        return _scalar_or_array(self.argument_scale * (np.asarray(tau, dtype=float) - self.tau0))

    def position(self, tau):
        return instanton_position_1(self, tau)

    def velocity_analytic(self, tau):
        """Derivative of the first branch from the Jacobi functions directly.

        ``d/dw (sn dn / cn) = (dn^2 - s^2 sn^2 cn^2) / cn^2``; independent of
        the first-integral route used by :meth:`velocity`.
        """
        w = np.asarray(self.varpi(tau))
        if np.any(np.abs(w) >= self.quarter_period):
            raise SingularPointError("|w| must stay below K(s)")
        sn, cn, dn = jacobi_sn_cn_dn(w, self.s)
        num = dn * dn - self.s.s_squared * sn * sn * cn * cn
        v = self.sign * math.sqrt(self.kappa) * self.params.a * self.params.omega * num / (cn * cn)
        return _scalar_or_array(v)


def kink_position(k: KinkPath, tau):
    p = k.params
    w = p.omega * (np.asarray(tau, dtype=float) - k.tau0) / math.sqrt(2.0)
    return _scalar_or_array(k.sign * p.a * np.tanh(w))


def instanton_position_1(f: FiniteInstanton, tau):
    """Bounded branch ``(2 kappa)^(1/4) a sn dn / cn``, valid for ``|w| < K(s)``."""
    w = np.asarray(f.varpi(tau))
    K = f.quarter_period
    if np.any(np.abs(w) >= K):
        raise SingularPointError(f"|w| must stay below K(s) = {K!r}")
    sn, cn, dn = jacobi_sn_cn_dn(w, f.s)
    return _scalar_or_array(f.sign * f.amplitude * sn * dn / cn)


def instanton_position_2(f: FiniteInstanton, tau):
    """Second branch ``-(2 kappa)^(1/4) a cn / (sn dn)``, singular at ``w = 0 mod 2K``.

    Equal to the first branch translated by one quarter period in ``w``.
    """
    w = np.asarray(f.varpi(tau))
    sn, cn, dn = (np.asarray(v) for v in jacobi_sn_cn_dn(w, f.s))
    den = sn * dn
    if np.any(den == 0.0):
        raise SingularPointError("second branch evaluated at a pole (w = 0 mod 2K)")
    return _scalar_or_array(-f.sign * f.amplitude * cn / den)


def velocity(path: ClassicalPath, tau):
    return path.velocity(tau)


def _eps(p: DoubleWellParams, E: float) -> float:
    return 4.0 * E / (p.delta * p.a ** 4)


def _complement(E: float, eps: float, sq: float) -> float:
    mc = 0.5 * eps / (sq * (sq + 1.0))
    if E > 0.0 and mc == 0.0:
        # 1 - s^2 ~ E / (delta a^4) is below the smallest double
        raise ValueError(f"E={E!r} is too small: 1 - s^2 underflows (need E above ~1e-307 delta a^4)")
    return mc


def boundary_size(p: DoubleWellParams, E: float) -> float:
    """Size ``L`` at which the first branch satisfies ``x(+-L/2) = +-a``.

    Closed form ``L = sqrt(2) (1+eps)^(-1/4) F(theta_a, s) / omega`` with
    ``tan(theta_a / 2) = (2 kappa)^(-1/4)``; ``cos(theta_a)`` is formed without
    cancellation.
    """
    if E < 0.0:
        raise ValueError("no instanton for E < 0")
    if E == 0.0:
        return math.inf
    eps = _eps(p, E)
    sq = math.sqrt(1.0 + eps)
    t2 = 1.0 / sq
    t = math.sqrt(t2)
    cos_theta = eps / (sq * (sq + 1.0)) / (1.0 + t2)
    sin_theta = 2.0 * t / (1.0 + t2)
    s = EllipticModulus.from_complement(_complement(E, eps, sq))
    F = incomplete_F_sincos(sin_theta, cos_theta, s)
    return math.sqrt(2.0) * (1.0 + eps) ** -0.25 * F / p.omega


def boundary_size_branch2(p: DoubleWellParams, E: float) -> float:
    """Time the second branch needs to travel from ``-a`` to ``+a``.

    The second branch ``-A cn/(sn dn)`` reaches ``-a`` at ``w_-`` in
    ``(0, K)`` where ``cn/(sn dn) = a/A``, and is odd about ``w = K``, so it
    reaches ``+a`` at ``2K - w_-``. With ``C = cn^2(w_-)`` the crossing
    condition is the quadratic ``t^2 m C^2 + b C - t^2 (1-m) = 0``,
    ``t = a/A``, ``b = 2(1-m)(1+t^2)``, solved in cancellation-free form.
    Shares only ``K`` and ``F`` with :func:`boundary_size`; used to confirm
    both branches describe the same size.
    """
    if not E > 0.0:
        raise ValueError("second-branch size needs E > 0")
    f = FiniteInstanton(p, E, L=1e-300)
    m, mc = f.s.s_squared, f.s.complement
    t2 = 1.0 / math.sqrt(1.0 + f.eps)
    b = 2.0 * mc * (1.0 + t2)
    C = 2.0 * t2 * mc / (b + math.sqrt(b * b + 4.0 * t2 * t2 * m * mc))
    w_minus = incomplete_F_sincos(math.sqrt(1.0 - C), math.sqrt(C), f.s)
    return 2.0 * (f.quarter_period - w_minus) / f.argument_scale


def solve_energy_for_size(p: DoubleWellParams, L: float, E_max: float | None = None,
                          tau0: float = 0.0) -> FiniteInstanton:
    """Energy ``E > 0`` of the instanton that connects ``-a`` to ``a`` in time ``L``.

    Brent's method on ``log E`` after a decade-stepping bracket search that
    starts at ``1e-16 delta a^4``. ``L(E)`` is strictly decreasing, so the
    root is unique.

    Raises
    ------
    NoInstantonError
        If ``L`` is so small that the required energy exceeds ``E_max``
        (default ``1e8 delta a^4``), or so large that ``E`` underflows.
    """
    L = float(L)
    if not L > 0.0:
        raise ValueError(f"size must be positive, got {L!r}")
    if math.isinf(L):
        return FiniteInstanton(p, 0.0, L=math.inf, tau0=tau0)
    scale = p.delta * p.a ** 4
    if E_max is None:
        E_max = 1e8 * scale

    def g(log_e):
        return math.log(boundary_size(p, math.exp(log_e)) / L)

    floor = math.log(1e-300 * scale)
    lo = math.log(1e-16 * scale)
    while g(lo) < 0.0:
        lo -= 8.0 * math.log(10.0)
        if lo < floor:
            raise NoInstantonError(f"size L={L!r} needs an energy below 1e-300 delta a^4")
    hi = lo
    g_hi = g(hi)
    while g_hi > 0.0:
        lo = hi
        hi += math.log(10.0)
        if hi > math.log(E_max):
            raise NoInstantonError(
                f"no instanton at size L={L!r}: required energy exceeds E_max={E_max!r}")
        g_hi = g(hi)
    log_e = lo if g(lo) == 0.0 else optimize.brentq(
        g, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)
    return FiniteInstanton(p, math.exp(log_e), L=L, tau0=tau0)


def time_of_position(p: DoubleWellParams, E: float, x: float) -> float:
    """``sqrt(M/2) int_0^x dy / sqrt(E + V(y))`` by adaptive quadrature.

    Independent of the elliptic machinery; the inverse of the first branch.
    """
    x = float(x)
    if E < 0.0:
        raise ValueError("E must be >= 0")
    if E == 0.0 and abs(x) >= p.a:
        raise ValueError("E + V(x) vanishes at |x| = a for E = 0; the integral diverges")
    if x == 0.0:
        return 0.0
    val, err = integrate.quad(lambda y: 1.0 / math.sqrt(E + potential(p, y)), 0.0, abs(x),
                              epsabs=0.0, epsrel=1e-13, limit=500)
    return math.copysign(math.sqrt(0.5 * p.M) * val, x)


def euler_lagrange_residual(path: ClassicalPath, grid, step: float | None = None) -> float:
    """``max |M xddot - V'(x)|`` over ``grid`` with a five-point second difference."""
    p = path.params
    tau = np.asarray(grid, dtype=float)
    h = 1e-3 / p.omega if step is None else float(step)
    x = path.position
    xdd = (-x(tau + 2 * h) + 16 * x(tau + h) - 30 * x(tau) + 16 * x(tau - h) - x(tau - 2 * h)) / (12 * h * h)
    res = np.abs(p.M * xdd - d_potential(p, x(tau)))
    return float(np.max(res))
