"""Quadratic fluctuations around a background.

The stability operator ``O = -d^2/dtau^2 + U(tau)`` with
``U = V''(x_cl(tau)) / M`` acts on fluctuations vanishing at ``tau = +-L/2``.
Its determinant relative to a harmonic reference ``h = -d^2/dtau^2 + omega_h^2``
is computed two independent ways:

``spectral``
    Second-order finite differences on matched Dirichlet grids; the lowest
    (near-zero, translational) eigenvalue of ``O`` is dropped from the
    product, and the result is Richardson-extrapolated over two grids.
``gelfand_yaglom``
    Initial-value problems ``y'' = (U - lam) y``, ``y(-L/2) = 0``,
    ``y'(-L/2) = 1``. The endpoint ``y(L/2; lam)`` is proportional to
    ``det(O - lam)``. The lowest eigenvalue ``eps0`` is found by Newton
    shooting on ``lam``, and the product without it is
    ``y(L/2; 0) / eps0``, evaluated as the mean of ``-dy/dlam`` over
    ``[0, eps0]``. The ``lam``-derivative is integrated alongside ``y``, so
    no exponentially small numbers are divided when ``eps0`` is tiny.

The harmonic reference must share the continuum of ``O`` for the ratio to
have a finite large-``L`` limit: ``omega_h^2 = V''(+-a)/M``, which is
``2 omega^2`` for the double well (:attr:`DoubleWellParams.well_frequency`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.linalg import eigh_tridiagonal, eigvalsh_tridiagonal

from .action import zero_mode_norm_sq
from .background import ClassicalPath
from .model import DoubleWellParams, dd_potential

__all__ = [
    "DeterminantMismatchError",
    "StabilityOperator",
    "SpectrumResult",
    "DeterminantRatio",
    "build_stability_operator",
    "constant_operator",
    "rosen_morse_potential",
    "spectrum_finite_difference",
    "ground_state",
    "zero_mode_profile",
    "harmonic_determinant",
    "gelfand_yaglom_solution",
    "grid_determinant",
    "per_mode_ratios",
    "lowest_eigenvalue_shooting",
    "regularized_ratio",
]

DEFAULT_GRID = 4096
MIN_GRID = 64


class DeterminantMismatchError(ArithmeticError):
    def __init__(self, spectral: float, gelfand_yaglom: float, tolerance: float):
        rel = abs(spectral - gelfand_yaglom) / abs(spectral)
        super().__init__(
            f"determinant routes disagree: spectral={spectral!r}, "
            f"gelfand_yaglom={gelfand_yaglom!r} (relative {rel:.3g} > {tolerance})")
        self.spectral = spectral
        self.gelfand_yaglom = gelfand_yaglom


@dataclass(frozen=True)
class StabilityOperator:
    """``-d^2/dtau^2 + U(tau)`` on ``window`` with Dirichlet ends.

    ``asymptotic_frequency`` is ``sqrt(U)`` far from the background centre,
    used as the default harmonic reference.
    """

    U: Callable
    window: tuple[float, float]
    asymptotic_frequency: float
    boundary: str = "dirichlet"
    path: ClassicalPath | None = field(default=None, compare=False)

    @property
    def L(self) -> float:
        return self.window[1] - self.window[0]


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    grid_spacing: float
    extrapolated: bool
    n_points: int
    warning: str | None = None


@dataclass(frozen=True)
class DeterminantRatio:
    """``det h / det' O`` with shared free-particle normalisation.

    ``harmonic_det`` is ``det h / det(-d^2)`` (dimensionless),
    ``regularized_det`` is ``det' O / det(-d^2)`` (units of time^2 since one
    eigenvalue is removed), and ``ratio = harmonic_det / regularized_det``
    carries units of 1/time^2.
    """

    harmonic_det: float
    regularized_det: float
    ratio: float
    method: str
    omega: float
    L: float
    cross_check: float | None = None


def rosen_morse_potential(p: DoubleWellParams, tau, tau0: float = 0.0):
    """Closed-form kink fluctuation potential ``2 omega^2 (1 - 3/2 sech^2 w)``."""
    w = p.omega * (np.asarray(tau, dtype=float) - tau0) / math.sqrt(2.0)
    with np.errstate(over="ignore"):
        sech = 1.0 / np.cosh(w)
    return 2.0 * p.omega ** 2 * (1.0 - 1.5 * sech * sech)


def build_stability_operator(path: ClassicalPath, L: float | None = None) -> StabilityOperator:
    """Operator with ``U(tau) = V''(x_cl(tau)) / M`` on ``[-L/2, L/2]``."""
    L = path.L if L is None else float(L)
    if L is None or not (L > 0.0 and math.isfinite(L)):
        raise ValueError("the stability operator needs a finite window")
    p = path.params

    def U(tau):
        return dd_potential(p, path.position(tau)) / p.M

    w_inf = math.sqrt(dd_potential(p, p.a) / p.M)
    return StabilityOperator(U, (-0.5 * L, 0.5 * L), w_inf, path=path)


def constant_operator(omega: float, L: float) -> StabilityOperator:
    """``-d^2/dtau^2 + omega^2``; ``omega = 0`` gives the free operator."""
    w2 = float(omega) ** 2
    return StabilityOperator(lambda tau: np.full(np.shape(tau), w2), (-0.5 * L, 0.5 * L), float(omega))


def _grid(op: StabilityOperator, n: int):
    lo, hi = op.window
    h = (hi - lo) / (n + 1)
    tau = lo + h * np.arange(1, n + 1)
    diag = 2.0 / h ** 2 + np.asarray(op.U(tau), dtype=float)
    off = np.full(n - 1, -1.0 / h ** 2)
    return tau, diag, off, h


def _richardson(fine, coarse, h_fine, h_coarse):
    q = (h_coarse / h_fine) ** 2
    return fine + (fine - coarse) / (q - 1.0)


def spectrum_finite_difference(op: StabilityOperator, n_points: int = DEFAULT_GRID,
                               extrapolate: bool = False, n_modes: int = 32) -> SpectrumResult:
    """Ascending eigenvalues of the Dirichlet finite-difference operator.

    Without ``extrapolate`` all ``n_points`` eigenvalues are returned. With
    it, only the lowest ``n_modes`` are returned, each Richardson-combined
    from grids of ``n_points`` and ``n_points // 2`` interior points.
    """
    n_points = int(n_points)
    if n_points < 3:
        raise ValueError("need at least 3 grid points")
    warning = None
    if n_points < MIN_GRID:
        warning = f"n_points={n_points} < {MIN_GRID}: eigenvalues are coarse"
    _, d, e, h = _grid(op, n_points)
    if not extrapolate:
        return SpectrumResult(eigvalsh_tridiagonal(d, e), h, False, n_points, warning)
    n_coarse = n_points // 2
    n_modes = min(n_modes, n_coarse)
    fine = eigvalsh_tridiagonal(d, e, select="i", select_range=(0, n_modes - 1))
    _, dc, ec, hc = _grid(op, n_coarse)
    coarse = eigvalsh_tridiagonal(dc, ec, select="i", select_range=(0, n_modes - 1))
    return SpectrumResult(_richardson(fine, coarse, h, hc), h, True, n_points, warning)


def ground_state(op: StabilityOperator, n_points: int = DEFAULT_GRID):
    """Grid points, lowest eigenvalue and its eigenvector normalised to ``int eta^2 = 1``."""
    tau, d, e, h = _grid(op, int(n_points))
    w, v = eigh_tridiagonal(d, e, select="i", select_range=(0, 0))
    vec = v[:, 0] / math.sqrt(h)
    if vec[np.argmax(np.abs(vec))] < 0:
        vec = -vec
    return tau, float(w[0]), vec


def zero_mode_profile(path: ClassicalPath, L: float | None = None) -> Callable:
    """Unit-normalised translational mode ``xdot(tau) / ||xdot||``."""
    norm = math.sqrt(zero_mode_norm_sq(path, L))
    sign = path.sign

    def eta0(tau):
        return sign * np.asarray(path.velocity(tau)) / norm

    return eta0


def harmonic_determinant(omega: float, L: float) -> float:
    """Normalised harmonic determinant in the ``-4 sinh^2(omega L / 2)`` convention."""
    if not L > 0.0:
        raise ValueError("L must be positive")
    return -4.0 * math.sinh(0.5 * omega * L) ** 2


def _gy_system(op: StabilityOperator, lam, with_derivative: bool, rtol: float):
    """Endpoint state ``(y, y', dy/dlam, dy'/dlam)`` (or ``(y, y')``) at ``L/2``.

    ``lam`` may be an array; all shifts are then integrated as one system
    so ``U`` is evaluated once per step. Rows of the result follow ``lam``.
    """
    lo, hi = op.window
    lams = np.atleast_1d(np.asarray(lam, dtype=float))
    k = lams.size
    width = 4 if with_derivative else 2

    def rhs(t, Y):
        Y = Y.reshape(k, width)
        q = op.U(t) - lams
        out = np.empty_like(Y)
        out[:, 0] = Y[:, 1]
        out[:, 1] = q * Y[:, 0]
        if with_derivative:
            out[:, 2] = Y[:, 3]
            out[:, 3] = q * Y[:, 2] - Y[:, 0]
        return out.ravel()

    y0 = np.zeros((k, width))
    y0[:, 1] = 1.0
    # atol is negligible: the solutions grow from an exact zero.
    sol = integrate.solve_ivp(rhs, (lo, hi), y0.ravel(), method="DOP853", rtol=rtol,
                              atol=1e-30, first_step=1e-6 * (hi - lo))
    if not sol.success:
        raise ArithmeticError(f"Gelfand-Yaglom integration failed: {sol.message}")
    end = sol.y[:, -1].reshape(k, width)
    return end[0] if np.ndim(lam) == 0 else end


def gelfand_yaglom_solution(op: StabilityOperator, lam: float = 0.0, rtol: float = 1e-12) -> float:
    """Endpoint ``y(L/2)`` of ``y'' = (U - lam) y``, ``y(-L/2) = 0``, ``y'(-L/2) = 1``.

    Proportional to ``det(O - lam)``; ``y(L/2) / L`` is the determinant
    normalised by the free operator. When ``O`` has a near-zero mode the
    endpoint results from cancellation of exponentially large terms and
    loses relative accuracy like ``exp(omega_h L) * rtol``.
    """
    return float(_gy_system(op, lam, False, rtol)[0])


def grid_determinant(op: StabilityOperator, n_points: int = DEFAULT_GRID,
                     extrapolate: bool = True) -> float:
    """Dirichlet grid determinant normalised like ``y(L/2)``, i.e. ``L det O / det(-d^2)``."""

    def one(n):
        _, d, e, h = _grid(op, n)
        ev = eigvalsh_tridiagonal(d, e)
        k = np.arange(1, n + 1)
        free = 4.0 / h ** 2 * np.sin(k * math.pi / (2 * (n + 1))) ** 2
        return op.L * math.exp(np.sum(np.log(ev / free))), h

    fine, h = one(int(n_points))
    if not extrapolate:
        return fine
    coarse, hc = one(int(n_points) // 2)
    return _richardson(fine, coarse, h, hc)


def _harmonic_grid_eigenvalues(omega: float, n: int, h: float) -> np.ndarray:
    k = np.arange(1, n + 1)
    return omega ** 2 + 4.0 / h ** 2 * np.sin(k * math.pi / (2 * (n + 1))) ** 2


def per_mode_ratios(op: StabilityOperator, omega: float | None = None,
                    n_points: int = DEFAULT_GRID) -> np.ndarray:
    """``eps_n^harm / eps_n`` on a common grid, index by index."""
    omega = op.asymptotic_frequency if omega is None else float(omega)
    _, d, e, h = _grid(op, int(n_points))
    ev = eigvalsh_tridiagonal(d, e)
    return _harmonic_grid_eigenvalues(omega, int(n_points), h) / ev


def _spectral_ratio(op: StabilityOperator, omega: float, n_points: int) -> float:
    def one(n):
        _, d, e, h = _grid(op, n)
        ev = eigvalsh_tridiagonal(d, e)
        harm = _harmonic_grid_eigenvalues(omega, n, h)
        # ev[0] is the translational mode; harm keeps all n modes.
        log_ratio = np.log(harm[0]) + np.sum(np.log(harm[1:] / ev[1:]))
        return math.exp(log_ratio), h

    fine, h = one(n_points)
    coarse, hc = one(n_points // 2)
    return float(_richardson(fine, coarse, h, hc))


def lowest_eigenvalue_shooting(op: StabilityOperator, rtol: float = 1e-12, maxiter: int = 60) -> float:
    """Lowest Dirichlet eigenvalue from the first zero of ``lam -> y(L/2; lam)``.

    ``y(L/2; lam)`` is entire in ``lam`` with only real zeros, so Newton's
    method started below the lowest one (at ``lam = 0``, or lower if the
    operator is not positive) increases monotonically towards it.
    """
    scale = max(op.asymptotic_frequency ** 2, (math.pi / op.L) ** 2)
    lam = 0.0
    y, _, z, _ = _gy_system(op, lam, True, rtol)
    while y / z > 0.0:
        # y and dy/dlam share a sign only above the lowest zero: step down.
        lam -= scale
        y, _, z, _ = _gy_system(op, lam, True, rtol)
    for _ in range(maxiter):
        step = -y / z
        lam += step
        if abs(step) <= 1e-14 * (abs(lam) + scale):
            return lam
        y, _, z, _ = _gy_system(op, lam, True, rtol)
    raise ArithmeticError("Newton shooting for the lowest eigenvalue did not converge")


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def _gelfand_yaglom_ratio(op: StabilityOperator, omega: float, rtol: float) -> float:
    y_h = gelfand_yaglom_solution(constant_operator(omega, op.L), rtol=rtol)
    eps0 = lowest_eigenvalue_shooting(op, rtol)
    # y(lam) = C (eps0 - lam) prod_{n>=1}(eps_n - lam), so C prod eps_n = y(0)/eps0
    # = -(1/eps0) int_0^eps0 dy/dlam; the integrand is smooth on this interval.
    t = 0.5 * (_GL_NODES + 1.0)
    slopes = _gy_system(op, eps0 * t, True, rtol)[:, 2]
    mean_slope = 0.5 * float(np.dot(_GL_WEIGHTS, slopes))
    return float(-y_h / mean_slope)


_METHODS = ("spectral", "gelfand_yaglom", "both")


def regularized_ratio(op: StabilityOperator, omega: float | None = None, method: str = "both",
                      n_points: int = DEFAULT_GRID, tolerance: float = 0.02,
                      rtol: float = 1e-12) -> DeterminantRatio:
    """Ratio ``det h / det' O`` of the harmonic and zero-mode-free determinants.

    Parameters
    ----------
    op : StabilityOperator
        Operator with a near-zero lowest eigenvalue.
    omega : float, optional
        Harmonic reference frequency; defaults to ``op.asymptotic_frequency``.
    method : {"spectral", "gelfand_yaglom", "both"}
        ``"both"`` computes the two routes, raises
        :class:`DeterminantMismatchError` if they differ by more than
        ``tolerance`` (relative) and returns the spectral value with the
        other stored as ``cross_check``.
    """
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}, got {method!r}")
    omega = op.asymptotic_frequency if omega is None else float(omega)
    L = op.L
    cross = None
    if method == "gelfand_yaglom":
        ratio = _gelfand_yaglom_ratio(op, omega, rtol)
    else:
        ratio = _spectral_ratio(op, omega, int(n_points))
        if method == "both":
            cross = _gelfand_yaglom_ratio(op, omega, rtol)
            if abs(ratio - cross) > tolerance * abs(ratio):
                raise DeterminantMismatchError(ratio, cross, tolerance)
            method = "spectral"
    harmonic = math.sinh(omega * L) / (omega * L) if omega > 0 else 1.0
    return DeterminantRatio(harmonic, harmonic / ratio, ratio, method, omega, L, cross)
