"""One-instanton tunneling amplitudes at infinite and finite size.

Two normalisations coexist and are reported side by side rather than
reconciled:

* infinite size: ``sqrt(M omega / (pi hbar)) exp(-omega L / 2) Omega_inf L``
  (end points projected on harmonic well ground states);
* finite size: ``sqrt(M / (2 pi hbar L)) / (2 sinh(omega L / 2)) Omega(L) L``
  (free-particle normalisation).

``Omega(L) = exp(-A(L)/hbar) sqrt(M N^-2 / (2 pi hbar)) sqrt(|det h / det' O|)``
uses the determinant ratio of :mod:`instantons.fluctuation` with the
harmonic reference at the well curvature frequency. Its large-``L`` limit is
``omega_infinity(p, frequency=p.well_frequency)``; the default
:func:`omega_infinity` keeps the bare ``omega`` in the ``2 sqrt(3) omega``
prefactor and is therefore smaller by ``sqrt(2)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field

from .action import asymptotic_action, classical_action, zero_mode_norm_sq
from .background import solve_energy_for_size
from .fluctuation import (
    DEFAULT_GRID,
    DeterminantRatio,
    build_stability_operator,
    harmonic_determinant,
    regularized_ratio,
)
from .model import DoubleWellParams, size_to_temperature

__all__ = [
    "TunnelingReport",
    "omega_infinity",
    "amplitude_infinite",
    "infinite_size_report",
    "amplitude_finite",
]


@dataclass
class TunnelingReport:
    """Assembled factors of a one-instanton amplitude.

    ``ledger`` maps every multiplicative factor of the amplitude to its
    value; their product equals ``amplitude``. The zero mode enters once,
    through ``collective_coordinate`` (``sqrt(M N^-2 / (2 pi hbar))``) and
    ``size``; it is excluded from the determinant ratio.
    """

    params: DoubleWellParams
    L: float
    temperature: float
    convention: str
    E: float
    kappa: float
    s_squared: float
    action: float
    zero_mode_norm_sq: float
    det_ratio: DeterminantRatio | None
    omega_tunnel: float
    amplitude: float
    omega_infinity: float
    omega_infinity_well: float
    ledger: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["L"] = _finite_or_str(self.L)
        return d


def _finite_or_str(x):
    return x if math.isfinite(x) else "inf"


def omega_infinity(p: DoubleWellParams, frequency: float | None = None) -> float:
    """Infinite-size tunneling frequency.

    ``exp(-A/hbar) 2 sqrt(3) f sqrt(M N^-2 / (2 pi hbar))`` with the kink
    action ``A`` and ``M N^-2 = A``. ``f`` defaults to ``p.omega``; pass
    ``p.well_frequency`` for the value that the finite-size pipeline
    approaches.
    """
    f = p.omega if frequency is None else float(frequency)
    A = asymptotic_action(p)
    return math.exp(-A / p.hbar) * 2.0 * math.sqrt(3.0) * f * math.sqrt(A / (2.0 * math.pi * p.hbar))


def _harmonic_endpoint_factor(p: DoubleWellParams) -> float:
    return math.sqrt(p.M * p.omega / (math.pi * p.hbar))


def amplitude_infinite(p: DoubleWellParams, L: float) -> float:
    """``sqrt(M omega / (pi hbar)) exp(-omega L / 2) Omega_inf L``; meaningful for ``omega L >> 1``."""
    if p.omega * L < 5.0:
        warnings.warn(f"omega L = {p.omega * L:.3g} < 5: the large-size form is unreliable",
                      RuntimeWarning, stacklevel=2)
    return _harmonic_endpoint_factor(p) * math.exp(-0.5 * p.omega * L) * omega_infinity(p) * L


def infinite_size_report(p: DoubleWellParams, L: float | None = None, kB: float = 1.0) -> TunnelingReport:
    """Kink-based report; the amplitude is filled in only when ``L`` is given."""
    A = asymptotic_action(p)
    w_inf = omega_infinity(p)
    ledger = {
        "classical_weight": math.exp(-A / p.hbar),
        "fluctuation_factor": 2.0 * math.sqrt(3.0) * p.omega,
        "collective_coordinate": math.sqrt(A / (2.0 * math.pi * p.hbar)),
    }
    notes = []
    amplitude = math.nan
    if L is not None:
        if p.omega * L < 5.0:
            notes.append(f"omega L = {p.omega * L:.3g} < 5: the large-size form is unreliable")
        ledger["endpoint_wavefunctions"] = _harmonic_endpoint_factor(p)
        ledger["harmonic_decay"] = math.exp(-0.5 * p.omega * L)
        ledger["size"] = float(L)
        amplitude = math.prod(ledger.values())
    size = math.inf if L is None else float(L)
    return TunnelingReport(
        params=p, L=size, temperature=size_to_temperature(p, size, kB),
        convention="infinite-size (harmonic end-point normalisation)",
        E=0.0, kappa=0.5, s_squared=1.0, action=A, zero_mode_norm_sq=A / p.M,
        det_ratio=None, omega_tunnel=w_inf, amplitude=amplitude,
        omega_infinity=w_inf, omega_infinity_well=omega_infinity(p, p.well_frequency),
        ledger=ledger, warnings=notes,
    )


def amplitude_finite(p: DoubleWellParams, L: float, n_points: int = DEFAULT_GRID,
                     method: str = "both", kB: float = 1.0,
                     tolerance: float = 0.02) -> TunnelingReport:
    """Finite-size one-instanton amplitude and tunneling frequency ``Omega(L)``.

    Pipeline: boundary-condition energy ``E(L)`` -> elliptic background ->
    action and zero-mode norm on ``[-L/2, L/2]`` -> determinant ratio ->
    ``Omega(L)`` -> amplitude.

    Raises
    ------
    NoInstantonError
        If no instanton connects the minima in time ``L``.
    DeterminantMismatchError
        If ``method="both"`` and the two determinant routes disagree.
    """
    L = float(L)
    inst = solve_energy_for_size(p, L)
    A = classical_action(inst)
    norm = zero_mode_norm_sq(inst)
    det = regularized_ratio(build_stability_operator(inst), omega=p.well_frequency,
                            method=method, n_points=n_points, tolerance=tolerance)
    classical_weight = math.exp(-A / p.hbar)
    collective = math.sqrt(p.M * norm / (2.0 * math.pi * p.hbar))
    fluct = math.sqrt(abs(det.ratio))
    omega_L = classical_weight * collective * fluct
    ledger = {
        "classical_weight": classical_weight,
        "collective_coordinate": collective,
        "fluctuation_ratio": fluct,
        "free_normalisation": math.sqrt(p.M / (2.0 * math.pi * p.hbar * L)),
        "harmonic_prefactor": 1.0 / (2.0 * math.sinh(0.5 * p.omega * L)),
        "size": L,
    }
    amplitude = math.prod(ledger.values())
    notes = [f"harmonic determinant convention -4 sinh^2(omega L/2) = "
             f"{harmonic_determinant(p.omega, L)!r}; the ratio uses |.|"]
    return TunnelingReport(
        params=p, L=L, temperature=size_to_temperature(p, L, kB),
        convention="finite-size (free-particle normalisation)",
        E=inst.E, kappa=inst.kappa, s_squared=inst.s.s_squared, action=A,
        zero_mode_norm_sq=norm, det_ratio=det, omega_tunnel=omega_L, amplitude=amplitude,
        omega_infinity=omega_infinity(p), omega_infinity_well=omega_infinity(p, p.well_frequency),
        ledger=ledger, warnings=notes,
    )
