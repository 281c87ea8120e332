"""Tunneling frequency Omega(L) from small to large time extent.

Omega(L) approaches the infinite-size value built with the well curvature
frequency; the bare-omega value is smaller by sqrt(2). Both are printed.
"""

import numpy as np

from instantons.propagator import amplitude_finite, amplitude_infinite, omega_infinity
from instantons.model import DoubleWellParams

p = DoubleWellParams()
w_bare = omega_infinity(p)
w_well = omega_infinity(p, p.well_frequency)
print(f"Omega_inf (omega) = {w_bare:.10f}   Omega_inf (omega_h) = {w_well:.10f}\n")
print("  omega L     Omega(L)   Omega(L)/Omega_inf(omega_h)   finite amplitude   large-L amplitude")
for wL in np.geomspace(0.5, 32.0, 7):
    r = amplitude_finite(p, wL, method="spectral")
    large = amplitude_infinite(p, wL) if wL >= 5 else float("nan")
    print(f"  {wL:7.2f}  {r.omega_tunnel:10.7f}  {r.omega_tunnel / w_well:14.8f}"
          f"  {r.amplitude:24.6e}  {large:16.6e}")

r = amplitude_finite(p, 8.0)
print("\nfactor ledger at omega L = 8")
for k, v in r.ledger.items():
    print(f"  {k:22s} {v:.10g}")
print(f"  {'product':22s} {r.amplitude:.10g}")
