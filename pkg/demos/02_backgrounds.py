"""Finite-size instantons: energy, shape and action as the time extent grows."""

import numpy as np

from instantons.action import asymptotic_action, classical_action
from instantons.background import KinkPath, solve_energy_for_size
from instantons.model import DoubleWellParams

p = DoubleWellParams()
A_inf = asymptotic_action(p)
print(f"kink action A_inf = {A_inf:.15f}\n")
print("  omega L        E(L)        1-s^2      A(L) - A_inf   x(L/2) - a")
for wL in (1.0, 2.0, 5.0, 10.0, 20.0, 30.0):
    f = solve_energy_for_size(p, wL / p.omega)
    print(f"  {wL:7.1f}  {f.E:12.4e}  {f.s.complement:11.3e}  {classical_action(f) - A_inf:12.3e}"
          f"  {f.position(0.5 * f.L) - p.a:10.1e}")

print("\nprofile at omega L = 10 against the kink")
f = solve_energy_for_size(p, 10.0)
k = KinkPath(p)
for tau in np.linspace(0.0, 5.0, 6):
    print(f"  tau = {tau:3.1f}   x = {f.position(tau):.10f}   kink = {k.position(tau):.10f}")
