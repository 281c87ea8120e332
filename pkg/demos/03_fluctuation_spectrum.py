"""Fluctuation spectrum around the kink and its determinant ratio.

The bound states sit at 0 and 3/4 of the well curvature omega_h^2 = 2 omega^2;
the continuum starts at omega_h^2.
"""

from instantons.background import KinkPath, solve_energy_for_size
from instantons.fluctuation import build_stability_operator, regularized_ratio, spectrum_finite_difference
from instantons.model import DoubleWellParams

p = DoubleWellParams()
w_h2 = p.well_frequency ** 2
op = build_stability_operator(KinkPath(p), L=30.0)
ev = spectrum_finite_difference(op, 4096, extrapolate=True).eigenvalues
print("lowest kink eigenvalues at omega L = 30, in units of omega_h^2")
for n, e in enumerate(ev[:6]):
    print(f"  eps_{n} = {e / w_h2: .8f}")

r = regularized_ratio(op)
print(f"\ndet h / det' O = {r.ratio:.8f}  (12 omega_h^2 = {12 * w_h2:g}); Gelfand-Yaglom gives {r.cross_check:.8f}")

print("\nratio for finite instantons")
for wL in (1.0, 3.0, 6.0, 10.0, 20.0):
    r = regularized_ratio(build_stability_operator(solve_energy_for_size(p, wL)))
    print(f"  omega L = {wL:5.1f}   ratio = {r.ratio:.8f}   routes differ by {abs(r.ratio - r.cross_check) / r.ratio:.1e}")
