"""Jacobi functions near the unit modulus, where the finite-size instantons live.

Finite instantons with omega L of a few tens have 1 - s^2 ~ exp(-omega L),
so sn, cn, dn must keep relative accuracy where they look almost hyperbolic.
"""

import math

from instantons.elliptic import EllipticModulus, complete_K, incomplete_F, jacobi_sn_cn_dn

print("complete K(s) as the complementary parameter shrinks")
for mc in (1e-1, 1e-4, 1e-10, 1e-30, 1e-100):
    s = EllipticModulus.from_complement(mc)
    # K ~ ln(4/sqrt(mc)) for small mc
    print(f"  1-s^2 = {mc:8.0e}   K = {complete_K(s):12.6f}   ln(4/sqrt(1-s^2)) = {math.log(4 / math.sqrt(mc)):12.6f}")

print("\ncn(u) vs sech(u) at 1-s^2 = 1e-20: they separate only as u nears K")
s = EllipticModulus.from_complement(1e-20)
K = complete_K(s)
for u in (1.0, 5.0, 0.5 * K, K - 2.0, K - 0.1):
    sn, cn, dn = jacobi_sn_cn_dn(u, s)
    print(f"  u = {u:8.4f}   cn = {cn:.6e}   sech = {1 / math.cosh(u):.6e}")

print("\nF inverts sn: sin(theta) recovered from sn(F(theta))")
s = EllipticModulus.from_parameter(0.9)
for th in (0.2, 0.8, 1.4):
    u = incomplete_F(th, s)
    print(f"  theta = {th}   F = {u:.12f}   sn(F) - sin(theta) = {jacobi_sn_cn_dn(u, s).sn - math.sin(th):.1e}")
