"""Elliptic integrals of the first kind and Jacobi elliptic functions.

Everything here works with the parameter ``m = s**2`` and keeps the
complementary parameter ``mc = 1 - m`` as an independent number, because the
instanton backgrounds live extremely close to ``m = 1`` where ``1 - m``
cannot be recovered by subtraction.

* :func:`complete_K` uses the arithmetic-geometric mean.
* :func:`incomplete_F` uses Carlson's symmetric integral R_F with range
  reduction by quasi-periodicity.
* :func:`jacobi_sn_cn_dn` uses the descending Landen (Gauss) transformation
  in Bulirsch's formulation, which tracks ``cn/sn`` multiplicatively and
  therefore keeps relative accuracy where ``cn`` is small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "DegenerateModulusError",
    "EllipticModulus",
    "JacobiTriple",
    "complete_K",
    "incomplete_F",
    "incomplete_F_sincos",
    "jacobi_sn_cn_dn",
    "double_argument",
]

_EPS = np.finfo(float).eps
_SMALL_ARGUMENT = 1e-5


class DegenerateModulusError(ArithmeticError):
    """Raised when a quantity diverges at ``s**2 = 1``."""


@dataclass(frozen=True)
class EllipticModulus:
    """Elliptic modulus ``s`` stored as ``(s**2, 1 - s**2)``.

    Use :meth:`from_s`, :meth:`from_parameter` or :meth:`from_complement`
    rather than the raw constructor unless both numbers are already known
    to full precision.
    """

    s_squared: float
    complement: float

    def __post_init__(self):
        m, mc = float(self.s_squared), float(self.complement)
        if not (0.0 <= m <= 1.0 and 0.0 <= mc <= 1.0):
            raise ValueError(f"modulus outside [0, 1]: s^2={m!r}, 1-s^2={mc!r}")
        if abs(m + mc - 1.0) > 4 * _EPS:
            raise ValueError(f"inconsistent modulus pair: {m!r} + {mc!r} != 1")
        object.__setattr__(self, "s_squared", m)
        object.__setattr__(self, "complement", mc)

    @classmethod
    def from_s(cls, s: float) -> EllipticModulus:
        return cls.from_parameter(float(s) ** 2)

    @classmethod
    def from_parameter(cls, m: float) -> EllipticModulus:
        m = float(m)
        if not 0.0 <= m <= 1.0:
            raise ValueError(f"s^2 must lie in [0, 1], got {m!r}")
        return cls(m, 1.0 - m)

    @classmethod
    def from_complement(cls, mc: float) -> EllipticModulus:
        mc = float(mc)
        if not 0.0 <= mc <= 1.0:
            raise ValueError(f"1 - s^2 must lie in [0, 1], got {mc!r}")
        return cls(1.0 - mc, mc)

    @property
    def s(self) -> float:
        return math.sqrt(self.s_squared)


class JacobiTriple(NamedTuple):
    sn: np.ndarray | float
    cn: np.ndarray | float
    dn: np.ndarray | float


def _agm(a: float, b: float) -> float:
    for _ in range(64):
        if abs(a - b) <= 2 * _EPS * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def complete_K(s: EllipticModulus) -> float:
    """Quarter period ``K(s) = F(pi/2, s)`` via ``pi / (2 AGM(1, s'))``."""
    if s.complement == 0.0:
        raise DegenerateModulusError("K(s) diverges at s^2 = 1")
    return math.pi / (2.0 * _agm(1.0, math.sqrt(s.complement)))


def _carlson_rf(x, y, z):
    """Carlson's R_F(x, y, z) for non-negative arguments, at most one zero."""
    x, y, z = np.broadcast_arrays(
        *(np.array(v, dtype=float) for v in (x, y, z)))
    x0, y0 = x, y
    A0 = (x + y + z) / 3.0
    A = A0.copy()
    Q = (3 * _EPS) ** (-1.0 / 8.0) * np.maximum(
        np.abs(A0 - x), np.maximum(np.abs(A0 - y), np.abs(A0 - z)))
    scale = 1.0
    for _ in range(200):
        if np.all(Q / scale < np.abs(A)):
            break
        sx, sy, sz = np.sqrt(x), np.sqrt(y), np.sqrt(z)
        lam = sx * sy + sy * sz + sz * sx
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        A = 0.25 * (A + lam)
        scale *= 4.0
    else:
        raise ArithmeticError("R_F duplication did not converge")
    X = (A0 - x0) / (scale * A)
    Y = (A0 - y0) / (scale * A)
    Z = -(X + Y)
    E2 = X * Y - Z * Z
    E3 = X * Y * Z
    series = (1.0 - E2 / 10 + E3 / 14 + E2 * E2 / 24 - 3 * E2 * E3 / 44
              - 5 * E2 ** 3 / 208 + 3 * E3 * E3 / 104 + E2 * E2 * E3 / 16)
    return series / np.sqrt(A)


def incomplete_F_sincos(sin_theta, cos_theta, s: EllipticModulus):
    """``F(theta, s)`` for ``theta`` in ``[-pi/2, pi/2]`` given ``sin`` and ``cos``.

    Callers that know ``cos(theta)`` analytically (for instance when
    ``theta`` is within rounding of ``pi/2``) should use this entry point;
    ``1 - s^2 sin^2`` is formed as ``cos^2 + (1 - s^2) sin^2`` so nothing
    cancels.
    """
    sn = np.asarray(sin_theta, dtype=float)
    cs = np.abs(np.asarray(cos_theta, dtype=float))
    c2 = cs * cs
    d2 = c2 + s.complement * sn * sn
    if np.any((c2 == 0.0) & (d2 == 0.0)):
        raise DegenerateModulusError("F(pi/2, s) diverges at s^2 = 1")
    out = sn * _carlson_rf(c2, d2, 1.0)
    return out if out.ndim else float(out)


def incomplete_F(theta, s: EllipticModulus):
    """Incomplete elliptic integral of the first kind ``F(theta, s)``.

    Any real ``theta`` is accepted; arguments outside ``[-pi/2, pi/2]`` are
    reduced with ``F(theta + n pi) = F(theta) + 2 n K(s)``.
    """
    theta = np.asarray(theta, dtype=float)
    n = np.rint(theta / math.pi)
    r = theta - n * math.pi
    base = np.asarray(incomplete_F_sincos(np.sin(r), np.cos(r), s))
    if np.any(n != 0):
        base = base + 2.0 * n * complete_K(s)
    return base if base.ndim else float(base)


def _hyperbolic(u):
    with np.errstate(over="ignore"):
        sech = 1.0 / np.cosh(u)
    return np.tanh(u), sech, sech.copy()


def jacobi_sn_cn_dn(u, s: EllipticModulus) -> JacobiTriple:
    """Jacobi ``(sn, cn, dn)`` at real argument(s) ``u`` for modulus ``s``.

    Vectorised over ``u``. The Gauss transform is run on the stored
    complement, so it keeps full relative accuracy for ``1 - s^2`` down to
    the smallest normal double; only ``1 - s^2 == 0`` switches to the exact
    limits ``(tanh, sech, sech)``. Near ``s = 1`` a first-order correction
    in ``1 - s^2`` is amplified like ``exp(2u)``, so truncating to the limit
    early would not be safe.
    """
    u = np.asarray(u, dtype=float)
    mc = s.complement
    if mc == 0.0:
        sn, cn, dn = _hyperbolic(u)
    else:
        # AGM chain of the descending Gauss transformation.
        means, roots = [], []
        a, emc = 1.0, mc
        for _ in range(32):
            means.append(a)
            emc = math.sqrt(emc)
            roots.append(emc)
            c = 0.5 * (a + emc)
            if abs(a - emc) <= 1e-8 * a:
                break
            emc *= a
            a = c
        v = u * c
        sin_v, cos_v = np.sin(v), np.cos(v)
        nonzero = sin_v != 0.0
        safe = np.where(nonzero, sin_v, 1.0)
        with np.errstate(over="ignore", invalid="ignore"):
            # Overflow only at tiny |u|, which the series below replaces.
            ratio = cos_v / safe
            cc = c * ratio
            dn = np.ones_like(v)
            aa = ratio
            for b, e in zip(reversed(means), reversed(roots)):
                aa = aa * cc
                cc = cc * dn
                dn = (e + aa) / (b + aa)
                aa = cc / b
            mag = 1.0 / np.hypot(cc, 1.0)
            sn_nz = np.where(sin_v >= 0.0, mag, -mag)
            sn = np.where(nonzero, sn_nz, 0.0)
            cn = np.where(nonzero, cc * sn_nz, cos_v)
            dn = np.where(nonzero, dn, 1.0)
        # cot(v) squared overflows the recursion as u -> 0; the Taylor
        # series is exact to rounding below this threshold.
        small = np.abs(u) < _SMALL_ARGUMENT
        if np.any(small):
            us = np.where(small, u, 0.0)
            u2 = us * us
            m = s.s_squared
            sn = np.where(small, us * (1.0 - (1.0 + m) * u2 / 6.0), sn)
            cn = np.where(small, 1.0 - 0.5 * u2 + (1.0 + 4.0 * m) * u2 * u2 / 24.0, cn)
            dn = np.where(small, 1.0 - 0.5 * m * u2 + m * (4.0 + m) * u2 * u2 / 24.0, dn)
    if u.ndim == 0:
        return JacobiTriple(float(sn), float(cn), float(dn))
    return JacobiTriple(sn, cn, dn)


def double_argument(t: JacobiTriple, s: EllipticModulus) -> JacobiTriple:
    """Jacobi functions at ``2u`` from their values at ``u``."""
    sn, cn, dn = (np.asarray(v, dtype=float) for v in t)
    m = s.s_squared
    # 1 - m sn^4 without cancellation near sn = 1.
    den = cn * cn + sn * sn * dn * dn
    return JacobiTriple(
        2.0 * sn * cn * dn / den,
        (cn * cn - sn * sn * dn * dn) / den,
        (dn * dn - m * sn * sn * cn * cn) / den,
    )
