import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from instantons.elliptic import (
    DegenerateModulusError,
    EllipticModulus,
    complete_K,
    double_argument,
    incomplete_F,
    incomplete_F_sincos,
    jacobi_sn_cn_dn,
)


def F_quad(theta, m):
    val, _ = integrate.quad(lambda t: 1.0 / math.sqrt(1.0 - m * math.sin(t) ** 2), 0.0, theta,
                            epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


# --- modulus ---------------------------------------------------------------

def test_modulus_stores_both_parameters():
    s = EllipticModulus.from_complement(1e-20)
    assert s.complement == 1e-20
    assert s.s_squared == 1.0
    assert EllipticModulus.from_s(0.5).s_squared == 0.25
    assert EllipticModulus.from_parameter(0.3).s == pytest.approx(math.sqrt(0.3), rel=1e-15)


@pytest.mark.parametrize("m", [-1e-3, 1.0 + 1e-3, math.nan])
def test_modulus_domain(m):
    with pytest.raises(ValueError):
        EllipticModulus.from_parameter(m)


def test_modulus_rejects_inconsistent_pair():
    with pytest.raises(ValueError):
        EllipticModulus(0.5, 0.4)


# --- complete K ------------------------------------------------------------

def test_K_at_zero_is_half_pi():
    assert complete_K(EllipticModulus.from_parameter(0.0)) == pytest.approx(math.pi / 2, rel=1e-15)


def test_K_at_half():
    oracle = F_quad(math.pi / 2, 0.5)
    assert oracle == pytest.approx(1.8540746773, abs=1e-10)
    assert complete_K(EllipticModulus.from_parameter(0.5)) == pytest.approx(oracle, rel=1e-12)


@pytest.mark.parametrize("m", [0.01, 0.2, 0.5, 0.9, 0.999, 1 - 1e-9])
def test_K_against_scipy(m):
    assert complete_K(EllipticModulus.from_parameter(m)) == pytest.approx(special.ellipk(m), rel=1e-12)


def test_K_near_one_uses_complement():
    for mc in (1e-20, 1e-100, 1e-300):
        s = EllipticModulus.from_complement(mc)
        with mpmath.workdps(400):
            ref = float(mpmath.ellipk(1 - mpmath.mpf(mc)))
        assert complete_K(s) == pytest.approx(ref, rel=1e-13)


def test_K_monotone_and_unbounded():
    mcs = np.geomspace(1.0, 1e-300, 60)
    K = [complete_K(EllipticModulus.from_complement(mc)) for mc in mcs]
    assert all(b > a for a, b in zip(K, K[1:]))
    assert K[-1] > 300


def test_K_degenerate():
    with pytest.raises(DegenerateModulusError):
        complete_K(EllipticModulus.from_parameter(1.0))


# --- incomplete F ----------------------------------------------------------

def test_F_zero_angle():
    for m in (0.0, 0.4, 1.0):
        assert incomplete_F(0.0, EllipticModulus.from_parameter(m)) == 0.0


@pytest.mark.parametrize("m", [0.0, 0.3, 0.8, 0.9999])
def test_F_quarter_is_K(m):
    s = EllipticModulus.from_parameter(m)
    assert incomplete_F(math.pi / 2, s) == pytest.approx(complete_K(s), rel=1e-13)


def test_F_reference_point():
    assert incomplete_F(0.7, EllipticModulus.from_parameter(0.3)) == pytest.approx(F_quad(0.7, 0.3), abs=1e-10)


@settings(max_examples=200, deadline=None)
@given(theta=st.floats(-3 * math.pi, 3 * math.pi), m=st.floats(0.0, 0.999))
def test_F_matches_quadrature(theta, m):
    s = EllipticModulus.from_parameter(m)
    assert incomplete_F(theta, s) == pytest.approx(F_quad(theta, m), abs=1e-10, rel=1e-12)


def test_F_quasi_periodic_and_odd():
    s = EllipticModulus.from_parameter(0.6)
    K = complete_K(s)
    for th in (0.1, 0.9, 1.4):
        assert incomplete_F(th + math.pi, s) == pytest.approx(incomplete_F(th, s) + 2 * K, rel=1e-14)
        assert incomplete_F(-th, s) == -incomplete_F(th, s)


def test_F_hyperbolic_limit():
    # s = 1: F = artanh(sin theta)
    s = EllipticModulus.from_parameter(1.0)
    for th in (0.2, 1.0, 1.5):
        assert incomplete_F(th, s) == pytest.approx(math.atanh(math.sin(th)), rel=1e-13)
    with pytest.raises(DegenerateModulusError):
        incomplete_F_sincos(1.0, 0.0, s)


def test_F_vectorised():
    s = EllipticModulus.from_parameter(0.4)
    th = np.linspace(-4.0, 4.0, 9)
    np.testing.assert_allclose(incomplete_F(th, s), [incomplete_F(t, s) for t in th], rtol=1e-15)


# --- Jacobi functions ------------------------------------------------------

def test_jacobi_against_scipy():
    rng = np.random.default_rng(1)
    for _ in range(300):
        m, u = rng.uniform(0, 1), rng.uniform(-30, 30)
        sn, cn, dn = jacobi_sn_cn_dn(u, EllipticModulus.from_parameter(m))
        ref = special.ellipj(u, m)
        assert sn == pytest.approx(ref[0], abs=1e-11)
        assert cn == pytest.approx(ref[1], abs=1e-11)
        assert dn == pytest.approx(ref[2], abs=1e-11)


def test_jacobi_circular_limit():
    u = np.linspace(-7, 7, 29)
    sn, cn, dn = jacobi_sn_cn_dn(u, EllipticModulus.from_parameter(0.0))
    np.testing.assert_allclose(sn, np.sin(u), atol=1e-15)
    np.testing.assert_allclose(cn, np.cos(u), atol=1e-15)
    np.testing.assert_array_equal(dn, 1.0)


def test_jacobi_hyperbolic_limit():
    u = np.linspace(-20, 20, 41)
    sn, cn, dn = jacobi_sn_cn_dn(u, EllipticModulus.from_parameter(1.0))
    np.testing.assert_allclose(sn, np.tanh(u), rtol=1e-15)
    np.testing.assert_allclose(cn, 1 / np.cosh(u), rtol=1e-15)
    np.testing.assert_allclose(dn, 1 / np.cosh(u), rtol=1e-15)


def test_jacobi_at_quarter_period():
    for m in (0.1, 0.5, 0.99):
        s = EllipticModulus.from_parameter(m)
        sn, cn, _ = jacobi_sn_cn_dn(complete_K(s), s)
        assert sn == pytest.approx(1.0, abs=1e-15)
        assert cn == pytest.approx(0.0, abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(theta=st.floats(1e-6, math.pi / 2 - 1e-6), m=st.floats(0.0, 1.0))
def test_jacobi_inverts_F(theta, m):
    s = EllipticModulus.from_parameter(m)
    sn, cn, _ = jacobi_sn_cn_dn(incomplete_F(theta, s), s)
    assert sn == pytest.approx(math.sin(theta), abs=1e-10)
    assert cn == pytest.approx(math.cos(theta), abs=1e-10)


def test_pythagorean_identities_random():
    rng = np.random.default_rng(2024)
    m = rng.uniform(0.0, 1.0, 10_000)
    u = rng.uniform(-50.0, 50.0, 10_000)
    worst_a = worst_b = 0.0
    for mi, ui in zip(m, u):
        sn, cn, dn = jacobi_sn_cn_dn(ui, EllipticModulus.from_parameter(mi))
        worst_a = max(worst_a, abs(sn * sn + cn * cn - 1.0))
        worst_b = max(worst_b, abs(dn * dn + mi * sn * sn - 1.0))
    assert worst_a < 1e-12
    assert worst_b < 1e-12


@settings(max_examples=200, deadline=None)
@given(u=st.floats(-15, 15), m=st.floats(0.0, 1.0))
def test_double_argument(u, m):
    s = EllipticModulus.from_parameter(m)
    t = jacobi_sn_cn_dn(u, s)
    d = double_argument(t, s)
    direct = jacobi_sn_cn_dn(2 * u, s)
    assert float(d.sn) == pytest.approx(direct.sn, abs=1e-10)
    assert float(d.cn) == pytest.approx(direct.cn, abs=1e-10)
    assert float(d.dn) == pytest.approx(direct.dn, abs=1e-10)


@settings(max_examples=100, deadline=None)
@given(u=st.floats(-10, 10), m=st.floats(0.0, 0.999999))
def test_quasi_periodicity(u, m):
    s = EllipticModulus.from_parameter(m)
    K = complete_K(s)
    sn = jacobi_sn_cn_dn(u, s).sn
    assert jacobi_sn_cn_dn(u + 2 * K, s).sn == pytest.approx(-sn, abs=1e-10)
    assert jacobi_sn_cn_dn(u + 4 * K, s).sn == pytest.approx(sn, abs=1e-10)


def test_limit_continuity():
    s = EllipticModulus.from_parameter(1 - 1e-9)
    u = np.linspace(-5, 5, 201)
    sn, cn, dn = jacobi_sn_cn_dn(u, s)
    sech = 1 / np.cosh(u)
    assert np.max(np.abs(sn - np.tanh(u))) < 1e-4
    assert np.max(np.abs(cn - sech)) < 1e-4
    assert np.max(np.abs(dn - sech)) < 1e-4


@pytest.mark.parametrize("mc", [1e-13, 1e-15, 1e-24, 1e-60, 1e-300])
def test_relative_accuracy_near_unit_modulus(mc):
    # The O(1 - s^2) corrections are amplified like exp(2u) in sn dn / cn;
    # relative accuracy must survive where cn is tiny.
    s = EllipticModulus.from_complement(mc)
    with mpmath.workdps(400):
        m = 1 - mpmath.mpf(mc)
        K = float(mpmath.ellipk(m))
        for u in (0.3, 3.0, 0.5 * K, K - 1.0, K + 1.0, 2 * K - 0.5):
            sn, cn, dn = jacobi_sn_cn_dn(u, s)
            for got, name in ((sn, "sn"), (cn, "cn"), (dn, "dn")):
                ref = float(mpmath.ellipfun(name, u, m=m))
                assert got == pytest.approx(ref, rel=1e-13)


def test_jacobi_vectorised_and_scalar_types():
    s = EllipticModulus.from_parameter(0.7)
    t = jacobi_sn_cn_dn(0.4, s)
    assert all(isinstance(v, float) for v in t)
    arr = jacobi_sn_cn_dn(np.array([0.4, 0.0, -0.4]), s)
    assert arr.sn[0] == t.sn and arr.sn[1] == 0.0 and arr.sn[2] == -t.sn
