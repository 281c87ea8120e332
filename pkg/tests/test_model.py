import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instantons.model import (
    DoubleWellParams,
    d_potential,
    dd_potential,
    potential,
    potential_expanded,
    size_to_temperature,
    temperature_to_size,
)

positive = st.floats(0.05, 20.0)


def test_defaults_and_derived_a():
    p = DoubleWellParams()
    assert (p.M, p.omega, p.delta, p.hbar) == (1.0, 1.0, 1.0, 1.0)
    assert p.a == 1.0
    q = DoubleWellParams(M=2.0, omega=3.0, delta=0.5)
    assert q.a == pytest.approx(math.sqrt(2.0 * 9.0 / 0.5), rel=1e-15)


def test_a_cannot_be_set():
    with pytest.raises(TypeError):
        DoubleWellParams(a=2.0)


@pytest.mark.parametrize("field", ["M", "omega", "delta", "hbar"])
@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_params_must_be_positive(field, bad):
    with pytest.raises(ValueError):
        DoubleWellParams(**{field: bad})


def test_potential_examples():
    p = DoubleWellParams()
    assert potential(p, 1.0) == 0.0
    assert potential(p, -1.0) == 0.0
    assert potential(p, 0.0) == pytest.approx(p.delta * p.a ** 4 / 4, rel=1e-15)
    assert potential(p, 0.5) == pytest.approx(0.140625, rel=1e-15)
    q = DoubleWellParams(M=1.7, omega=0.6, delta=2.3)
    assert potential(q, 0.0) == pytest.approx(q.barrier_height, rel=1e-15)


def test_expanded_equals_factored_random():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        p = DoubleWellParams(*rng.uniform(0.1, 5.0, 3))
        x = rng.uniform(-3, 3) * p.a
        fac, exp = potential(p, x), potential_expanded(p, x)
        # Relative to the barrier scale: the expanded form cancels near +-a.
        assert abs(fac - exp) <= 1e-12 * max(abs(fac), p.barrier_height)


@settings(max_examples=200, deadline=None)
@given(M=positive, omega=positive, delta=positive, x=st.floats(-50, 50))
def test_parity_exact(M, omega, delta, x):
    p = DoubleWellParams(M, omega, delta)
    assert potential(p, x) == potential(p, -x)


def test_d_potential_examples():
    p = DoubleWellParams()
    assert d_potential(p, 0.0) == 0.0
    assert d_potential(p, 1.0) == 0.0
    assert d_potential(p, -1.0) == 0.0
    assert d_potential(p, 0.5) == pytest.approx(-0.375, rel=1e-15)


@settings(max_examples=200, deadline=None)
@given(M=positive, omega=positive, delta=positive, t=st.floats(-2.0, 2.0))
def test_d_potential_matches_finite_difference(M, omega, delta, t):
    p = DoubleWellParams(M, omega, delta)
    x = t * p.a
    h = 1e-5 * p.a
    fd = (potential(p, x + h) - potential(p, x - h)) / (2 * h)
    exact = d_potential(p, x)
    assert exact == pytest.approx(p.delta * x ** 3 - p.M * p.omega ** 2 * x, rel=1e-12, abs=1e-12 * p.M * p.omega ** 2 * p.a)
    assert abs(fd - exact) <= 1e-6 * max(abs(exact), p.M * p.omega ** 2 * p.a)


def test_dd_potential_examples():
    p = DoubleWellParams(M=1.3, omega=0.7, delta=0.9)
    assert dd_potential(p, p.a) == pytest.approx(2 * p.M * p.omega ** 2, rel=1e-15)
    assert dd_potential(p, -p.a) == pytest.approx(2 * p.M * p.omega ** 2, rel=1e-15)
    assert dd_potential(p, 0.0) == pytest.approx(-p.M * p.omega ** 2, rel=1e-15)
    assert dd_potential(p, p.a / math.sqrt(3)) == pytest.approx(0.0, abs=1e-15)
    assert p.well_frequency ** 2 == pytest.approx(dd_potential(p, p.a) / p.M, rel=1e-15)


def test_vectorised_evaluation():
    p = DoubleWellParams()
    x = np.linspace(-2, 2, 11)
    np.testing.assert_array_equal(potential(p, x), [potential(p, v) for v in x])
    assert isinstance(potential(p, 0.3), float)


def test_temperature_map():
    p = DoubleWellParams()
    assert temperature_to_size(p, 0.1) == pytest.approx(10.0, rel=1e-15)
    assert temperature_to_size(p, 2.0) == 0.5
    assert temperature_to_size(p, 1e-300) > 1e299
    assert size_to_temperature(p, 10.0) == pytest.approx(0.1, rel=1e-15)
    assert size_to_temperature(p, math.inf) == 0.0
    q = DoubleWellParams(hbar=2.0)
    assert temperature_to_size(q, 0.5, kB=4.0) == 1.0


@pytest.mark.parametrize("T", [0.0, -1.0])
def test_temperature_must_be_positive(T):
    with pytest.raises(ValueError):
        temperature_to_size(DoubleWellParams(), T)


def test_params_frozen():
    p = DoubleWellParams()
    with pytest.raises(AttributeError):
        p.M = 2.0
