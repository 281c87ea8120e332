import json
import math

import pytest

from instantons.action import asymptotic_action
from instantons.background import NoInstantonError
from instantons.propagator import (
    amplitude_finite,
    amplitude_infinite,
    infinite_size_report,
    omega_infinity,
)
from instantons.model import DoubleWellParams

P = DoubleWellParams()


@pytest.fixture(scope="module")
def finite_reports():
    return {wL: amplitude_finite(P, wL) for wL in (4.0, 8.0, 12.0, 16.0, 20.0)}


# --- infinite size -----------------------------------------------------------

def test_desk_value():
    A = 2 * math.sqrt(2) / 3
    desk = math.exp(-A) * 2 * math.sqrt(3) * math.sqrt(A / (2 * math.pi))
    assert omega_infinity(P) == pytest.approx(desk, rel=1e-12)
    assert omega_infinity(P) == pytest.approx(0.5227, abs=5e-5)


def test_well_frequency_variant():
    assert omega_infinity(P, P.well_frequency) == pytest.approx(math.sqrt(2) * omega_infinity(P), rel=1e-14)


def test_coupling_scaling():
    # halving delta doubles the action and multiplies the prefactor by sqrt(2)
    half = DoubleWellParams(delta=0.5)
    A = asymptotic_action(P)
    assert omega_infinity(half) == pytest.approx(omega_infinity(P) * math.exp(-A) * math.sqrt(2), rel=1e-13)


def test_semiclassical_suppression():
    vals = [omega_infinity(DoubleWellParams(hbar=h)) for h in (1.0, 0.3, 0.1, 0.01)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert omega_infinity(DoubleWellParams(hbar=1e-3)) == 0.0


def test_amplitude_infinite_formula():
    L = 30.0
    expected = math.sqrt(1 / math.pi) * math.exp(-15.0) * omega_infinity(P) * L
    assert amplitude_infinite(P, L) == pytest.approx(expected, rel=1e-14)


def test_amplitude_infinite_linear_in_size():
    scaled = [amplitude_infinite(P, L) * math.exp(0.5 * L) / L for L in (6.0, 20.0, 45.0)]
    assert scaled[1] == pytest.approx(scaled[0], rel=1e-13)
    assert scaled[2] == pytest.approx(scaled[0], rel=1e-13)


def test_amplitude_infinite_warns_small_size():
    with pytest.warns(RuntimeWarning, match="< 5"):
        amplitude_infinite(P, 2.0)


def test_infinite_report():
    r = infinite_size_report(P, L=12.0)
    assert r.amplitude == pytest.approx(amplitude_infinite(P, 12.0), rel=1e-13)
    assert r.amplitude == pytest.approx(math.prod(r.ledger.values()), rel=1e-15)
    assert r.omega_tunnel == omega_infinity(P)
    assert r.zero_mode_norm_sq == pytest.approx(asymptotic_action(P), rel=1e-15)
    bare = infinite_size_report(P)
    assert math.isnan(bare.amplitude) and bare.temperature == 0.0
    assert "size" not in bare.ledger
    assert infinite_size_report(P, L=2.0).warnings


# --- finite size -------------------------------------------------------------

def test_finite_ledger_complete(finite_reports):
    r = finite_reports[8.0]
    assert set(r.ledger) == {"classical_weight", "collective_coordinate", "fluctuation_ratio",
                             "free_normalisation", "harmonic_prefactor", "size"}
    assert r.amplitude == pytest.approx(math.prod(r.ledger.values()), rel=1e-15)
    omega_L = r.ledger["classical_weight"] * r.ledger["collective_coordinate"] * r.ledger["fluctuation_ratio"]
    assert r.omega_tunnel == pytest.approx(omega_L, rel=1e-15)
    assert r.ledger["classical_weight"] == pytest.approx(math.exp(-r.action), rel=1e-15)
    assert r.ledger["fluctuation_ratio"] == pytest.approx(math.sqrt(r.det_ratio.ratio), rel=1e-15)
    assert any("sinh" in w for w in r.warnings)


def test_harmonic_prefactor_value():
    r = amplitude_finite(P, 2.0, method="spectral")
    assert r.ledger["harmonic_prefactor"] == pytest.approx(0.42546, abs=5e-6)
    assert r.ledger["free_normalisation"] == pytest.approx(math.sqrt(1 / (4 * math.pi)), rel=1e-15)


def test_omega_of_size_varies(finite_reports):
    vals = [r.omega_tunnel for r in finite_reports.values()]
    assert all(math.isfinite(v) and v > 0 for v in vals)
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] - vals[0] > 0.1


def test_omega_of_size_limit(finite_reports):
    target = omega_infinity(P, P.well_frequency)
    gaps = [abs(r.omega_tunnel / target - 1) for r in finite_reports.values()]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-5
    assert finite_reports[20.0].omega_infinity_well == target


def test_amplitude_ratio_factorisation(finite_reports):
    # finite / infinite is a ratio of normalisations times Omega(L) / Omega_inf
    for L, r in finite_reports.items():
        if L < 5:
            continue
        factor = (math.sqrt(1 / (2 * math.pi * L)) / (2 * math.sinh(0.5 * L))) / (
            math.sqrt(1 / math.pi) * math.exp(-0.5 * L))
        expected = factor * r.omega_tunnel / omega_infinity(P)
        assert r.amplitude / amplitude_infinite(P, L) == pytest.approx(expected, rel=1e-12)


def test_finite_report_fields(finite_reports):
    r = finite_reports[12.0]
    assert r.temperature == pytest.approx(1 / 12.0, rel=1e-15)
    assert r.E > 0 and 0 < r.s_squared < 1 and r.kappa > 0.5
    assert r.action > asymptotic_action(P)
    assert r.det_ratio.cross_check == pytest.approx(r.det_ratio.ratio, rel=1e-6)
    text = json.dumps(r.to_dict())
    assert json.loads(text)["L"] == 12.0
    assert json.loads(json.dumps(infinite_size_report(P).to_dict()))["L"] == "inf"


def test_temperature_uses_boltzmann_constant():
    r = amplitude_finite(P, 5.0, method="spectral", kB=2.0)
    assert r.temperature == pytest.approx(0.1, rel=1e-15)


def test_no_instanton_propagates():
    with pytest.raises(NoInstantonError):
        amplitude_finite(P, 1e-4)
