import numpy as np
import pytest
from hypothesis import given, strategies as st

from invsim import atmosphere as atm
from invsim.errors import DomainError
from invsim.jet import Jet2


@pytest.mark.parametrize("h, rho", [(5000.0, 0.735872), (10000.0, 0.412415)])
def test_density_golden(h, rho):
    assert atm.density(h) == pytest.approx(rho, rel=1e-4)


def test_density_exact_values():
    assert atm.density(5000.0) == pytest.approx(0.7358720912, rel=1e-9)
    assert atm.density(0.0) == pytest.approx(1.225, rel=1e-12)


def test_temperature_and_sound_speed():
    assert atm.temperature(5000.0) == pytest.approx(255.65, abs=1e-9)
    assert atm.speed_of_sound(5000.0) == pytest.approx(320.50, abs=0.005)
    assert atm.mach(150.0, 5000.0) == pytest.approx(0.4680, abs=5e-5)


def test_pressure_is_rho_r_theta():
    assert atm.pressure(5000.0) == pytest.approx(53992.0, rel=1e-3)


def test_geopotential():
    assert atm.geopotential_altitude(5000.0) == pytest.approx(4996.079, abs=0.01)
    assert atm.geopotential_altitude(10000.0) == pytest.approx(9984.328, abs=0.01)
    assert atm.geometric_altitude(atm.geopotential_altitude(7500.0)) == pytest.approx(7500.0, abs=1e-6)


def test_tropopause_formula_at_sea_level_benchmark():
    assert atm.density_tropopause(0.0) == pytest.approx(2.0624, abs=0.001)


def test_continuity_at_tropopause():
    below = atm.density_troposphere(11000.0)
    above = atm.density_tropopause(11000.0)
    assert below == pytest.approx(atm.RHO_TROPOPAUSE, rel=1e-6)
    assert above == pytest.approx(atm.RHO_TROPOPAUSE, rel=1e-12)


@pytest.mark.parametrize("h", [-1.0, 20000.5, float("nan")])
def test_out_of_range(h):
    with pytest.raises(DomainError):
        atm.density(h)


def test_array_matches_scalar():
    hs = np.linspace(0.0, 20000.0, 41)
    arr = atm.density(hs)
    assert np.allclose(arr, [atm.density(float(h)) for h in hs], rtol=1e-14)


def test_jet_density_matches_finite_difference():
    h, eps = 7000.0, 0.5
    j = atm.density(Jet2(h, 1.0, 0.0))
    d1 = (atm.density(h + eps) - atm.density(h - eps)) / (2 * eps)
    d2 = (atm.density(h + eps) - 2 * atm.density(h) + atm.density(h - eps)) / eps ** 2
    assert j.d1 == pytest.approx(d1, rel=1e-6)
    assert j.d2 == pytest.approx(d2, rel=1e-4)


@given(st.floats(0.0, 19999.0))
def test_density_decreases_with_altitude(h):
    assert atm.density(h + 1.0) < atm.density(h)


def test_isothermal_decay_constant():
    # the published 1.5777145e-4 1/m agrees with g / (Theta_tropopause R) to 8 digits
    assert atm.G / (atm.T_TROPOPAUSE * atm.R_AIR) == pytest.approx(1.5777145e-4, rel=1e-8)
