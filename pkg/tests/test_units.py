"""Unit registry and frequency/wavelength/intensity helpers.

Polarizability-unit oracles are rebuilt here from scipy.constants so a
registry sign or inversion slip cannot hide behind its own definition.
"""

import math

import pytest
import scipy.constants as sc

from rydtherm import constants as k
from rydtherm import units


def test_identity_conversion():
    assert units.convert(3.7, "hartree", "hartree") == 3.7


def test_round_trips_exact():
    for unit, dim in units.known_units().items():
        base = next(u for u, d in units.known_units().items() if d == dim)
        x = 0.8231
        there = units.convert(x, base, unit)
        back = units.convert(there, unit, base)
        assert back == pytest.approx(x, rel=1e-14), (unit, dim)


def test_unknown_unit_raises():
    with pytest.raises(units.UnitError):
        units.convert(1.0, "hartree", "parsec")


def test_cross_dimension_raises():
    with pytest.raises(units.UnitError):
        units.convert(1.0, "hartree", "au_pol")


def test_energy_hz_scale():
    assert units.convert(1.0, "hartree", "hz") == pytest.approx(
        k.HARTREE_HZ, rel=1e-12
    )


def test_wavelength_omega_round_trip():
    lam = 1203.0
    omega = units.wavelength_nm_to_omega_au(lam)
    assert units.omega_au_to_wavelength_nm(omega) == pytest.approx(lam, rel=1e-13)


def test_omega_one_au_wavelength():
    # hbar omega = 1 hartree corresponds to 2 pi a0 / alpha = 45.5633... nm
    lam = 2.0 * math.pi * k.BOHR_M * k.C_AU * 1e9
    assert units.wavelength_nm_to_omega_au(lam) == pytest.approx(1.0, rel=1e-12)


def test_frequency_omega_maps_hartree():
    assert units.frequency_hz_to_omega_au(k.HARTREE_HZ) == pytest.approx(
        1.0, rel=1e-12
    )
    assert units.omega_au_to_frequency_hz(1.0) == pytest.approx(
        k.HARTREE_HZ, rel=1e-12
    )


def test_intensity_to_field_sq_oracle():
    # I = (1/2) eps0 c E0^2 for E(t) = E0 cos(wt); 1 kW/cm^2 = 1e7 W/m^2
    e0_sq_si = 2.0 * 1.0e7 / (sc.epsilon_0 * sc.c)
    expected_au = e0_sq_si / k.ATOMIC_FIELD_V_PER_M**2
    assert units.intensity_kw_cm2_to_field_sq_au(1.0) == pytest.approx(
        expected_au, rel=1e-10
    )


def test_polarizability_hz_m2_v2_oracle():
    # 1 a.u. of alpha shifts a level by -(1/2) E^2 hartree per (a.u. field)^2;
    # expressed per (V/m)^2 that is HARTREE_HZ / ATOMIC_FIELD^2 in Hz
    expected = k.HARTREE_HZ / k.ATOMIC_FIELD_V_PER_M**2
    assert units.convert(1.0, "au_pol", "hz_m2_v2") == pytest.approx(
        expected, rel=1e-12
    )
    assert expected == pytest.approx(2.48832e-8, rel=1e-5)


def test_polarizability_khz_per_kw_cm2_oracle():
    # light shift of a low-field seeker: -(1/4) alpha E0^2, so alpha = 1 a.u.
    # at 1 kW/cm^2 gives a small negative kHz-scale shift
    e0_sq_au = units.intensity_kw_cm2_to_field_sq_au(1.0)
    expected = -0.25 * e0_sq_au * k.HARTREE_HZ / 1.0e3
    got = units.convert(1.0, "au_pol", "khz_per_kw_cm2")
    assert got == pytest.approx(expected, rel=1e-12)
    assert got == pytest.approx(-0.046870, rel=1e-4)


def test_khz_slope_regression():
    # regression: the registry factor must be "a.u. per unit", so a
    # -2751 a.u. polarizability reads as a +128.9 kHz/(kW/cm^2) trap
    assert units.convert(-2751.0, "au_pol", "khz_per_kw_cm2") == pytest.approx(
        128.94, rel=1e-3
    )


def test_negative_wavelength_rejected():
    with pytest.raises(ValueError):
        units.wavelength_nm_to_omega_au(-500.0)
    with pytest.raises(ValueError):
        units.wavelength_nm_to_omega_au(0.0)
