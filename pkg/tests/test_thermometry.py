"""Thermometry: sensitivities, inversions, joint fits, error budgets."""

import math

import pytest

from rydtherm.polarizability import static_polarizability
from rydtherm.thermometry import (
    ThermometryError,
    ThermometryMeasurement,
    error_budget,
    invert_temperature,
    joint_solve_temperature_field,
    measurement_budget,
    state_bbr_sensitivity,
    transition_bbr_sensitivity,
    transition_bbr_shift,
    vdw_shift_estimate,
)


def _measure(sr, n, temperature_k, field_v_per_m=0.0, sigma=0.16):
    st = sr.state(n, "3D1")
    offset = transition_bbr_shift(sr, st, temperature_k)
    if field_v_per_m:
        alpha = static_polarizability(st).value_hz_m2_v2
        offset -= 0.5 * alpha * field_v_per_m**2
    return ThermometryMeasurement(st, offset, sigma)


# -- sensitivities -------------------------------------------------------------


def test_transition_sensitivity_near_free_electron(sr):
    sens = transition_bbr_sensitivity(sr, sr.state(30, "3D1"), 300.0)
    assert sens == pytest.approx(16.07, rel=1e-2)


def test_state_sensitivities_n40(sr):
    assert state_bbr_sensitivity(sr.state(40, "3P0"), 300.0) == pytest.approx(
        16.22, rel=1e-2
    )
    assert state_bbr_sensitivity(sr.state(40, "3D1"), 300.0) == pytest.approx(
        16.09, rel=1e-2
    )


def test_sensitivity_zero_at_zero_temperature(sr):
    assert state_bbr_sensitivity(sr.state(30, "3D1"), 0.0) == 0.0


def test_measurement_validation(sr):
    with pytest.raises(ValueError):
        ThermometryMeasurement(sr.state(30, "3D1"), 100.0, 0.0)
    m = ThermometryMeasurement(sr.state(30, "3D1"), 100.0, 0.1)
    assert m.transition_id == "Sr 5 3P0 -> 30 3D1"


# -- single-transition inversion ------------------------------------------------


@pytest.mark.parametrize("true_t", [150.0, 300.0, 380.0])
def test_invert_round_trip(sr, true_t):
    sol = invert_temperature(_measure(sr, 30, true_t))
    assert abs(sol.temperature_k - true_t) < 1e-3
    assert max(abs(r) for r in sol.residuals_hz) < 1e-6
    assert sol.field_v_per_m == 0.0


def test_invert_sigma_is_ten_millikelvin(sr):
    sol = invert_temperature(_measure(sr, 30, 300.0, sigma=0.16))
    assert sol.sigma_temperature_k == pytest.approx(0.010, rel=0.05)


def test_invert_far_seed_still_converges(sr):
    sol = invert_temperature(_measure(sr, 30, 300.0), seed_k=90.0)
    assert abs(sol.temperature_k - 300.0) < 1e-3


def test_invert_zero_offset_lands_cold(sr):
    # a zero offset pins the temperature below where BBR is resolvable
    sol = invert_temperature(_measure(sr, 30, 0.0))
    assert sol.temperature_k < 40.0


def test_invert_out_of_range_offset(sr):
    with pytest.raises(ThermometryError):
        invert_temperature(ThermometryMeasurement(sr.state(30, "3D1"), 1e9, 0.16))


# -- joint temperature + field fit ----------------------------------------------


def test_joint_recovers_temperature_and_field(sr):
    meas = [_measure(sr, n, 300.0, field_v_per_m=5.0) for n in (25, 30)]
    sol = joint_solve_temperature_field(meas)
    assert abs(sol.temperature_k - 300.0) < 3.0 * sol.sigma_temperature_k
    assert abs(sol.field_v_per_m - 5.0) < 3.0 * sol.sigma_field_v_per_m
    assert abs(sol.temperature_k - 300.0) < 1e-3
    assert abs(sol.field_v_per_m - 5.0) < 1e-3
    assert not sol.field_sq_clamped


def test_joint_zero_field_clamps_cleanly(sr):
    meas = [_measure(sr, n, 300.0) for n in (25, 30)]
    sol = joint_solve_temperature_field(meas)
    assert abs(sol.temperature_k - 300.0) < 1e-3
    assert sol.field_v_per_m == pytest.approx(0.0, abs=1e-3)


def test_joint_order_invariance(sr):
    meas = [_measure(sr, n, 320.0, field_v_per_m=3.0) for n in (25, 30)]
    a = joint_solve_temperature_field(meas)
    b = joint_solve_temperature_field(list(reversed(meas)))
    assert a.temperature_k == pytest.approx(b.temperature_k, abs=1e-6)
    assert a.field_v_per_m == pytest.approx(b.field_v_per_m, abs=1e-6)


def test_joint_needs_two_distinct_states(sr):
    one = [_measure(sr, 30, 300.0)]
    with pytest.raises(ThermometryError):
        joint_solve_temperature_field(one)
    twins = [_measure(sr, 30, 300.0), _measure(sr, 30, 300.0)]
    with pytest.raises(ThermometryError):
        joint_solve_temperature_field(twins)


def test_joint_rejects_mixed_species(sr, yb):
    meas = [
        _measure(sr, 30, 300.0),
        ThermometryMeasurement(yb.state(30, "3P0"), 2000.0, 0.16),
    ]
    with pytest.raises(ThermometryError):
        joint_solve_temperature_field(meas)


# -- interaction shifts and cycle budgets ----------------------------------------


def test_vdw_reference_point():
    assert vdw_shift_estimate(25, 4.0) == pytest.approx(1.0, rel=1e-12)
    # (n/25)^11 and (4 um / a)^6 scalings
    assert vdw_shift_estimate(50, 8.0) == pytest.approx(2**11 / 2**6, rel=1e-12)
    with pytest.raises(ValueError):
        vdw_shift_estimate(10, 4.0)
    with pytest.raises(ValueError):
        vdw_shift_estimate(25, 0.0)


def test_measurement_budget_cycles():
    # 3.5 kHz line split to 0.16 Hz with 1e4 atoms per cycle
    cycles = measurement_budget(1.0e4, 3500.0, 0.16)
    assert cycles == 47852
    # a better line splitter cuts quadratically
    assert measurement_budget(1.0e4, 3500.0, 0.16, kappa=2.0) == 11963
    assert measurement_budget(1.0e12, 1.0, 1.0) == 1


# -- full error budget ------------------------------------------------------------


def test_error_budget_chain(sr):
    eb = error_budget(
        sr, sr.state(30, "3D1"), 1.7e-16, 300.0, linewidth_hz=3500.0
    )
    assert eb.transition_id == "Sr 5 3P0 -> 30 3D1"
    assert eb.transition_frequency_hz == pytest.approx(9.434e14, rel=1e-3)
    assert eb.target_resolution_hz == pytest.approx(0.1604, rel=1e-3)
    assert eb.temperature_sigma_k == pytest.approx(0.00998, rel=1e-2)
    assert eb.line_split_factor == pytest.approx(0.1604 / 3500.0, rel=1e-3)
    assert eb.clock_fractional_uncertainty == pytest.approx(7.3e-19, rel=0.02)
    assert eb.leverage > 100.0


def test_error_budget_computes_linewidth_when_not_given(sr):
    eb = error_budget(sr, sr.state(30, "3D1"), 1.7e-16, 300.0)
    assert eb.total_linewidth_hz > 100.0
    assert 0.0 < eb.line_split_factor < 1.0


def test_error_budget_rydberg_rydberg_route(sr):
    eb = error_budget(
        sr, sr.state(40, "3D1"), 1.0e-13, 300.0, lower=sr.state(40, "3P0")
    )
    assert eb.transition_id == "Sr 40 3P0 -> 40 3D1"
    # microwave-scale interval
    assert eb.transition_frequency_hz < 1.0e12
    assert eb.sensitivity_hz_per_k == pytest.approx(
        state_bbr_sensitivity(sr.state(40, "3D1"), 300.0)
        - state_bbr_sensitivity(sr.state(40, "3P0"), 300.0),
        rel=1e-6,
    )


def test_error_budget_validation(sr):
    with pytest.raises(ValueError):
        error_budget(sr, sr.state(30, "3D1"), -1.0, 300.0)
