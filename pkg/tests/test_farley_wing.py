"""Thermal response kernel F(y): oracle, shape, limits, route agreement.

The oracle expands the Bose factor as a geometric series of exponentials;
each term's principal-value integral then has a closed form in the
exponential integrals E1 and Ei.  That path shares nothing with either
implementation route (pole-excised adaptive quadrature / fixed-node fast
map), so agreement pins all three independently.
"""

import math

import mpmath as mp
import numpy as np
import pytest
from scipy.optimize import brentq, minimize_scalar

from rydtherm.bbr import farley_wing, farley_wing_fast, farley_wing_zero

mp.mp.dps = 30


def _oracle(y: float, terms: int = 1500) -> float:
    yy = mp.mpf(y)
    total = mp.mpf(0)
    for m in range(1, terms + 1):
        u = m * yy
        total += mp.mpf(1) / (m * m) + (yy * yy / 2) * (
            mp.exp(u) * mp.e1(u) - mp.exp(-u) * mp.ei(u)
        )
    return float(-2 * yy * total)


@pytest.mark.parametrize("y", [0.5, 1.0, 3.0])
def test_against_exponential_integral_oracle(y):
    assert farley_wing(y) == pytest.approx(_oracle(y), abs=5e-8)
    assert farley_wing_fast(y) == pytest.approx(_oracle(y), abs=5e-8)


def test_value_at_origin():
    assert farley_wing(0.0) == 0.0
    assert farley_wing_fast(0.0) == 0.0


def test_small_y_slope():
    y = 1e-3
    for fn in (farley_wing, farley_wing_fast):
        assert fn(y) / y == pytest.approx(-math.pi**2 / 3, rel=1e-3)


def test_oddness_exact():
    for y in np.geomspace(1e-3, 1e3, 25):
        assert farley_wing(y) + farley_wing(-y) == pytest.approx(0.0, abs=1e-13)
        assert farley_wing_fast(y) + farley_wing_fast(-y) == pytest.approx(
            0.0, abs=1e-13
        )


def test_single_minimum_location_and_depth():
    res = minimize_scalar(farley_wing_fast, bounds=(0.5, 2.0), method="bounded")
    assert res.x == pytest.approx(1.12, abs=0.02)
    assert res.fun == pytest.approx(-2.0205, abs=2e-3)


def test_zero_crossing():
    root = brentq(farley_wing_fast, 2.0, 3.5, xtol=1e-10)
    assert root == pytest.approx(2.6162, abs=2e-3)
    assert farley_wing_zero() == pytest.approx(root, abs=1e-8)
    assert abs(farley_wing(root)) < 1e-8


def test_large_y_asymptote():
    y = 200.0
    asym = (2.0 * math.pi**4 / 15.0) / y
    assert farley_wing_fast(y) == pytest.approx(asym, rel=5e-3)
    assert farley_wing(y) == pytest.approx(asym, rel=5e-3)
    # and the tail keeps falling off as 1/y
    assert farley_wing_fast(400.0) == pytest.approx(
        farley_wing_fast(200.0) / 2.0, rel=2e-2
    )


def test_shape_one_min_one_max():
    # derivative sign pattern on (0, 40): negative, positive, negative
    y = np.geomspace(0.02, 40.0, 400)
    f = np.array([farley_wing_fast(v) for v in y])
    dsign = np.sign(np.diff(f))
    changes = np.nonzero(np.diff(dsign) != 0)[0]
    assert len(changes) == 2
    assert dsign[0] < 0 and dsign[-1] < 0


def test_routes_agree_everywhere():
    for y in np.geomspace(0.01, 30.0, 40):
        a, b = farley_wing(y), farley_wing_fast(y)
        assert abs(a - b) <= 1e-6 * max(1.0, abs(a))


def test_continuity_across_route_seams():
    # the fast map and the reference switch internal branches; check no jumps
    for y0 in (1e-3, 40.0):
        lo = farley_wing_fast(y0 * (1 - 1e-6))
        hi = farley_wing_fast(y0 * (1 + 1e-6))
        assert abs(hi - lo) < 1e-4 * max(1.0, abs(hi))
