import math

import numpy as np
import pytest
import scipy.special as sps

from efk.bessel import bessel_first_zero, bessel_j, bessel_j_derivative, radial_profile


def test_series_against_scipy():
    near = np.linspace(0.05, 12.0, 61)
    far = np.linspace(12.0, 18.0, 25)
    for order in (0.0, 0.5, 1.0, 2.5, 4.0, 5.0):
        err_near = max(abs(bessel_j(order, x) - sps.jv(order, x)) for x in near)
        err_far = max(abs(bessel_j(order, x) - sps.jv(order, x)) for x in far)
        assert err_near < 1e-11  # covers every first zero used here
        assert err_far < 5e-10   # series cancellation grows with the argument


def test_first_zero_order0():
    # independent oracle: bisection on scipy's evaluator
    from scipy.optimize import brentq

    oracle = brentq(lambda x: sps.jv(0, x), 2.0, 3.0, xtol=1e-13)
    assert bessel_first_zero(0.0) == pytest.approx(oracle, abs=1e-11)
    assert bessel_first_zero(0.0) == pytest.approx(2.4048255577, abs=1e-9)


def test_first_zero_half_integer_is_pi():
    # J_{1/2}(x) is proportional to sin(x)/sqrt(x)
    assert bessel_first_zero(0.5) == pytest.approx(math.pi, abs=1e-11)


def test_first_zero_order1():
    assert bessel_first_zero(1.0) == pytest.approx(3.8317059702, abs=1e-9)


def test_first_zero_matches_scipy_table():
    for order in (0, 1, 2, 3, 4):
        ref = sps.jn_zeros(order, 1)[0]
        assert bessel_first_zero(float(order)) == pytest.approx(ref, rel=1e-11)


def test_derivative_identity():
    from scipy.special import jvp

    for order in (0.0, 0.5, 2.0, 4.0):
        for x in (0.7, 3.1, 9.4):
            assert bessel_j_derivative(order, x) == pytest.approx(
                float(jvp(order, x)), abs=1e-11)


def test_radial_profile_is_entire_at_zero():
    s = np.array([0.0, 1e-8, 0.3, 2.0])
    vals = radial_profile(1.0, s)
    assert np.all(np.isfinite(vals))
    # s^-1 J_1(s) -> 1/2 as s -> 0
    assert vals[0] == pytest.approx(0.5, abs=1e-14)


def test_negative_order_rejected():
    with pytest.raises(ValueError):
        bessel_j(-0.5, 1.0)
    with pytest.raises(ValueError):
        bessel_first_zero(-1.0)
