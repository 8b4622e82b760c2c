import math

import numpy as np
import pytest

from efk.constants import (K0, SQRT8, BetaConstants, beta_bar, c_beta,
                           g_interval_max, g_interval_min, interval_max,
                           m_beta, scalar_g, scalar_h)


def test_c_beta_closed_form():
    assert c_beta(SQRT8) == pytest.approx(math.sqrt(3.0), abs=1e-15)
    assert c_beta(2.0) == pytest.approx(math.sqrt(2.0), abs=1e-15)
    for beta in (0.3, 1.0, 5.0, 40.0):
        assert c_beta(beta) > 1.0


def test_m_beta_at_sqrt8_is_one():
    # (1/8) * ((4+8)/3)^(3/2) = 1
    assert m_beta(SQRT8) == pytest.approx(1.0, abs=1e-14)
    for beta in (0.5, 1.0, 2.0, 10.0):
        assert m_beta(beta) >= 1.0 - 1e-14


def test_k0_value():
    assert K0 == pytest.approx(1.58, abs=5e-3)
    assert K0 == math.sqrt(8.0 / (math.sqrt(27.0) - 2.0))


def test_h_root_at_c_beta():
    for beta in (0.7, 1.3, SQRT8, 4.0, 25.0):
        assert scalar_h(beta, c_beta(beta)) == pytest.approx(0.0, abs=1e-12)


def test_h_max_on_unit_interval_at_sqrt8():
    # h increases on (0,1) for beta >= sqrt(8), so the max is h(1) = 1
    top = interval_max(lambda s: float(scalar_h(SQRT8, s)), 0.0, 1.0)
    assert top == pytest.approx(1.0, abs=1e-10)


def test_m_beta_below_c_beta_above_threshold():
    for beta in np.linspace(K0, 100.0, 257):
        assert m_beta(beta) <= c_beta(beta) + 1e-12


def test_g_monotone_on_unit_interval_above_sqrt8():
    s = np.linspace(0.0, 1.0, 2001)
    for beta in (SQRT8, 3.0, 7.0, 50.0):
        slope = (4.0 / beta**2) * (1.0 - 3.0 * s**2) + 1.0
        assert slope.min() >= -1e-12
    # equality case pins down (s, beta) = (1, sqrt(8))
    assert (4.0 / SQRT8**2) * (1.0 - 3.0) + 1.0 == pytest.approx(0.0, abs=1e-15)


def test_interval_extrema_against_dense_oracle():
    rng = np.random.default_rng(7)
    for _ in range(12):
        a, b, c = rng.uniform(-2, 2, size=3)
        fun = lambda s: a * s**3 + b * s + c * math.sin(3 * s)
        lo, hi = sorted(rng.uniform(-2, 2, size=2))
        if hi - lo < 1e-3:
            continue
        xs = np.linspace(lo, hi, 200001)
        brute = float(np.max([fun(x) for x in xs]))
        assert interval_max(fun, lo, hi) >= brute - 1e-9


def test_scalar_g_custom_reaction():
    f = lambda s: np.sin(s)
    assert scalar_g(2.0, 0.5, f) == pytest.approx(np.sin(0.5) + 0.5)
    assert g_interval_max(2.0, f, 0.0, 1.0) >= g_interval_min(2.0, f, 0.0, 1.0)


def test_beta_constants_bundle():
    bc = BetaConstants.for_beta(3.0, lambda1=0.25)
    assert bc.c_beta == c_beta(3.0)
    assert bc.m_beta == m_beta(3.0)
    assert bc.beta_bar == pytest.approx((1 - 0.0625) / 0.25)
    with pytest.raises(ValueError):
        beta_bar(0.0)
    with pytest.raises(ValueError):
        c_beta(-1.0)
