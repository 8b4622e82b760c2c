import math

import numpy as np
import pytest

from efk.constants import K0
from efk.saddle import (DomainTooSmallError, build_saddle, diagonal_asymmetry,
                        reflect_tile, reflection_smoothness,
                        saddle_growth_check, saddle_sign_minimum, window_sup)
from efk.spectral import SpectralField
from efk.domains import quadrant_square


@pytest.fixture(scope="module")
def saddle_20():
    return build_saddle(20.0, 1.6, modes=(96, 96))


def test_sign_property(saddle_20):
    res, tile = saddle_20
    assert res.converged
    assert saddle_sign_minimum(tile) >= -1e-7


def test_tile_odd_symmetry(saddle_20):
    _, tile = saddle_20
    v = tile.values
    c = (v.shape[0] - 1) // 2
    # u(-x, y) = -u(x, y) and u(x, -y) = -u(x, y), exact as an index map
    assert np.max(np.abs(v + v[::-1, :])) == 0.0
    assert np.max(np.abs(v + v[:, ::-1])) == 0.0
    assert np.all(v[c, :] == 0.0) and np.all(v[:, c] == 0.0)
    assert tile.coords[0] == -tile.coords[-1]


def test_window_lower_bound(saddle_20):
    res, _ = saddle_20
    assert window_sup(res.field, 12.0) >= 1.0 / math.sqrt(2.0)


def test_reflection_smoothness(saddle_20):
    res, _ = saddle_20
    rep = reflection_smoothness(res.field)
    assert rep.jump_value == 0.0
    assert rep.jump_d1 == 0.0
    assert rep.jump_d3 == 0.0
    assert rep.navier_trace < 1e-12
    assert rep.jump_d2 <= 10.0 * rep.h**2 * rep.fourth_derivative_scale
    assert rep.passed


def test_diagonal_symmetry_recorded(saddle_20):
    res, _ = saddle_20
    # informational below sqrt(8); the deterministic solve preserves it anyway
    assert diagonal_asymmetry(res.field) < 1e-10


def test_zero_field_tile():
    quad = SpectralField(quadrant_square(5.0), np.zeros((16, 16)))
    tile = reflect_tile(quad)
    assert np.all(tile.values == 0.0)
    rep = reflection_smoothness(quad)
    assert rep.jump_d2 == 0.0


def test_too_small_domain_raises():
    with pytest.raises(DomainTooSmallError) as err:
        build_saddle(1.0, 1.6, modes=(16, 16))
    assert "lambda1" in str(err.value)


def test_beta_below_threshold_rejected():
    with pytest.raises(ValueError):
        build_saddle(20.0, 1.0)
    assert 1.0 < K0


def test_growth_cauchy(saddle_20):
    res20, _ = saddle_20
    fields = {20.0: res20.field}
    for R, m in ((12.0, 64), (16.0, 80)):
        r, _ = build_saddle(R, 1.6, modes=(m, m))
        fields[R] = r.field
    rep = saddle_growth_check(fields, window=9.0)
    assert rep.radii == (12.0, 16.0, 20.0)
    assert rep.decreasing


def test_growth_identical_fields_zero_diffs(saddle_20):
    res, _ = saddle_20
    rep = saddle_growth_check({1.0: res.field, 2.0: res.field, 3.0: res.field},
                              window=5.0)
    assert rep.sup_diffs == (0.0, 0.0)
