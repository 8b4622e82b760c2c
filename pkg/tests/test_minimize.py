import math

import numpy as np
import pytest

from efk.constants import SQRT8, m_beta
from efk.domains import ball, hyperrectangle
from efk.minimize import (GammaConfig, MinimizeConfig, build_problem,
                          gamma_rescaling_residual, gamma_sweep, initial_guess,
                          lbfgs, minimize, minimize_truncated_positive,
                          random_band_limited, w_field_check)
from efk.radial import RadialField
from efk.spectral import SpectralField, evaluate_at


def test_trivial_regime_five_random_starts():
    dom = hyperrectangle(2 * math.pi)
    for seed in (1, 2, 3, 4, 5):
        res = minimize(MinimizeConfig(beta=4.0, modes=(48,),
                                      init=("random", seed, 0.3)), dom)
        assert res.converged
        assert res.field.sup_norm() < 1e-6


def test_trivial_regime_tiny_domain():
    # lambda1 = 2 pi^2 >> 1, so only the zero solution exists at beta = 5
    dom = hyperrectangle(1.0, 1.0)
    res = minimize(MinimizeConfig(beta=5.0, modes=(16, 16),
                                  init=("random", 0, 0.4)), dom)
    assert res.field.sup_norm() < 1e-7


def test_positive_minimizer_2d_bounds():
    dom = hyperrectangle(20.0, 20.0)
    res = minimize_truncated_positive(MinimizeConfig(beta=4.0, modes=(64, 64)), dom)
    assert res.converged and not res.defects
    assert -1e-6 <= res.report.u_min
    assert res.report.u_max <= 1.0 + 1e-6
    mid = evaluate_at(res.field, [np.array([10.0]), np.array([10.0])])[0, 0]
    assert mid > 0.9


def test_truncated_positive_m_beta_bound():
    dom = hyperrectangle(20.0, 20.0)
    res = minimize_truncated_positive(MinimizeConfig(beta=1.6, modes=(64, 64)), dom)
    assert res.converged and not res.defects
    assert res.report.u_max <= m_beta(1.6) + 1e-6
    assert m_beta(1.6) == pytest.approx(1.265, abs=5e-3)


def test_energy_monotone_along_trace():
    dom = hyperrectangle(20.0, 20.0)
    res = minimize(MinimizeConfig(beta=3.0, modes=(48, 48)), dom)
    energies = [f for _, f, _ in res.trace]
    diffs = np.diff(energies)
    assert np.all(diffs <= 1e-11 * np.maximum(1.0, np.abs(energies[:-1])))


def test_multistart_uniqueness_above_sqrt8():
    dom = hyperrectangle(20.0, 20.0)
    problem = build_problem(MinimizeConfig(beta=3.0, modes=(48, 48)), dom)
    from efk.minimize import _run_single

    solutions = []
    for seed in range(5):
        x0 = random_band_limited(problem, seed, 0.3, positive_bias=0.15)
        run = _run_single(problem, x0, None, 4000)
        assert run.converged
        vals = problem.field(run.x).values
        if vals.min() > -1e-6 and vals.mean() > 0:
            solutions.append(run.x)
    assert len(solutions) >= 3
    for i in range(len(solutions)):
        for j in range(i + 1, len(solutions)):
            assert np.linalg.norm(solutions[i] - solutions[j]) < 1e-5


def test_multistart_reports_spread():
    dom = hyperrectangle(2 * math.pi)
    res = minimize(MinimizeConfig(beta=4.0, modes=(32,), multistart=4,
                                  seeds=(0, 1, 2, 3)), dom)
    assert res.l2_spread < 1e-6  # everything collapses to zero here


def test_w_field_check_examples():
    dom = hyperrectangle(20.0, 20.0)
    res = minimize_truncated_positive(MinimizeConfig(beta=2.0, modes=(64, 64)), dom)
    assert w_field_check(res.field, 2.0)
    # the negated principal eigenfunction fails the sign requirement
    neg = SpectralField(dom, -res.field.coeffs)
    assert not w_field_check(neg, 2.0)
    zero = SpectralField(dom, np.zeros((64, 64)))
    assert w_field_check(zero, 2.0)


def test_radial_minimize_dispatch():
    res = minimize_truncated_positive(MinimizeConfig(beta=4.0, n_points=192),
                                      ball(10.0, dim=2))
    assert isinstance(res.field, RadialField)
    assert res.converged and not res.defects
    assert res.report.u_max <= 1.0 + 1e-6


def test_initial_guess_kinds():
    dom = hyperrectangle(2 * math.pi)
    problem = build_problem(MinimizeConfig(beta=3.0, modes=(16,)), dom)
    z = initial_guess(problem, ("zero",))
    assert np.all(z == 0)
    d = initial_guess(problem, ("delta_phi1", 0.2))
    assert d[0] == pytest.approx(0.2) and np.all(d[1:] == 0)
    r = initial_guess(problem, ("random", 7, 0.5))
    assert np.max(np.abs(r)) == pytest.approx(0.5)
    assert np.all(r[8:] == 0)  # band-limited to the lowest 8 modes
    with pytest.raises(ValueError):
        initial_guess(problem, ("nope",))


def test_gamma_sweep_positivity_and_increments():
    dom = hyperrectangle(2 * math.pi)
    cfg = MinimizeConfig(beta=1.0, modes=(48,))
    sweep = gamma_sweep(dom, [1e-2, 1e-3, 1e-4, 0.0], cfg)
    assert sweep.converged
    for rep in sweep.reports:
        assert rep.u_min >= -1e-8
        assert rep.u_max > 0.5
    assert sweep.increments[-1] < 0.05
    assert sweep.increments[0] > sweep.increments[-1]


def test_gamma_zero_solves_second_order_problem():
    # lambda1 = 1/4 < 1: the classical second-order ground state is positive
    dom = hyperrectangle(2 * math.pi)
    cfg = MinimizeConfig(beta=1.0, modes=(48,))
    sweep = gamma_sweep(dom, [0.0], cfg)
    rep = sweep.reports[0]
    assert rep.u_min >= -1e-10 and 0.8 < rep.u_max < 1.0


def test_gamma_rescaling_residual():
    dom = hyperrectangle(2 * math.pi)
    cfg = MinimizeConfig(beta=1.0, modes=(48,))
    gamma = 1.0 / 64.0
    assert gamma ** -0.25 == pytest.approx(SQRT8)  # mu = sqrt(8) exactly
    resid = gamma_rescaling_residual(dom, gamma, cfg)
    assert resid < 1e-6


def test_gamma_config_validation():
    with pytest.raises(ValueError):
        GammaConfig(gamma=-0.1, base=MinimizeConfig(beta=1.0))
    with pytest.raises(ValueError):
        MinimizeConfig(beta=1.0, grad_tol=-1.0)


def test_lbfgs_on_quadratic():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((30, 30))
    A = A @ A.T + 30 * np.eye(30)
    b = rng.standard_normal(30)
    fun = lambda x: 0.5 * x @ A @ x - b @ x
    grad = lambda x: A @ x - b
    # without a difference-form line search the f-comparison limits precision
    res = lbfgs(fun, grad, np.zeros(30), grad_tol=1e-7, max_iters=500)
    assert res.converged
    assert np.linalg.norm(A @ res.x - b) < 1e-6
