"""Pseudo-arclength continuation of the nontrivial solution branch in beta.

The residual G(u, beta) is the coefficient-space gradient of the cubic
energy; the corrector solves the bordered system {G = 0, hyperplane through
the predictor} by a dense direct solve at desk scale (which stays regular at
folds) and by preconditioned GMRES above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import spectral as sp
from .constants import beta_bar
from .domains import DomainSpec, lambda1_value
from .minimize import (MinimizeConfig, _run_single, build_problem,
                       random_band_limited)
from .potentials import CUBIC
from .spectral import SpectralField

DENSE_LIMIT = 4000


class ContinuationError(RuntimeError):
    pass


@dataclass(frozen=True)
class BranchPoint:
    beta: float
    field: SpectralField
    sup_norm: float
    l2_norm: float
    nu1: float
    arclength: float
    residual: float


@dataclass(frozen=True)
class ContinuationConfig:
    beta_start: float
    ds: float = 0.02
    ds_min: float = 1e-4
    ds_max: float = 0.1
    max_steps: int = 200
    newton_tol: float = 1e-9
    direction: str = "decreasing_beta"
    beta_min: float | None = None
    beta_max: float | None = None
    stop_sup_below: float | None = None
    compute_nu1: bool = True

    def __post_init__(self):
        if not (self.ds_min <= self.ds <= self.ds_max):
            raise ValueError("need ds_min <= ds <= ds_max")
        if self.direction not in ("decreasing_beta", "increasing_beta"):
            raise ValueError("unknown direction")


def bifurcation_point(domain: DomainSpec) -> float:
    """beta_bar = (1 - lambda1^2)/lambda1; errors when lambda1 >= 1."""
    lam = lambda1_value(domain)
    if lam >= 1.0:
        raise ContinuationError("no bifurcation at positive beta: lambda1 >= 1")
    return beta_bar(lam)


@lru_cache(maxsize=32)
def _eval_matrix(lengths: tuple, modes: tuple, pads: tuple) -> tuple:
    """(A, h) with A the coeffs->padded-values map flattened per axis, so the
    residual Jacobian is diag(sym) + h A^T diag(V) A."""
    mats = []
    for L, m, p in zip(lengths, modes, pads):
        j = np.arange(1, p + 1)
        k = np.arange(1, m + 1)
        mats.append(math.sqrt(2.0 / L) * np.sin(np.outer(j, k) * math.pi / (p + 1)))
    if len(mats) == 1:
        A = mats[0]
    else:
        A = np.kron(mats[0], mats[1])
    h = math.prod(L / (p + 1) for L, p in zip(lengths, pads))
    return A, h


def _residual(field: SpectralField, beta: float, pad_factor: float = 1.5) -> np.ndarray:
    return sp.gradient(field, beta, CUBIC, pad_factor).coeffs.ravel()


def _jacobian_dense(domain: DomainSpec, modes: tuple, x: np.ndarray, beta: float,
                    pad_factor: float = 1.5) -> np.ndarray:
    pads = sp.default_pads(modes, pad_factor)
    A, h = _eval_matrix(domain.lengths, modes, pads)
    vals = A @ x
    sym = sp.quad_symbol(domain, modes, 1.0, beta).ravel()
    J = (A.T * (h * (3.0 * vals * vals - 1.0))) @ A
    J[np.diag_indices_from(J)] += sym
    return J


def smallest_jacobian_eig(domain: DomainSpec, modes: tuple, x: np.ndarray,
                          beta: float) -> float:
    n = x.size
    if n <= DENSE_LIMIT:
        J = _jacobian_dense(domain, modes, x, beta)
        return float(np.linalg.eigvalsh(0.5 * (J + J.T))[0])
    from .eigen import smallest_eigenpair

    lam, _, _ = smallest_eigenpair(SpectralField(domain, x.reshape(modes)), beta)
    return lam


def newton_at_beta(domain: DomainSpec, modes: tuple, beta: float, x0: np.ndarray,
                   tol: float = 1e-9, max_iter: int = 30) -> tuple[np.ndarray, float, bool]:
    """Newton on G(., beta) = 0 at fixed beta (dense path)."""
    x = x0.copy()
    for _ in range(max_iter):
        g = _residual(SpectralField(domain, x.reshape(modes)), beta)
        res = float(np.linalg.norm(g))
        if res < tol:
            return x, res, True
        J = _jacobian_dense(domain, modes, x, beta)
        try:
            dx = np.linalg.solve(J, -g)
        except np.linalg.LinAlgError:
            return x, res, False
        x = x + dx
    g = _residual(SpectralField(domain, x.reshape(modes)), beta)
    res = float(np.linalg.norm(g))
    return x, res, res < tol


def one_mode_amplitude(domain: DomainSpec, beta: float) -> float:
    """Stationary amplitude of the single-mode Galerkin reduction; the seed
    for branch starts (a^2 = (1 - lam1^2 - beta lam1)/int e1^4)."""
    lam = lambda1_value(domain)
    excess = 1.0 - lam * lam - beta * lam
    if excess <= 0.0:
        raise ContinuationError("no nontrivial branch: lambda1^2 + beta*lambda1 >= 1")
    e1_4 = math.prod(3.0 / (2.0 * L) for L in domain.lengths)
    return math.sqrt(excess / e1_4)


def seed_branch(domain: DomainSpec, beta_bar_value: float, epsilon: float,
                modes: tuple, newton_tol: float = 1e-9) -> BranchPoint:
    """Converged positive-branch point at beta = beta_bar - epsilon, seeded by
    the one-mode amplitude and corrected by Newton (epsilon halves on failure,
    at most 6 times)."""
    if not 0.0 < epsilon <= beta_bar_value:
        raise ValueError("epsilon must lie in (0, beta_bar]")
    eps = epsilon
    for _ in range(7):
        beta = beta_bar_value - eps
        a = one_mode_amplitude(domain, beta)
        x0 = np.zeros(modes)
        x0[(0,) * len(modes)] = a
        x, res, ok = newton_at_beta(domain, modes, beta, x0.ravel(), newton_tol)
        e1_coeff = float(x.reshape(modes)[(0,) * len(modes)])
        if ok and e1_coeff > 0.3 * a:
            field = SpectralField(domain, x.reshape(modes))
            nu1 = smallest_jacobian_eig(domain, modes, x, beta)
            return BranchPoint(beta=beta, field=field, sup_norm=field.sup_norm(),
                               l2_norm=field.l2_norm(), nu1=nu1, arclength=0.0,
                               residual=res)
        eps *= 0.5
    raise ContinuationError("seed Newton failed after 6 epsilon halvings")


def _bordered_solve(J: np.ndarray, b: np.ndarray, t_u: np.ndarray, t_b: float,
                    rhs_g: np.ndarray, rhs_n: float) -> tuple[np.ndarray, float]:
    n = b.size
    M = np.empty((n + 1, n + 1))
    M[:n, :n] = J
    M[:n, n] = b
    M[n, :n] = t_u
    M[n, n] = t_b
    sol = np.linalg.solve(M, np.concatenate([rhs_g, [rhs_n]]))
    return sol[:n], float(sol[n])


def _beta_derivative(domain: DomainSpec, modes: tuple, x: np.ndarray) -> np.ndarray:
    lam = sp.quad_symbol(domain, modes, 0.0, 1.0).ravel()
    return lam * x


def continue_branch(config: ContinuationConfig, seed: BranchPoint,
                    prev: BranchPoint | None = None) -> list[BranchPoint]:
    """Tangent-predictor / Newton-corrector arclength continuation from seed.

    Returns the accepted points (seed included, arclength starting at the
    seed's value); stops on max_steps, the configured beta window, a trivial
    limit, or arclength-step underflow.
    """
    domain = seed.field.domain
    modes = seed.field.modes
    n = int(np.prod(modes))
    if n > DENSE_LIMIT:
        raise NotImplementedError("operator-path continuation is desk-scale only")
    x = seed.field.coeffs.ravel().copy()
    beta = seed.beta

    if prev is not None:
        t = np.concatenate([x - prev.field.coeffs.ravel(), [beta - prev.beta]])
        t /= np.linalg.norm(t)
    else:
        J = _jacobian_dense(domain, modes, x, beta)
        du = np.linalg.solve(J, -_beta_derivative(domain, modes, x))
        t = np.concatenate([du, [1.0]])
        t /= np.linalg.norm(t)
        if (config.direction == "decreasing_beta") != (t[-1] < 0):
            t = -t
    points = [seed]
    ds = config.ds
    arclength = seed.arclength
    steps = 0
    while steps < config.max_steps:
        z_pred = np.concatenate([x, [beta]]) + ds * t
        xc, bc = z_pred[:n].copy(), float(z_pred[n])
        ok = False
        for it in range(8):
            g = _residual(SpectralField(domain, xc.reshape(modes)), bc)
            res = float(np.linalg.norm(g))
            if res < config.newton_tol:
                ok = True
                break
            J = _jacobian_dense(domain, modes, xc, bc)
            b = _beta_derivative(domain, modes, xc)
            nvec = np.concatenate([xc, [bc]]) - z_pred
            rhs_n = -float(np.dot(t[:n], nvec[:n])) - t[n] * nvec[n]
            dx, db = _bordered_solve(J, b, t[:n], t[n], -g, rhs_n)
            xc += dx
            bc += db
        if not ok:
            ds *= 0.5
            if ds < config.ds_min:
                break
            continue
        z_old = np.concatenate([x, [beta]])
        z_new = np.concatenate([xc, [bc]])
        t = (z_new - z_old) / np.linalg.norm(z_new - z_old)
        arclength += float(np.linalg.norm(z_new - z_old))
        x, beta = xc, bc
        field = SpectralField(domain, x.reshape(modes))
        nu1 = (smallest_jacobian_eig(domain, modes, x, beta)
               if config.compute_nu1 else math.nan)
        points.append(BranchPoint(beta=beta, field=field, sup_norm=field.sup_norm(),
                                  l2_norm=field.l2_norm(), nu1=nu1,
                                  arclength=arclength, residual=res))
        steps += 1
        if it <= 3:
            ds = min(ds * 1.3, config.ds_max)
        elif it >= 7:
            ds = max(ds * 0.5, config.ds_min)
        if config.beta_min is not None and beta < config.beta_min:
            break
        if config.beta_max is not None and beta > config.beta_max:
            break
        if config.stop_sup_below is not None and points[-1].sup_norm < config.stop_sup_below:
            break
    return points


def extrapolate_endpoint(points: list[BranchPoint], max_points: int = 6) -> float:
    """Bifurcation-beta estimate from the amplitude law: ||u||^2 is asymptotically
    linear in beta near the branch end, so the zero crossing of a linear fit
    through the smallest-amplitude points extrapolates the endpoint."""
    pts = sorted(points, key=lambda p: p.l2_norm)[:max_points]
    if len(pts) < 3:
        raise ContinuationError("too few points to extrapolate")
    betas = np.array([p.beta for p in pts])
    amp2 = np.array([p.l2_norm**2 for p in pts])
    slope, intercept = np.polyfit(betas, amp2, 1)
    return float(-intercept / slope)


def amplitude_law_slope(domain: DomainSpec, modes: tuple,
                        eps_list=(0.2, 0.1, 0.05, 0.025),
                        newton_tol: float = 1e-9) -> float:
    """Least-squares slope of log sup-norm against log(beta_bar - beta)."""
    bb = bifurcation_point(domain)
    eps_actual, sups = [], []
    for eps in eps_list:
        point = seed_branch(domain, bb, eps, modes, newton_tol)
        eps_actual.append(bb - point.beta)
        sups.append(point.sup_norm)
    slope = np.polyfit(np.log(np.asarray(eps_actual)), np.log(np.asarray(sups)), 1)[0]
    return float(slope)


@dataclass(frozen=True)
class UniquenessReport:
    beta: float
    branch_sup: float
    n_positive: int
    max_l2_mismatch: float
    passed: bool


def verify_uniqueness_segment(domain: DomainSpec, betas, modes: tuple,
                              branch: list[BranchPoint] | None = None,
                              n_starts: int = 5, amplitude: float = 0.3,
                              tol: float = 1e-5, newton_tol: float = 1e-9,
                              seeds=None) -> list[UniquenessReport]:
    """Multistart minimizers against branch points, beta by beta.

    Positive-leaning random starts descend the energy; every converged
    positive minimizer must match the branch solution in L2 within tol.
    """
    bb = bifurcation_point(domain)
    reports = []
    for beta in betas:
        if branch is not None:
            nearest = min(branch, key=lambda p: abs(p.beta - beta))
            x0 = nearest.field.coeffs.ravel()
            x, res, ok = newton_at_beta(domain, modes, beta, x0, newton_tol)
            if not ok:
                raise ContinuationError(f"branch refinement failed at beta={beta}")
        else:
            point = seed_branch(domain, bb, bb - beta, modes, newton_tol)
            x = point.field.coeffs.ravel()
        problem = build_problem(MinimizeConfig(beta=beta, modes=modes), domain)
        mismatch = 0.0
        n_pos = 0
        for s in (seeds or range(n_starts)):
            x0 = random_band_limited(problem, s, amplitude, positive_bias=0.2)
            run = _run_single(problem, x0, None, 4000)
            if not run.converged:
                continue
            field = problem.field(run.x)
            vals = sp.grid_values(field, sp.default_pads(field.modes))
            if vals.min() < -1e-6 or float(np.mean(vals)) <= 0:
                continue
            n_pos += 1
            mismatch = max(mismatch, float(np.linalg.norm(run.x - x)))
        reports.append(UniquenessReport(beta=beta,
                                        branch_sup=SpectralField(domain, x.reshape(modes)).sup_norm(),
                                        n_positive=n_pos,
                                        max_l2_mismatch=mismatch,
                                        passed=bool(n_pos > 0 and mismatch < tol)))
    return reports


def uniqueness_quadratic_check(u: SpectralField, v: SpectralField,
                               beta: float) -> tuple[float, float]:
    """(quadratic form with potential u^2-1 evaluated at w = u - v, ||w||_L2).

    For two positive solutions at the same beta the form is <= 0 only when
    w vanishes; perturb-and-reconverge tests drive both to ~0 together.
    """
    w = SpectralField(u.domain, u.coeffs - v.coeffs)
    pads = sp.default_pads(u.modes)
    ops = sp._ops(u.domain.lengths, u.modes, pads)
    sym = sp.quad_symbol(u.domain, u.modes, 1.0, beta)
    quad = float(np.sum(sym * w.coeffs**2))
    uv = sp.grid_values(u, pads)
    wv = sp.grid_values(w, pads)
    pot = ops.h_quad * float(np.sum((uv * uv - 1.0) * wv * wv))
    return quad + pot, w.l2_norm()
