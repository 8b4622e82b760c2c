"""Planar saddle construction: a positive solution on the quadrant square,
extended to (-R, R)^2 by odd reflection in both axes.

The reflection is a pure index map (never a re-solve); the smoothness report
quantifies how cleanly the odd extension glues across the axes, which is the
numerical content of the C^4 matching argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spectral as sp
from .constants import K0
from .domains import lambda1_value, quadrant_square
from .minimize import MinimizeConfig, MinimizeResult, minimize_truncated_positive
from .spectral import SpectralField


class DomainTooSmallError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SaddleTile:
    """Odd reflection of a quadrant field onto the full square (-R, R)^2."""

    quadrant: SpectralField
    coords: np.ndarray  # 1D axis coordinates, -R..R inclusive
    values: np.ndarray  # (len(coords), len(coords))

    @property
    def h(self) -> float:
        return float(self.coords[1] - self.coords[0])


def build_saddle(R: float, beta: float, modes: tuple[int, int] = (128, 128),
                 grad_tol: float | None = None) -> tuple[MinimizeResult, SaddleTile]:
    """Solve the quadrant problem and return (solve result, reflected tile).

    Requires beta >= K0 (saddle regime) and R large enough that the trivial
    solution is not the only one.
    """
    if beta < K0:
        raise ValueError(f"saddle construction needs beta >= {K0:.4f}")
    domain = quadrant_square(R)
    lam = lambda1_value(domain)
    if lam * lam + beta * lam >= 1.0:
        raise DomainTooSmallError(
            f"only the trivial solution exists: lambda1^2 + beta*lambda1 = "
            f"{lam * lam + beta * lam:.4f} >= 1")
    result = minimize_truncated_positive(
        MinimizeConfig(beta=beta, modes=modes, grad_tol=grad_tol), domain)
    tile = reflect_tile(result.field)
    return result, tile


def reflect_tile(quadrant: SpectralField) -> SaddleTile:
    """u(-x, y) = -u(x, y), u(x, -y) = -u(x, y) as an index map on the
    natural grid (axes and outer border carry exact zeros)."""
    vals = quadrant.values
    m = vals.shape[0]
    R = quadrant.domain.lengths[0]
    h = R / (m + 1)
    coords = np.arange(-(m + 1), m + 2) * h
    size = 2 * m + 3
    tile = np.zeros((size, size))
    c = m + 1  # index of the origin
    tile[c + 1:c + 1 + m, c + 1:c + 1 + m] = vals
    tile[c - m:c, c + 1:c + 1 + m] = -vals[::-1, :]
    tile[c + 1:c + 1 + m, c - m:c] = -vals[:, ::-1]
    tile[c - m:c, c - m:c] = vals[::-1, ::-1]
    return SaddleTile(quadrant=quadrant, coords=coords, values=tile)


def saddle_sign_minimum(tile: SaddleTile) -> float:
    """min over grid nodes of u(x, y) * x * y; the saddle sign property asks
    this to be nonnegative up to tolerance."""
    x = tile.coords[:, None]
    y = tile.coords[None, :]
    return float(np.min(tile.values * x * y))


def window_sup(field: SpectralField, window: float, n_samples: int = 161) -> float:
    """Sup norm over [0, window]^2 sampled on a uniform grid."""
    pts = np.linspace(0.0, window, n_samples)
    vals = sp.evaluate_at(field, [pts, pts])
    return float(np.max(np.abs(vals)))


def diagonal_asymmetry(field: SpectralField) -> float:
    """Sup of |u(x,y) - u(y,x)| relative to the sup norm (square domains)."""
    c = field.coeffs
    return float(np.max(np.abs(c - c.T)) / max(np.max(np.abs(c)), 1e-300))


@dataclass(frozen=True)
class ReflectionReport:
    jump_value: float
    jump_d1: float
    jump_d2: float
    jump_d3: float
    navier_trace: float
    h: float
    fourth_derivative_scale: float
    passed: bool


def reflection_smoothness(quadrant: SpectralField,
                          jump_factor: float = 10.0) -> ReflectionReport:
    """Jumps of the odd extension's normal differences across the x = 0 axis.

    Odd-order differences match identically by construction; the second
    difference jump measures the trace of u_xx (zero for an exact Navier
    solution) and must stay below jump_factor * h^2 * sup|d^4 u/dx^4|.
    """
    vals = quadrant.values  # natural grid, spacing h, interior points
    m = vals.shape[0]
    R = quadrant.domain.lengths[0]
    h = R / (m + 1)
    u1, u2, u3, u4 = vals[0], vals[1], vals[2], vals[3]
    # one-sided stencils at x=0 for the extension (value 0 on the axis)
    d1_right = (4.0 * u1 - u2) / (2 * h)
    d1_left = (4.0 * u1 - u2) / (2 * h)  # mirror of odd data
    d2_right = (-5.0 * u1 + 4.0 * u2 - u3) / (h * h)
    d2_left = -d2_right
    d3_right = (9.0 * u1 - 12.0 * u2 + 7.0 * u3 - 1.5 * u4) / h**3
    d3_left = d3_right
    jump_value = 0.0  # u = 0 on the axis exactly in this basis
    jump_d1 = float(np.max(np.abs(d1_right - d1_left)))
    jump_d2 = float(np.max(np.abs(d2_right - d2_left)))
    jump_d3 = float(np.max(np.abs(d3_right - d3_left)))

    # Navier trace of Lap u on the axis, sampled densely
    lap = sp.laplacian(quadrant)
    ys = np.linspace(0.0, R, 64)
    trace = float(np.max(np.abs(sp.evaluate_at(lap, [np.array([0.0, R]), ys]))))

    k = np.arange(1, quadrant.modes[0] + 1)
    d4_coeffs = (k[:, None] * math.pi / R) ** 4 * quadrant.coeffs
    scale = float(np.max(np.abs(sp.grid_values(SpectralField(quadrant.domain, d4_coeffs),
                                               quadrant.modes))))
    passed = jump_d2 <= jump_factor * h * h * scale and jump_value == 0.0
    return ReflectionReport(jump_value=jump_value, jump_d1=jump_d1, jump_d2=jump_d2,
                            jump_d3=jump_d3, navier_trace=trace, h=h,
                            fourth_derivative_scale=scale, passed=passed)


@dataclass(frozen=True)
class GrowthReport:
    radii: tuple
    sup_diffs: tuple
    decreasing: bool


def saddle_growth_check(fields: dict[float, SpectralField], window: float = 15.0,
                        n_samples: int = 61) -> GrowthReport:
    """Pairwise sup differences of quadrant solutions on a common window,
    ordered by domain size; Cauchy-like decrease evidences the R -> inf limit."""
    radii = sorted(fields)
    pts = np.linspace(0.0, window, n_samples)
    samples = {R: sp.evaluate_at(fields[R], [pts, pts]) for R in radii}
    diffs = []
    for a, b in zip(radii, radii[1:]):
        diffs.append(float(np.max(np.abs(samples[a] - samples[b]))))
    decreasing = all(d2 < d1 for d1, d2 in zip(diffs, diffs[1:]))
    return GrowthReport(radii=tuple(radii), sup_diffs=tuple(diffs),
                        decreasing=decreasing)
