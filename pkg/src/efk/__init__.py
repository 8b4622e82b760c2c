"""Numerics for the fourth-order Allen-Cahn (extended Fisher-Kolmogorov)
equation Delta^2 u - beta Delta u = u - u^3 with Navier boundary conditions:
energy minimization, stability eigenvalues, pseudo-arclength continuation,
radial tools, saddle construction, and a theorem-verification harness.
"""

from .constants import K0, SQRT8, BetaConstants, beta_bar, c_beta, m_beta
from .domains import (DomainSpec, annulus, ball, critical_radius,
                      hyperrectangle, lambda1, lambda1_value, quadrant_square,
                      volume)
from .spectral import EnergyReport, SpectralField, energy, gradient

__all__ = [
    "K0", "SQRT8", "BetaConstants", "beta_bar", "c_beta", "m_beta",
    "DomainSpec", "annulus", "ball", "critical_radius", "hyperrectangle",
    "lambda1", "lambda1_value", "quadrant_square", "volume",
    "EnergyReport", "SpectralField", "energy", "gradient",
]
