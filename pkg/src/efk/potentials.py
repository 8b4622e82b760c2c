"""Reaction terms and their potential densities.

Conventions: the energy integrand is  |Lap u|^2/2 + beta |grad u|^2/2 + W(u)
with W = -F and F' = f, F(0) = 0.  Critical points solve
Delta^2 u - beta Delta u = f(u).

Variants:
  cubic          f(s) = s - s^3                       (the model equation)
  truncated_sym  cubic on [-C, C], frozen at +-f(C) outside (C = c_beta)
  truncated_pos  linear -(beta^2/4) s for s < 0, cubic on [0, C], frozen above
"""

from __future__ import annotations

import numpy as np

from .constants import c_beta

CUBIC = "cubic"
TRUNCATED_SYM = "truncated_sym"
TRUNCATED_POS = "truncated_pos"

NONLINEARITIES = (CUBIC, TRUNCATED_SYM, TRUNCATED_POS)


def _check(name: str) -> None:
    if name not in NONLINEARITIES:
        raise ValueError(f"unknown nonlinearity {name!r}")


def reaction(name: str, beta: float, s: np.ndarray) -> np.ndarray:
    """f(s) for the chosen variant."""
    _check(name)
    s = np.asarray(s, dtype=float)
    if name == CUBIC:
        return s - s**3
    C = c_beta(beta)
    slope = beta * beta / 4.0  # |f| = slope * C on the frozen tails
    if name == TRUNCATED_SYM:
        core = s - s**3
        return np.where(np.abs(s) <= C, core, -slope * C * np.sign(s))
    lo = -slope * s          # s < 0 branch
    hi = np.full_like(s, -slope * C)
    core = s - s**3
    return np.where(s < 0.0, lo, np.where(s <= C, core, hi))


def potential(name: str, beta: float, s: np.ndarray) -> np.ndarray:
    """W(s) = -int_0^s f;  for the cubic variant this is s^4/4 - s^2/2."""
    _check(name)
    s = np.asarray(s, dtype=float)
    core = 0.25 * s**4 - 0.5 * s**2
    if name == CUBIC:
        return core
    C = c_beta(beta)
    slope = beta * beta / 4.0
    w_c = 0.25 * C**4 - 0.5 * C * C
    tail = w_c + slope * C * (np.abs(s) - C)
    if name == TRUNCATED_SYM:
        return np.where(np.abs(s) <= C, core, tail)
    neg = 0.5 * slope * s * s
    return np.where(s < 0.0, neg, np.where(s <= C, core, tail))


def force(name: str, beta: float, s: np.ndarray) -> np.ndarray:
    """W'(s) = -f(s), the nonlinear term of the energy gradient."""
    return -reaction(name, beta, s)


def potential_delta(name: str, beta: float, u: np.ndarray,
                    du: np.ndarray) -> np.ndarray:
    """W(u + du) - W(u).

    The cubic case expands the polynomial identity so every term carries a
    factor of du and the round-off of the difference scales with the step;
    the truncated variants subtract directly (pointwise-epsilon error).
    """
    _check(name)
    if name == CUBIC:
        return du * ((u**3 - u) + du * (1.5 * u * u - 0.5) + du * du * u
                     + 0.25 * du**3)
    return potential(name, beta, u + du) - potential(name, beta, u)
