"""First-kind Bessel functions via the ascending power series, and their first
positive zeros by bracketing + Newton.

The series is accurate for the desk-scale range used here (order <= 5,
argument <= 20); no special-function library is required.
"""

from __future__ import annotations

import math

import numpy as np

_MAX_TERMS = 60
_TERM_TOL = 1e-16


class RootBracketError(RuntimeError):
    """No sign change found while hunting for the first Bessel zero."""


def bessel_j(order: float, x: float) -> float:
    """J_order(x) summed from the ascending series.

    Terms are built by recurrence so no individual factorial/gamma overflows.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    x = float(x)
    if x == 0.0:
        return 1.0 if order == 0 else 0.0
    half = 0.5 * x
    term = half**order / math.gamma(order + 1.0)
    total = term
    for m in range(1, _MAX_TERMS):
        term *= -(half * half) / (m * (m + order))
        total += term
        if abs(term) < _TERM_TOL * max(1.0, abs(total)):
            break
    return total


def bessel_j_derivative(order: float, x: float) -> float:
    """dJ_order/dx via J' = (order/x) J_order - J_{order+1} (no negative orders)."""
    if order == 0.0:
        return -bessel_j(1.0, x)
    return (order / x) * bessel_j(order, x) - bessel_j(order + 1.0, x)


def radial_profile(order: float, s: float | np.ndarray) -> np.ndarray:
    """The entire function s^(-order) * J_order(s), finite at s = 0.

    This is the natural radial shape of the principal Laplacian eigenfunction
    on a ball once the r^(1-N/2) prefactor is absorbed.
    """
    s = np.asarray(s, dtype=float)
    term = np.full(s.shape, 0.5**order / math.gamma(order + 1.0))
    total = term.copy()
    s2 = 0.25 * s * s
    for m in range(1, _MAX_TERMS):
        term = term * (-s2) / (m * (m + order))
        total += term
        if np.max(np.abs(term)) < _TERM_TOL * max(1.0, np.max(np.abs(total))):
            break
    return total


def bessel_first_zero(order: float) -> float:
    """First positive zero j_{order,1}, accurate to ~1e-12 relative.

    The zero lies in (order, order + pi + 2]; the bracket is located by dense
    sampling and polished by bisection-safeguarded Newton.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    lo = order + 1e-9 if order > 0 else 1e-9
    hi = order + math.pi + 2.0
    n_scan = 256
    xs = np.linspace(lo, hi, n_scan)
    vals = [bessel_j(order, x) for x in xs]
    a = b = None
    for i in range(n_scan - 1):
        if vals[i] > 0.0 and vals[i + 1] <= 0.0:
            a, b = xs[i], xs[i + 1]
            break
    if a is None:
        raise RootBracketError(
            f"no sign change of J_{order} located in ({lo:.3g}, {hi:.3g})"
        )
    x = 0.5 * (a + b)
    for _ in range(100):
        f = bessel_j(order, x)
        if f > 0.0:
            a = x
        else:
            b = x
        df = bessel_j_derivative(order, x)
        step = f / df if df != 0.0 else 0.0
        x_new = x - step
        if not (a < x_new < b):
            x_new = 0.5 * (a + b)
        if abs(x_new - x) < 1e-14 * x:
            return x_new
        x = x_new
    return x
