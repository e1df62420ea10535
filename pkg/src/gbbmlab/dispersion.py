"""Closed-form linBBM dispersion relation and its group-velocity geometry.

All functions accept scalars or numpy arrays and are vectorized.  The
dispersion relation is omega(xi) = xi / (1 + xi^2); its group velocity has a
global max of 1 at xi = 0, zeros at xi = +-1, and a global min of -1/8 at the
inflection frequencies xi = +-sqrt(3).
"""

from __future__ import annotations

import math

import numpy as np

SQRT3 = math.sqrt(3.0)

# reflection() is undefined on |xi| <= 1; reject anything inside this guard
# band instead of returning huge values near the asymptote.
REFLECTION_MARGIN = 1e-12


def omega(xi):
    """Dispersion relation xi / (1 + xi^2).  Odd, bounded by 1/2."""
    xi = np.asarray(xi, dtype=float)
    return xi / (1.0 + xi * xi)


def omega_prime(xi):
    """Group velocity (1 - xi^2) / (1 + xi^2)^2.  Even, range [-1/8, 1]."""
    xi = np.asarray(xi, dtype=float)
    q = 1.0 + xi * xi
    return (1.0 - xi * xi) / (q * q)


def omega_second(xi):
    """Second derivative 2 xi (xi^2 - 3) / (1 + xi^2)^3.

    Odd, with zeros exactly at 0 and +-sqrt(3).  Evaluated from the
    closed-form rational expression so the inflection zeros are exact.
    """
    xi = np.asarray(xi, dtype=float)
    q = 1.0 + xi * xi
    return 2.0 * xi * (xi * xi - 3.0) / (q * q * q)


def reflection(xi):
    """The partner frequency sharing a group velocity with xi.

    r(xi) = sgn(xi) * sqrt((xi^2 + 3) / (xi^2 - 1)); an involution on
    {|xi| > 1} with fixed points +-sqrt(3).

    Raises ValueError for |xi| <= 1 + 1e-12 (vertical asymptote at |xi| = 1).
    """
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(np.abs(xi_arr) <= 1.0 + REFLECTION_MARGIN):
        raise ValueError("reflection is undefined for |xi| <= 1")
    out = np.sign(xi_arr) * np.sqrt((xi_arr * xi_arr + 3.0) / (xi_arr * xi_arr - 1.0))
    if np.isscalar(xi) or np.ndim(xi) == 0:
        return float(out)
    return out


def _xi_star(c: float) -> float:
    """Positive root of omega_prime(xi) = c for c in (-1/8, 0) u (0, 1).

    The naive closed form sqrt((-(2c+1) + sqrt(8c+1)) / (2c)) is 0/0 at
    c = 0; multiplying by the conjugate gives the stable equivalent
    xi*^2 = 2(1 - c) / (sqrt(8c+1) + 2c + 1), valid on the whole range.
    """
    disc = math.sqrt(8.0 * c + 1.0)
    return math.sqrt(2.0 * (1.0 - c) / (disc + 2.0 * c + 1.0))


def solve_group_velocity(c: float, tol: float = 1e-10) -> tuple[float, ...]:
    """All solutions of omega_prime(xi) = c, sorted ascending.

    The census: empty for c < -1/8 or c > 1; {0} for c = 1; {-1, 1} for
    c = 0; {-sqrt(3), sqrt(3)} for c = -1/8; two roots +-xi* for c in (0, 1);
    four roots +-xi*, +-r(xi*) for c in (-1/8, 0).

    Every returned value satisfies |omega_prime(xi) - c| < tol.
    """
    if not math.isfinite(c):
        raise ValueError("group velocity must be finite")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if c < -0.125 or c > 1.0:
        sols: tuple[float, ...] = ()
    elif c == 1.0:
        sols = (0.0,)
    elif c == 0.0:
        sols = (-1.0, 1.0)
    elif c == -0.125:
        sols = (-SQRT3, SQRT3)
    else:
        xs = _xi_star(c)
        if c > 0.0:
            sols = (-xs, xs)
        else:
            # outer root pair, from the second quadratic root; this form has
            # no cancellation anywhere on (-1/8, 0) (unlike r(xi*), whose
            # argument approaches the asymptote as c -> 0-)
            rs = math.sqrt((-(2.0 * c + 1.0) - math.sqrt(8.0 * c + 1.0)) / (2.0 * c))
            sols = tuple(sorted((-xs, xs, -rs, rs)))
    for s in sols:
        if abs(float(omega_prime(s)) - c) >= tol:
            raise ArithmeticError(
                f"group-velocity inversion failed at c={c}: xi={s}"
            )
    return sols
