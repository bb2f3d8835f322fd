"""Sub-Gaussian tail bounds for normalized sums of sphere-valued vectors.

The normalized sum Y_n = sum_j X_j / sqrt(n) satisfies Zolotarev's
comparison bound P(||Y_n|| > t) <= exp(-dim * q(t)) with
q(t) = (t^2 - ln t - 1) / 2, because every even moment of ||X_j|| (= 1) is
dominated by the matching moment of the comparison Gaussian with
covariance identity/dim.  The helpers here evaluate that bound, the
threshold above which q(t) exceeds gamma * t^2 / 2, and the closed form of
the resulting uniform-integrability integral.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "admissible_exponent_upper",
    "gamma_threshold",
    "ip_bound",
    "zolotarev_exponent",
    "zolotarev_tail_bound",
]


def _check_dim(dim):
    if not isinstance(dim, (int, np.integer)) or dim < 1:
        raise ValueError(f"dimension must be a positive integer, got {dim!r}")


def _check_gamma(gamma):
    if not 0.5 < gamma < 1.0:
        raise ValueError(f"gamma must lie strictly in (1/2, 1), got {gamma!r}")


def zolotarev_exponent(t):
    """q(t) = (t^2 - ln t - 1) / 2 for t > 0; zero at t = 1, increasing beyond."""
    if not t > 0.0:
        raise ValueError(f"t must be positive, got {t!r}")
    return 0.5 * (t * t - math.log(t) - 1.0)


def zolotarev_tail_bound(dim, t):
    """exp(-dim * q(t)), an upper bound for P(||Y_n|| > t), any n.

    Restricted to t >= 1: below 1 the exponent is negative (its minimum
    sits at 1/sqrt(2)) and the bound exceeds one, so rather than return a
    vacuous probability the call is rejected.
    """
    _check_dim(dim)
    if not t >= 1.0:
        raise ValueError(f"tail bound is only meaningful for t >= 1, got {t!r}")
    return math.exp(-dim * zolotarev_exponent(t))


def gamma_threshold(gamma, tol=1e-10):
    """Smallest t* > 1 with t^2 - ln t - 1 >= gamma * t^2 beyond it.

    t* is the unique root above 1 of (1 - gamma) t^2 = ln t + 1, found by
    bisection (the left side is below the right at t = 1 and eventually
    dominates).  The initial bracket [1, 100] is doubled upward if needed.
    """
    _check_gamma(gamma)
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol!r}")

    def gap(t):
        return (1.0 - gamma) * t * t - math.log(t) - 1.0

    lo, hi = 1.0, 100.0
    while gap(hi) < 0.0:
        lo = hi
        hi *= 2.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if gap(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def admissible_exponent_upper(dim, c, gamma):
    """Upper endpoint dim * c^2 * gamma / 2 of the admissible p-interval.

    ``ip_bound`` is finite exactly for p strictly between 1 and this value;
    with c >= best_constant(dim) and gamma near 1 the interval is nonempty
    for every dimension.
    """
    _check_dim(dim)
    _check_gamma(gamma)
    if not c > 0.0:
        raise ValueError(f"c must be positive, got {c!r}")
    return 0.5 * dim * c * c * gamma


def ip_bound(dim, c, gamma, p):
    """Closed-form bound 1 + 1/(alpha - 1) on the uniform-integrability integral.

    alpha = dim * c^2 * gamma / (2p) is the decay exponent of the dominated
    integrand t^(-alpha) on [1, inf); alpha <= 1 means the integral
    diverges and p was chosen outside (1, dim * c^2 * gamma / 2).
    """
    if not p > 1.0:
        raise ValueError(f"p must exceed 1, got {p!r}")
    alpha = admissible_exponent_upper(dim, c, gamma) / p
    if not alpha > 1.0:
        raise ValueError(
            f"integral diverges: need p < dim*c^2*gamma/2 = "
            f"{admissible_exponent_upper(dim, c, gamma)!r}, got p = {p!r}")
    return 1.0 + 1.0 / (alpha - 1.0)
