"""Closed-form constants for the sub-Gaussian Khintchine inequality on spheres.

Everything in this module is an exact formula: the sharp psi2 constant for
uniformly distributed unit vectors in ``dim`` dimensions, the optimal even
L_p moment constants, Gaussian norm moments, and the moment generating
function of the squared norm together with its Taylor series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SeriesResult",
    "asymptotic_limit",
    "best_constant",
    "gaussian_even_moment",
    "gaussian_psi2_norm_exact",
    "kk_even_moment_constant",
    "kk_upper_bound",
    "log_gamma_ratio",
    "mgf_closed_form",
    "mgf_series",
]

_LN2 = math.log(2.0)


def _check_dim(dim):
    if not isinstance(dim, (int, np.integer)) or dim < 1:
        raise ValueError(f"dimension must be a positive integer, got {dim!r}")


def _check_order(k):
    if not isinstance(k, (int, np.integer)) or k < 0:
        raise ValueError(f"moment order must be a nonnegative integer, got {k!r}")


@dataclass(frozen=True)
class SeriesResult:
    """Outcome of a truncated series evaluation.

    ``converged`` guarantees ``|last_term| <= tol * max(1, |value|)``; a
    result with ``converged=False`` means the term cap was hit and the
    value must not be trusted silently.
    """

    value: float
    terms_used: int
    converged: bool
    last_term: float


def log_gamma_ratio(dim, k):
    """ln(Gamma(k + dim/2) / Gamma(dim/2)) via the rising-product identity.

    Summing ln(dim/2 + m) for m < k stays finite for any practical k,
    whereas Gamma(k + dim/2) itself overflows doubles near k ~ 85.
    """
    _check_dim(dim)
    _check_order(k)
    if k == 0:
        return 0.0
    return float(np.log(0.5 * dim + np.arange(k)).sum())


def kk_even_moment_constant(dim, k):
    """Optimal constant for the 2k-th moment of a unit-coefficient sum.

    This is the Koenig-Kwapien L_p Khintchine constant at p = 2k, raised
    to the power 2k: (2/dim)^k * Gamma(k + dim/2) / Gamma(dim/2).
    """
    _check_dim(dim)
    _check_order(k)
    return math.exp(k * math.log(2.0 / dim) + log_gamma_ratio(dim, k))


def best_constant(dim):
    """Sharp psi2 Khintchine constant for uniform vectors on the unit sphere.

    Equals sqrt(2/dim) / sqrt(1 - 2**(-2/dim)); strictly decreasing in the
    dimension, with limit ``asymptotic_limit()``.  The denominator is
    evaluated with expm1 so the value stays accurate for huge ``dim``.
    """
    _check_dim(dim)
    return math.sqrt(2.0 / (dim * -math.expm1(-2.0 * _LN2 / dim)))


def asymptotic_limit():
    """Large-dimension limit of ``best_constant``: 1/sqrt(ln 2)."""
    return 1.0 / math.sqrt(_LN2)


def gaussian_psi2_norm_exact(dim):
    """psi2 norm of a standard ``dim``-dimensional Gaussian vector's length.

    Closed form sqrt(2) / sqrt(1 - 2**(-2/dim)); algebraically equal to
    sqrt(dim) * best_constant(dim).
    """
    _check_dim(dim)
    return math.sqrt(2.0 / -math.expm1(-2.0 * _LN2 / dim))


def gaussian_even_moment(dim, k, variance_scale=1.0):
    """E ||Z||^(2k) for Z centered Gaussian with covariance scale * identity.

    Closed form (2 * scale)^k * Gamma(dim/2 + k) / Gamma(dim/2).  With
    scale = 1/dim this coincides with ``kk_even_moment_constant``, which
    is what makes the Gaussian the extremal comparison law.
    """
    _check_dim(dim)
    _check_order(k)
    if not variance_scale > 0.0:
        raise ValueError(f"variance_scale must be positive, got {variance_scale!r}")
    if k == 0:
        return 1.0
    return math.exp(k * math.log(2.0 * variance_scale) + log_gamma_ratio(dim, k))


def kk_upper_bound(dim, k, coefficients):
    """Moment bound: E ||sum a_j X_j||^(2k) <= constant * (sum a_j^2)^k."""
    a = np.asarray(coefficients, dtype=np.float64)
    sq = float(a @ a)
    return kk_even_moment_constant(dim, k) * sq**k


def mgf_closed_form(dim, x):
    """(1 - 2x/dim)^(-dim/2), the MGF of the squared Gaussian norm.

    Defined for x < dim/2; at and beyond the pole a domain error is raised
    rather than returning infinity.  At x = 1/best_constant(dim)**2 the
    value is exactly 2, which is what pins down the best constant.
    """
    _check_dim(dim)
    u = 2.0 * x / dim
    if not u < 1.0:
        raise ValueError(f"x must be below dim/2 = {dim / 2}, got {x!r}")
    return math.exp(-0.5 * dim * math.log1p(-u))


def mgf_series(dim, x, tol=1e-12, max_terms=10_000):
    """Taylor series of ``mgf_closed_form`` with explicit convergence status.

    Terms are x^k (2/dim)^k Gamma(k + dim/2) / (Gamma(dim/2) k!), built in
    log space and accumulated in increasing k.  Convergence requires the
    last added term to be below ``tol`` relative to the running sum *and*
    the term ratio to have dropped below one (terms first grow when
    x > 1).  Hitting ``max_terms`` yields ``converged=False`` instead of a
    silently wrong value.

    Requires 0 <= x < dim/2 (the term ratio tends to 2x/dim, so the series
    converges exactly on that range).
    """
    _check_dim(dim)
    if not 0.0 <= x or not x < 0.5 * dim:
        raise ValueError(f"x must lie in [0, dim/2) = [0, {dim / 2}), got {x!r}")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    if not isinstance(max_terms, (int, np.integer)) or max_terms < 1:
        raise ValueError(f"max_terms must be a positive integer, got {max_terms!r}")

    if x == 0.0:
        return SeriesResult(value=1.0, terms_used=1, converged=True, last_term=0.0)

    half = 0.5 * dim
    log_step = math.log(x) + math.log(2.0 / dim)
    total = 1.0  # k = 0 term
    log_term = 0.0
    term = 1.0
    for k in range(1, max_terms):
        log_term += log_step + math.log(half + (k - 1)) - math.log(k)
        term = math.exp(log_term)
        total += term
        ratio_next = x * (2.0 / dim) * (half + k) / (k + 1)
        if term <= tol * max(1.0, total) and ratio_next < 1.0:
            return SeriesResult(value=total, terms_used=k + 1, converged=True,
                                last_term=term)
    return SeriesResult(value=total, terms_used=max_terms, converged=False,
                        last_term=term)
