"""Sharp sub-Gaussian Khintchine constants for uniform vectors on spheres.

A verification library: exact closed forms for the best psi2 constant and
its companions, a deterministic Monte Carlo sampler for sphere-valued
sums, empirical Orlicz norms, sub-Gaussian tail bounds, and a report
runner (``sphere-khintchine`` on the command line) that checks every
claim numerically.
"""

from .analytic import (
    SeriesResult,
    asymptotic_limit,
    best_constant,
    gaussian_even_moment,
    gaussian_psi2_norm_exact,
    kk_even_moment_constant,
    kk_upper_bound,
    log_gamma_ratio,
    mgf_closed_form,
    mgf_series,
)
from .orlicz import (
    OrliczEstimate,
    empirical_orlicz_norm,
    exact_orlicz_norm_constant,
    young,
)
from .sampler import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    EMPIRICAL_MOMENT_CAP,
    GaussianNorm,
    NormalizedSumNorm,
    RandomStream,
    WeightedSumNorm,
    collect_batch,
    empirical_even_moment,
    empirical_tail,
    export_batch,
    sample_gaussian_norm,
    sample_normalized_sum_norm,
    sample_uniform_sphere,
    sample_weighted_sum_norm,
)
from .tailbounds import (
    admissible_exponent_upper,
    gamma_threshold,
    ip_bound,
    zolotarev_exponent,
    zolotarev_tail_bound,
)

__version__ = "1.0.0"

__all__ = [
    "DEFAULT_SAMPLES",
    "DEFAULT_SEED",
    "EMPIRICAL_MOMENT_CAP",
    "GaussianNorm",
    "NormalizedSumNorm",
    "OrliczEstimate",
    "RandomStream",
    "SeriesResult",
    "WeightedSumNorm",
    "admissible_exponent_upper",
    "asymptotic_limit",
    "best_constant",
    "collect_batch",
    "empirical_even_moment",
    "empirical_orlicz_norm",
    "empirical_tail",
    "exact_orlicz_norm_constant",
    "export_batch",
    "gamma_threshold",
    "gaussian_even_moment",
    "gaussian_psi2_norm_exact",
    "ip_bound",
    "kk_even_moment_constant",
    "kk_upper_bound",
    "log_gamma_ratio",
    "mgf_closed_form",
    "mgf_series",
    "sample_gaussian_norm",
    "sample_normalized_sum_norm",
    "sample_uniform_sphere",
    "sample_weighted_sum_norm",
    "young",
    "zolotarev_exponent",
    "zolotarev_tail_bound",
]
