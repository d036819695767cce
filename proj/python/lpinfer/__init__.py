"""Bias-aware confidence intervals for local polynomial regression and
sharp regression-discontinuity designs.

The heavy lifting lives in the compiled extension ``_lpinfer``; this package
re-exports its functions.
"""

from ._lpinfer import (  # noqa: F401
    LpinferError,
    bc_residuals,
    bootstrap_moments,
    ci,
    convolution_kernel,
    draw_sample,
    equivalent_kernel,
    eval_kernel,
    kernel_constants,
    kernel_moment,
    local_fit,
    local_weights,
    lp_bc_weights,
    normal_cdf,
    normal_quantile,
    oracle_bandwidth,
    prepivot_cdf_apply,
    prepivot_cdf_inverse,
    q_factor,
    rdd,
    run_simulation,
)

__all__ = [
    "LpinferError", "bc_residuals", "bootstrap_moments", "ci",
    "convolution_kernel", "draw_sample", "equivalent_kernel", "eval_kernel",
    "kernel_constants", "kernel_moment", "local_fit", "local_weights",
    "lp_bc_weights", "normal_cdf", "normal_quantile", "oracle_bandwidth",
    "prepivot_cdf_apply", "prepivot_cdf_inverse", "q_factor", "rdd",
    "run_simulation",
]

__version__ = "0.1.0"
