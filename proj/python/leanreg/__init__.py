"""Assumption-lean inference for linear-regression projection parameters."""

from ._core import (
    LeanregError,
    __version__,
    bonferroni_crit,
    confidence_intervals,
    coverage,
    fit,
    max_gauss_quantile,
    partial_correlations,
    run_cli,
    sidak_crit,
    verify_bounds,
)

__all__ = [
    "LeanregError",
    "__version__",
    "bonferroni_crit",
    "confidence_intervals",
    "coverage",
    "fit",
    "max_gauss_quantile",
    "partial_correlations",
    "run_cli",
    "sidak_crit",
    "verify_bounds",
]
