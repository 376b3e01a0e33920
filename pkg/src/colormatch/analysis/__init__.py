"""Closed-form counts, exhaustive enumeration, low-rate curves and threshold fits."""

from .counts import (
    FailureCountTable,
    boundary_ratio,
    failure_counts,
    n_boundary,
    n_fail_correlated,
    n_fail_restricted,
    n_fail_unified,
)
from .enumeration import EnumerationResult, boundary_table, enumerate_boundary_patterns, enumerate_failures
from .fitting import FitDomainError, FitResult, SampleRecord, fit_threshold
from .lowrate import LowRateEstimate, lowrate_estimate

__all__ = [
    "FailureCountTable", "boundary_ratio", "failure_counts", "n_boundary", "n_fail_correlated",
    "n_fail_restricted", "n_fail_unified", "EnumerationResult", "boundary_table",
    "enumerate_boundary_patterns", "enumerate_failures", "FitDomainError", "FitResult",
    "SampleRecord", "fit_threshold", "LowRateEstimate", "lowrate_estimate",
]
