"""Binomial proportion confidence intervals for rare events.

Interval estimators (Wald, Clopper-Pearson, Wilson, Agresti-Coull), exact
enumeration of coverage probability and expected relative margin of error,
tolerance-band classification, and sample-size planning, with a CLI for
reproducing the reference comparison tables and case studies.
"""

__version__ = "0.1.0"

from .estimators import (ALL_KINDS, EstimatorKind, Interval, Observation,
                         PropertyFlags, agresti_coull_interval,
                         clopper_pearson_interval, interval, properties,
                         wald_interval, wilson_interval)
from .evaluation import (DEFAULT_TAIL_TOL, DesignPoint, EvalResult, GridResult,
                         ToleranceBand, classify, coverage_probability,
                         evaluate, evaluate_grid, expected_moe, expected_width,
                         relative_moe)
from .numerics import (NonConvergenceError, beta_quantile, binomial_window,
                       log_binomial_pmf, normal_quantile, reg_inc_beta)
from .planning import (PlanRequest, PlanResult, agresti_coull_sample_size,
                       clopper_pearson_sample_size, eps_r_threshold,
                       generic_sample_size, planned_half_width,
                       relative_to_absolute, sample_sizes, wald_sample_size,
                       wilson_sample_size)

__all__ = [
    "__version__",
    "ALL_KINDS", "EstimatorKind", "Interval", "Observation", "PropertyFlags",
    "interval", "wald_interval", "clopper_pearson_interval", "wilson_interval",
    "agresti_coull_interval", "properties",
    "DEFAULT_TAIL_TOL", "DesignPoint", "EvalResult", "GridResult",
    "ToleranceBand", "classify", "coverage_probability", "evaluate",
    "evaluate_grid", "expected_moe", "expected_width", "relative_moe",
    "NonConvergenceError", "beta_quantile", "binomial_window",
    "log_binomial_pmf", "normal_quantile", "reg_inc_beta",
    "PlanRequest", "PlanResult", "wald_sample_size", "wilson_sample_size",
    "agresti_coull_sample_size", "clopper_pearson_sample_size",
    "generic_sample_size", "planned_half_width", "sample_sizes",
    "eps_r_threshold", "relative_to_absolute",
]
