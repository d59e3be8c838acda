"""Tools for the largest possible Rashomon set of a binary classification task:
fairest-member search, uniform sampling, exact small-N enumeration, flip
probabilities, set size, and a linear-model baseline."""

__version__ = "0.1.0"

from .asymptotics import (
    AsymptoticSolution,
    RegimeError,
    SizeCurve,
    average_metric,
    empirical_g,
    expected_tolerance_used,
    flip_probabilities,
    rashomon_base,
    solve_c,
    solve_c_uniform,
    uniform_closed_forms,
    uniform_g,
    uniform_log_base,
)
from .baseline import (
    FeatureDataset,
    LinearModel,
    LinearSampleRun,
    assign_folds,
    estimate_bayes_probs,
    fit_logistic,
    load_feature_csv,
    sample_linear_models,
)
from .core import (
    DataRecord,
    Dataset,
    FlipVector,
    FlipValues,
    MetricKind,
    RashomonQuery,
    accuracy,
    disparity,
    flip_values,
    in_rashomon,
    used_tolerance,
)
from .fairopt import FairnessReport, optimize_ppr, optimize_rate
from .oracle import EnumerationResult, enumerate_rashomon
from .sampler import GibbsConfig, gibbs_sample, gibbs_sample_array, rejection_sample

__all__ = [
    "AsymptoticSolution",
    "DataRecord",
    "Dataset",
    "EnumerationResult",
    "FairnessReport",
    "FeatureDataset",
    "FlipValues",
    "FlipVector",
    "GibbsConfig",
    "LinearModel",
    "LinearSampleRun",
    "MetricKind",
    "RashomonQuery",
    "RegimeError",
    "SizeCurve",
    "accuracy",
    "assign_folds",
    "average_metric",
    "disparity",
    "empirical_g",
    "enumerate_rashomon",
    "estimate_bayes_probs",
    "expected_tolerance_used",
    "fit_logistic",
    "flip_probabilities",
    "flip_values",
    "gibbs_sample",
    "gibbs_sample_array",
    "in_rashomon",
    "load_feature_csv",
    "optimize_ppr",
    "optimize_rate",
    "rashomon_base",
    "rejection_sample",
    "sample_linear_models",
    "solve_c",
    "solve_c_uniform",
    "uniform_closed_forms",
    "uniform_g",
    "uniform_log_base",
    "used_tolerance",
]
