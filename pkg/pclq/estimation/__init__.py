"""System identification from one-step transitions and the end-to-end learner."""

from .base import Dataset, EstimateResult, EstimatorKind, LearnedPolicy, SemiparamProblem
from .estimators import estimate_b_second_moment, ols_estimate, pinv, second_moment_estimate
from .learner import estimate, learn_policy
from .semiparametric import (
    GramCache,
    semiparametric_entry,
    semiparametric_estimate_a,
    semiparametric_solve,
)
from .thresholding import false_positives, missed_nonzeros, soft_threshold

__all__ = [
    "Dataset",
    "EstimateResult",
    "EstimatorKind",
    "GramCache",
    "LearnedPolicy",
    "SemiparamProblem",
    "estimate",
    "estimate_b_second_moment",
    "false_positives",
    "learn_policy",
    "missed_nonzeros",
    "ols_estimate",
    "pinv",
    "second_moment_estimate",
    "semiparametric_entry",
    "semiparametric_estimate_a",
    "semiparametric_solve",
    "soft_threshold",
]
