"""Monte-Carlo success-frequency experiments and their CSV reports."""

from .base import ESTIMATOR_TAGS, ExperimentConfig, SweepRow, TrialResult
from .report import emit_csv, read_csv
from .runner import aggregate, run_sweep, run_trial, run_trials, trial_data

__all__ = [
    "ESTIMATOR_TAGS",
    "ExperimentConfig",
    "SweepRow",
    "TrialResult",
    "aggregate",
    "emit_csv",
    "read_csv",
    "run_sweep",
    "run_trial",
    "run_trials",
    "trial_data",
]
