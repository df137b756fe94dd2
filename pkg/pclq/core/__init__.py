"""Core LQ kernels: data models, stability certificate and Riccati solvers."""

from .base import LqSystem, Matrix, RiccatiSolution, StabilityReport, as_matrix
from .exceptions import (
    ConfigError,
    DegenerateBlockError,
    DegenerateResidualError,
    InvariantViolationError,
    MaxIterExceededError,
    NonFiniteError,
    NumericalError,
    PclqError,
    ShapeError,
    SigmaZeroUnknownError,
    SingularInnerSolveError,
    UnstableInitialPolicyError,
    UnstablePolicyError,
)
from .riccati import (
    average_cost,
    closed_loop,
    cost_ratio,
    gain_from_value,
    policy_iteration,
    policy_value,
    riccati_map,
    riccati_residual,
    solve_dare,
    solve_dare_reference,
    solve_dare_value_iteration,
)
from .stability import gelfand_radius, is_stable, spectral_radius_estimate

__all__ = [
    "ConfigError",
    "DegenerateBlockError",
    "DegenerateResidualError",
    "InvariantViolationError",
    "LqSystem",
    "Matrix",
    "MaxIterExceededError",
    "NonFiniteError",
    "NumericalError",
    "PclqError",
    "RiccatiSolution",
    "ShapeError",
    "SigmaZeroUnknownError",
    "SingularInnerSolveError",
    "StabilityReport",
    "UnstableInitialPolicyError",
    "UnstablePolicyError",
    "as_matrix",
    "average_cost",
    "closed_loop",
    "cost_ratio",
    "gain_from_value",
    "gelfand_radius",
    "is_stable",
    "policy_iteration",
    "policy_value",
    "riccati_map",
    "riccati_residual",
    "solve_dare",
    "solve_dare_reference",
    "solve_dare_value_iteration",
    "spectral_radius_estimate",
]
