"""Data models for system identification from one-step transitions."""

from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator

from pclq.core.base import Matrix, RiccatiSolution, as_matrix
from pclq.core.exceptions import ShapeError

EstimatorKind = Literal["ols", "second_moment", "semiparametric"]


class Dataset(BaseModel):
    """
    N transition samples (x0, u0, x1) stored row-wise.

    ``sigma0`` is the per-coordinate standard deviation of x0 under isotropic
    sampling, or 0 to mark a general covariance.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    x0: np.ndarray
    u0: np.ndarray
    x1: np.ndarray
    sigma0: float = Field(default=0.0, ge=0.0)

    @field_validator("x0", "u0", "x1", mode="before")
    @classmethod
    def _coerce_matrix(cls, v: Any, info: ValidationInfo) -> Matrix:
        return as_matrix(v, info.field_name)

    @model_validator(mode="after")
    def _check_shapes(self) -> "Dataset":
        if self.x0.shape != self.x1.shape:
            msg = f"x0 and x1 shapes differ: {self.x0.shape} vs {self.x1.shape}"
            raise ShapeError(msg)
        if self.u0.shape[0] != self.x0.shape[0]:
            msg = f"u0 has {self.u0.shape[0]} rows, expected {self.x0.shape[0]}"
            raise ShapeError(msg)
        if self.x0.shape[0] < 1:
            msg = "dataset must hold at least one sample"
            raise ShapeError(msg)
        return self

    @property
    def n(self) -> int:
        """Number of samples N."""
        return int(self.x0.shape[0])

    @property
    def d(self) -> int:
        """State dimension."""
        return int(self.x0.shape[1])

    @property
    def d_u(self) -> int:
        """Input dimension."""
        return int(self.u0.shape[1])


class SemiparamProblem(BaseModel):
    """
    Regression y = <w, z1> + <e, z2> + noise where only w is of interest.

    z1 holds the d_w target features and z2 the d_e nuisance features.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    y: np.ndarray
    z1: np.ndarray
    z2: np.ndarray

    @field_validator("y", mode="before")
    @classmethod
    def _coerce_response(cls, v: Any) -> np.ndarray:
        y = np.array(v, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(y)):
            msg = "y has non-finite entries"
            raise ValueError(msg)
        y.flags.writeable = False
        return y

    @field_validator("z1", "z2", mode="before")
    @classmethod
    def _coerce_features(cls, v: Any, info: ValidationInfo) -> Matrix:
        return as_matrix(v, info.field_name)

    @model_validator(mode="after")
    def _check_shapes(self) -> "SemiparamProblem":
        n = self.y.shape[0]
        if self.z1.shape[0] != n or self.z2.shape[0] != n:
            msg = "y, z1 and z2 must have the same number of rows"
            raise ShapeError(msg)
        if self.z1.shape[1] < 1:
            msg = "z1 needs at least one target feature"
            raise ShapeError(msg)
        return self


class EstimateResult(BaseModel):
    """Entrywise estimate of (A, B) and the estimator that produced it."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    a_hat: np.ndarray
    b_hat: np.ndarray
    estimator_kind: EstimatorKind
    failed_entries: int = 0

    @field_validator("a_hat", "b_hat", mode="before")
    @classmethod
    def _coerce_matrix(cls, v: Any, info: ValidationInfo) -> Matrix:
        return as_matrix(v, info.field_name)


class LearnedPolicy(BaseModel):
    """Certainty-equivalent policy together with the raw and thresholded models."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    solution: RiccatiSolution
    estimate: EstimateResult
    a_bar: np.ndarray
    b_bar: np.ndarray
    eps: float

    @field_validator("a_bar", "b_bar", mode="before")
    @classmethod
    def _coerce_matrix(cls, v: Any, info: ValidationInfo) -> Matrix:
        return as_matrix(v, info.field_name)
