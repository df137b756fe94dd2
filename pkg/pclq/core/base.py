"""Base matrix helpers and data models for discrete-time LQ systems."""

from typing import Any

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, ValidationInfo, field_validator, model_validator

from pclq.core.exceptions import NonFiniteError, ShapeError

Matrix = npt.NDArray[np.float64]

SYMMETRY_RTOL = 1e-12


def as_matrix(value: Any, name: str = "matrix", *, square: bool = False) -> Matrix:
    """
    Convert a value to a read-only float64 matrix.

    Scalars become 1x1 matrices. Vectors are rejected since their orientation
    is ambiguous.

    Args:
        value: Array-like input
        name: Name used in error messages
        square: Require a square matrix

    Returns:
        Matrix: A fresh, immutable 2-D array

    """
    arr = np.array(value, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        msg = f"{name} must be 2-D, got shape {arr.shape}"
        raise ShapeError(msg)
    if square and arr.shape[0] != arr.shape[1]:
        msg = f"{name} must be square, got shape {arr.shape}"
        raise ShapeError(msg)
    if not np.all(np.isfinite(arr)):
        msg = f"{name} has non-finite entries"
        raise NonFiniteError(msg)
    arr.flags.writeable = False
    return arr


def symmetrize(m: Matrix) -> Matrix:
    """Return (M + M^T) / 2."""
    return 0.5 * (m + m.T)


def is_symmetric(m: Matrix, rtol: float = SYMMETRY_RTOL) -> bool:
    """Check symmetry relative to the largest entry magnitude."""
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    return bool(np.max(np.abs(m - m.T), initial=0.0) <= rtol * scale)


def fro(m: Matrix) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(m, "fro"))


class LqSystem(BaseModel):
    """
    Discrete-time LQ problem x' = A x + B u + xi with stage cost x^T Q x + u^T R u.

    Q must be symmetric positive semidefinite and R symmetric positive definite.
    Definiteness is not checked here; a non-PD R surfaces as a failed
    Cholesky factorization inside the Riccati solvers.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    a: np.ndarray
    b: np.ndarray
    q: np.ndarray
    r: np.ndarray

    @field_validator("a", "b", "q", "r", mode="before")
    @classmethod
    def _coerce_matrix(cls, v: Any, info: ValidationInfo) -> Matrix:
        return as_matrix(v, info.field_name)

    @model_validator(mode="after")
    def _check_dimensions(self) -> "LqSystem":
        d = self.a.shape[0]
        if self.a.shape != (d, d):
            msg = f"a must be square, got {self.a.shape}"
            raise ShapeError(msg)
        if self.b.shape[0] != d:
            msg = f"b must have {d} rows, got {self.b.shape}"
            raise ShapeError(msg)
        if self.q.shape != (d, d):
            msg = f"q must be {d}x{d}, got {self.q.shape}"
            raise ShapeError(msg)
        d_u = self.b.shape[1]
        if self.r.shape != (d_u, d_u):
            msg = f"r must be {d_u}x{d_u}, got {self.r.shape}"
            raise ShapeError(msg)
        if not is_symmetric(self.q):
            msg = "q must be symmetric"
            raise ValueError(msg)
        if not is_symmetric(self.r):
            msg = "r must be symmetric"
            raise ValueError(msg)
        return self

    @property
    def d(self) -> int:
        """State dimension."""
        return int(self.a.shape[0])

    @property
    def d_u(self) -> int:
        """Input dimension."""
        return int(self.b.shape[1])

    def with_cost(self, q: Any = None, r: Any = None) -> "LqSystem":
        """Return the same dynamics with replaced cost matrices."""
        return LqSystem(
            a=self.a,
            b=self.b,
            q=self.q if q is None else q,
            r=self.r if r is None else r,
        )


class RiccatiSolution(BaseModel):
    """Value matrix P, gain K (u = K x) and solver diagnostics."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    p: np.ndarray
    k: np.ndarray
    iterations: int
    residual: float

    @field_validator("p", "k", mode="before")
    @classmethod
    def _coerce_matrix(cls, v: Any, info: ValidationInfo) -> Matrix:
        return as_matrix(v, info.field_name)


class StabilityReport(BaseModel):
    """Result of the norm-power stability certificate."""

    is_stable: bool
    radius_estimate: float
    certified_power: int | None = None

    @model_validator(mode="after")
    def _stable_has_certificate(self) -> "StabilityReport":
        if self.is_stable and self.certified_power is None:
            msg = "a stable report must carry the certified power"
            raise ValueError(msg)
        return self
