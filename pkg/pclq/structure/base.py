"""Data models for structural analysis of LQ systems."""

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from pclq.core.base import Matrix, as_matrix, fro

ORTHONORMAL_TOL = 1e-10
NESTING_TOL = 1e-8


class SubspaceBasis(BaseModel):
    """Orthonormal basis (d x r) of a subspace of R^d."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    basis: np.ndarray

    @field_validator("basis", mode="before")
    @classmethod
    def _coerce_basis(cls, v: Any) -> Matrix:
        basis = as_matrix(v, "basis")
        gram = basis.T @ basis
        if np.max(np.abs(gram - np.eye(basis.shape[1])), initial=0.0) > ORTHONORMAL_TOL:
            msg = "basis columns must be orthonormal"
            raise ValueError(msg)
        return basis

    @classmethod
    def empty(cls, d: int) -> "SubspaceBasis":
        """The zero subspace of R^d."""
        return cls(basis=np.zeros((d, 0)))

    @classmethod
    def coordinates(cls, d: int, indices: list[int]) -> "SubspaceBasis":
        """Span of the canonical vectors e_i for the given indices."""
        return cls(basis=np.eye(d)[:, list(indices)])

    @property
    def dim_ambient(self) -> int:
        """Ambient dimension d."""
        return int(self.basis.shape[0])

    @property
    def dim_subspace(self) -> int:
        """Subspace dimension r."""
        return int(self.basis.shape[1])

    def projector(self) -> Matrix:
        """Orthogonal projector basis @ basis^T."""
        return self.basis @ self.basis.T

    def contains(self, other: "SubspaceBasis", tol: float = NESTING_TOL) -> bool:
        """Check span(other) is a subspace of span(self) via ||P_self P_other - P_other||_F."""
        p_other = other.projector()
        return fro(self.projector() @ p_other - p_other) < tol


class PcPartition(BaseModel):
    """Nested input, controllable and relevant subspaces of a PC-LQ decomposition."""

    model_config = ConfigDict(frozen=True)

    p_b: SubspaceBasis
    p_c: SubspaceBasis
    p_r: SubspaceBasis
    residual: float

    @model_validator(mode="after")
    def _check_nesting(self) -> "PcPartition":
        if not self.p_c.contains(self.p_b) or not self.p_r.contains(self.p_c):
            msg = "subspaces must be nested: span(p_b) <= span(p_c) <= span(p_r)"
            raise ValueError(msg)
        return self

    @property
    def s_c(self) -> int:
        """Controllable dimension."""
        return self.p_c.dim_subspace

    @property
    def s(self) -> int:
        """Relevant dimension s = s_c + s_e."""
        return self.p_r.dim_subspace

    @property
    def s_e(self) -> int:
        """Relevant uncontrollable dimension."""
        return self.s - self.s_c


class SparsityBlocks(BaseModel):
    """Coordinate labels of the three PC-LQ blocks."""

    model_config = ConfigDict(frozen=True)

    block1: list[int]
    block2: list[int]
    block3: list[int]

    @model_validator(mode="after")
    def _check_partition(self) -> "SparsityBlocks":
        labels = self.block1 + self.block2 + self.block3
        if sorted(labels) != list(range(len(labels))):
            msg = "blocks must partition the coordinates 0..d-1"
            raise ValueError(msg)
        return self

    @property
    def d(self) -> int:
        """Ambient dimension."""
        return len(self.block1) + len(self.block2) + len(self.block3)

    @property
    def relevant(self) -> list[int]:
        """Coordinates of blocks 1 and 2."""
        return sorted(self.block1 + self.block2)

    def zero_mask(self) -> np.ndarray:
        """Boolean d x d mask of the entries of A that the block form forces to zero."""
        d = self.d
        label = np.empty(d, dtype=int)
        label[self.block1] = 1
        label[self.block2] = 2
        label[self.block3] = 3
        rows = label[:, None]
        cols = label[None, :]
        allowed = (
            ((rows == 1) & ((cols == 1) | (cols == 2)))
            | ((rows == 2) & (cols == 2))
            | ((rows == 3) & ((cols == 2) | (cols == 3)))
        )
        return ~allowed
