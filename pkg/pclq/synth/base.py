"""Data models for synthetic PC-LQ systems and sampling noise."""

from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from pclq.core.base import LqSystem, Matrix, as_matrix, is_symmetric
from pclq.structure.base import SparsityBlocks

QMode = Literal["i_onetwo", "identity"]
# spectral: rescale by the Gelfand radius; singular: rescale by the top singular value
BlockNorm = Literal["spectral", "singular"]


class PcLqSpec(BaseModel):
    """
    Block sizes, target radii and seed of a synthetic PC-LQ.

    With ``block_norm="singular"`` the diagonal blocks are scaled so that their
    operator 2-norm equals the target, which bounds their spectral radius by it.
    """

    model_config = ConfigDict(frozen=True)

    s_c: int = Field(default=5, ge=0)
    s_e: int = Field(default=5, ge=0)
    d: int = Field(default=20, ge=1)
    d_u: int = Field(default=1, ge=1)
    rho1: float = Field(default=1.0, ge=0.0)
    rho2: float = Field(default=0.9, ge=0.0)
    rho3: float = Field(default=0.9, ge=0.0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    q_mode: QMode = "i_onetwo"
    block_norm: BlockNorm = "spectral"

    @model_validator(mode="after")
    def _check_sizes(self) -> "PcLqSpec":
        if self.s_c + self.s_e > self.d:
            msg = f"s_c + s_e = {self.s_c + self.s_e} exceeds d = {self.d}"
            raise ValueError(msg)
        return self

    def blocks(self) -> SparsityBlocks:
        """Coordinate-aligned block labels."""
        s = self.s_c + self.s_e
        return SparsityBlocks(
            block1=list(range(self.s_c)),
            block2=list(range(self.s_c, s)),
            block3=list(range(s, self.d)),
        )


class NoiseSpec(BaseModel):
    """Standard deviations of x0, u0 and the process noise, and the x0 covariance kind."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    sigma0: float = Field(default=1.0, ge=0.0)
    sigma_u: float = Field(default=1.0, ge=0.0)
    sigma_xi: float = Field(default=1.0, ge=0.0)
    covariance_kind: Literal["isotropic", "general_pd"] = "isotropic"
    covariance: np.ndarray | None = None

    @field_validator("covariance", mode="before")
    @classmethod
    def _coerce_covariance(cls, v: Any) -> Matrix | None:
        if v is None:
            return None
        cov = as_matrix(v, "covariance", square=True)
        if not is_symmetric(cov):
            msg = "covariance must be symmetric"
            raise ValueError(msg)
        try:
            np.linalg.cholesky(cov)
        except np.linalg.LinAlgError as e:
            msg = "covariance must be positive definite"
            raise ValueError(msg) from e
        return cov

    @model_validator(mode="after")
    def _check_kind(self) -> "NoiseSpec":
        if self.covariance_kind == "general_pd" and self.covariance is None:
            msg = "general_pd noise needs a covariance matrix"
            raise ValueError(msg)
        return self

    def x0_factor(self, d: int) -> Matrix:
        """Matrix L with x0 = z L^T for standard normal rows z."""
        if self.covariance_kind == "isotropic":
            return self.sigma0 * np.eye(d)
        if self.covariance is None or self.covariance.shape != (d, d):
            msg = f"covariance must be {d}x{d}"
            raise ValueError(msg)
        return np.linalg.cholesky(self.covariance)


class GeneratedSystem(BaseModel):
    """A synthetic system with its known block labels."""

    model_config = ConfigDict(frozen=True)

    system: LqSystem
    blocks: SparsityBlocks
    linf_a3: float

    @property
    def assumption_holds(self) -> bool:
        """L-infinity stability of the irrelevant block."""
        return self.linf_a3 < 1.0
