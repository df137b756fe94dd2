"""Data models for the Monte-Carlo success-frequency experiment."""

import math
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from pclq.estimation.base import EstimatorKind
from pclq.synth.base import BlockNorm, NoiseSpec, QMode
from pclq.synth.io import load_yaml

EstimatorTag = Literal["ols", "ols_sth", "moment", "semiparam"]
DareMethod = Literal["value", "policy", "reference"]

# tag -> (estimator, apply soft threshold)
ESTIMATOR_TAGS: dict[str, tuple[EstimatorKind, bool]] = {
    "ols": ("ols", False),
    "ols_sth": ("ols", True),
    "moment": ("second_moment", True),
    "semiparam": ("semiparametric", True),
}


class ExperimentConfig(BaseModel):
    """
    Grid, system and learner parameters of a success-frequency sweep.

    The defaults are a desk-scale version of the full grid, which is
    available as ``ExperimentConfig.full_grid()``. Diagonal blocks are
    normalized by their top singular value, so rho1 = 1 bounds the
    controllable block by a unit 2-norm.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    d_list: list[int] = Field(default_factory=lambda: [20, 50])
    n_grid: list[int] = Field(default_factory=lambda: list(range(100, 1001, 100)))
    trials: int = Field(default=50, ge=1)
    eps: float = Field(default=0.1, ge=0.0)
    estimators: list[EstimatorTag] = Field(default_factory=lambda: ["ols", "ols_sth", "moment", "semiparam"])

    s_c: int = Field(default=5, ge=0)
    s_e: int = Field(default=5, ge=0)
    d_u: int = Field(default=1, ge=1)
    rho1: float = Field(default=1.0, ge=0.0)
    rho2: float = Field(default=0.9, ge=0.0)
    rho3: float = Field(default=0.9, ge=0.0)
    q_mode: QMode = "i_onetwo"
    block_norm: BlockNorm = "singular"

    sigma0: float = Field(default=1.0, gt=0.0)
    sigma_u: float = Field(default=1.0, ge=0.0)
    sigma_xi: float = Field(default=1.0, ge=0.0)

    success_factor: float = Field(default=1.1, ge=1.0)
    known_b: bool = True
    dare_method: DareMethod = "value"
    base_seed: int = Field(default=0, ge=0, lt=2**64)

    @field_validator("n_grid")
    @classmethod
    def _check_n_grid(cls, v: list[int]) -> list[int]:
        if not v:
            msg = "n_grid must not be empty"
            raise ValueError(msg)
        if v[0] < 2:
            msg = f"sample sizes must be at least 2, got {v[0]}"
            raise ValueError(msg)
        if any(b <= a for a, b in zip(v, v[1:], strict=False)):
            msg = "n_grid must be strictly increasing"
            raise ValueError(msg)
        return v

    @field_validator("d_list", "estimators")
    @classmethod
    def _check_non_empty(cls, v: list[Any]) -> list[Any]:
        if not v:
            msg = "list must not be empty"
            raise ValueError(msg)
        return v

    @model_validator(mode="after")
    def _check_dimensions(self) -> "ExperimentConfig":
        s = self.s_c + self.s_e
        too_small = [d for d in self.d_list if d < max(s, 1)]
        if too_small:
            msg = f"state dimensions {too_small} are smaller than s_c + s_e = {s}"
            raise ValueError(msg)
        return self

    @classmethod
    def full_grid(cls, **overrides: Any) -> "ExperimentConfig":
        """Configuration of the full-scale experiment (d up to 150, N step 20, 100 trials)."""
        values: dict[str, Any] = {
            "d_list": [20, 50, 100, 150],
            "n_grid": list(range(100, 1001, 20)),
            "trials": 100,
        }
        values.update(overrides)
        return cls(**values)

    @classmethod
    def from_yaml(cls, path: str | Path, **overrides: Any) -> "ExperimentConfig":
        """
        Load a configuration file; keyword overrides win over file values.

        Args:
            path: YAML file with named scalar and list fields
            **overrides: Values that replace the file's (None values are ignored)

        Returns:
            ExperimentConfig: Validated configuration

        """
        values = load_yaml(path)
        values.pop("format_version", None)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def noise(self) -> NoiseSpec:
        """Sampling noise of every trial."""
        return NoiseSpec(sigma0=self.sigma0, sigma_u=self.sigma_u, sigma_xi=self.sigma_xi)

    def cells(self) -> list[tuple[str, int, int]]:
        """(estimator, d, n) cells in output order."""
        return sorted((e, d, n) for e in set(self.estimators) for d in self.d_list for n in self.n_grid)


class TrialResult(BaseModel):
    """Outcome of one learned controller evaluated on the true system."""

    model_config = ConfigDict(frozen=True)

    estimator: EstimatorTag
    d: int
    n: int
    trial_index: int
    stabilized: bool
    cost_ratio: float
    dare_converged: bool
    false_positive_zeros: int = 0
    success: bool = False

    @model_validator(mode="after")
    def _check_consistency(self) -> "TrialResult":
        if self.stabilized and not (self.dare_converged and math.isfinite(self.cost_ratio)):
            msg = "a stabilizing trial needs a converged DARE and a finite cost ratio"
            raise ValueError(msg)
        if self.success and not self.stabilized:
            msg = "a successful trial must be stabilizing"
            raise ValueError(msg)
        return self

    @property
    def key(self) -> tuple[str, int, int, int]:
        """Sort key (estimator, d, n, trial_index)."""
        return (self.estimator, self.d, self.n, self.trial_index)


class SweepRow(BaseModel):
    """Aggregated success frequency of one (estimator, d, n) cell."""

    model_config = ConfigDict(frozen=True)

    estimator: str
    d: int
    n: int
    trials: int = Field(ge=1)
    successes: int = Field(ge=0)
    success_rate: float
    success_stddev: float
    mean_cost_ratio: float
    base_seed: int

    @model_validator(mode="after")
    def _check_counts(self) -> "SweepRow":
        if self.successes > self.trials:
            msg = f"successes ({self.successes}) exceed trials ({self.trials})"
            raise ValueError(msg)
        return self

    @classmethod
    def from_trials(cls, trials: list[TrialResult], base_seed: int) -> "SweepRow":
        """
        Aggregate the trials of one cell.

        The standard deviation is the normal approximation sqrt(p (1 - p) / trials),
        which is 0 at p in {0, 1}; the mean cost ratio is taken over successes
        and is NaN when there are none.
        """
        if not trials:
            msg = "cannot aggregate an empty cell"
            raise ValueError(msg)
        first = trials[0]
        count = len(trials)
        ratios = [t.cost_ratio for t in trials if t.success]
        rate = len(ratios) / count
        return cls(
            estimator=first.estimator,
            d=first.d,
            n=first.n,
            trials=count,
            successes=len(ratios),
            success_rate=rate,
            success_stddev=math.sqrt(rate * (1.0 - rate) / count),
            mean_cost_ratio=math.fsum(ratios) / len(ratios) if ratios else math.nan,
            base_seed=base_seed,
        )
