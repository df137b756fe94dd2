"""Settings management for the pclq toolkit."""

from functools import lru_cache
from typing import Literal

from dotenv import load_dotenv
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load environment variables from .env file
load_dotenv()


class Settings(BaseSettings):
    """
    Settings for the pclq toolkit.

    Numerical defaults shared by the solvers, estimators and the sweep harness.
    Values are read from ``PCLQ_``-prefixed environment variables or a ``.env`` file.
    """

    # App settings
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "INFO"
    workers: int = Field(default=1, ge=1)
    default_seed: int = Field(default=0, ge=0)

    # Riccati / Lyapunov solvers
    dare_tol: float = Field(default=1e-10, gt=0)
    dare_max_iter: int = Field(default=100_000, ge=1)
    divergence_bound: float = Field(default=1e12, gt=0)
    lyapunov_tol: float = Field(default=1e-12, gt=0)
    lyapunov_max_doublings: int = Field(default=60, ge=1)

    # Stability certificate and Gelfand normalization
    stability_squarings: int = Field(default=14, ge=1)
    normalization_squarings: int = Field(default=12, ge=1)

    # Rank decisions and subspace tolerances
    rank_tol_factor: float = Field(default=1e-9, gt=0)
    subspace_tol: float = Field(default=1e-8, gt=0)

    model_config = SettingsConfigDict(
        env_prefix="PCLQ_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    @field_validator("log_level", mode="before")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        """Accept lower-case level names from the environment."""
        return v.upper() if isinstance(v, str) else v


@lru_cache
def get_settings() -> Settings:
    """
    Get settings from environment variables with caching.

    Returns:
        Settings: Validated settings

    """
    return Settings()
