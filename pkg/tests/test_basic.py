"""Basic tests for the pclq package: imports, settings and the error hierarchy."""

import pytest

from pclq.config import Settings, get_settings
from pclq.core.exceptions import (
    ConfigError,
    MaxIterExceededError,
    NumericalError,
    PclqError,
    ShapeError,
    UnstableInitialPolicyError,
    UnstablePolicyError,
)


# Simple test to verify the package and its sub-packages import
def test_package_imports():
    """Test that the package can be imported."""
    import pclq
    import pclq.cli
    import pclq.core
    import pclq.estimation
    import pclq.harness
    import pclq.structure
    import pclq.synth

    assert pclq.__version__
    assert pclq.core.solve_dare is not None
    assert pclq.harness.run_sweep is not None


def test_settings_defaults():
    """Test the numerical defaults."""
    settings = get_settings()

    assert settings.dare_tol == 1e-10
    assert settings.stability_squarings == 14
    assert settings.workers == 1
    assert settings.log_level == "INFO"

    # Cached: the same object is returned
    assert get_settings() is settings


def test_settings_from_environment(monkeypatch):
    """Test that PCLQ_ variables override defaults."""
    monkeypatch.setenv("PCLQ_DARE_TOL", "1e-8")
    monkeypatch.setenv("PCLQ_WORKERS", "4")
    monkeypatch.setenv("PCLQ_LOG_LEVEL", "debug")

    settings = Settings()
    assert settings.dare_tol == 1e-8
    assert settings.workers == 4
    assert settings.log_level == "DEBUG"


def test_settings_validation(monkeypatch):
    """Test that invalid environment values are rejected."""
    monkeypatch.setenv("PCLQ_WORKERS", "0")
    with pytest.raises(ValueError):
        Settings()


def test_exception_hierarchy():
    """Test how errors are grouped for callers and the CLI."""
    # Input errors are ValueErrors
    assert issubclass(ShapeError, ValueError)
    assert issubclass(ConfigError, ValueError)

    # Numerical failures share one base
    assert issubclass(MaxIterExceededError, NumericalError)
    assert issubclass(UnstableInitialPolicyError, UnstablePolicyError)
    assert issubclass(NumericalError, PclqError)
    assert not issubclass(NumericalError, ValueError)

    error = MaxIterExceededError("stuck", iterations=10, residual=0.5)
    assert error.iterations == 10
    assert error.residual == 0.5
