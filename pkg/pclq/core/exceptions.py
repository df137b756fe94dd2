"""Exception hierarchy for the pclq toolkit."""


class PclqError(Exception):
    """Base class for all pclq errors."""


class ShapeError(PclqError, ValueError):
    """Matrix shapes are incompatible or a square matrix was expected."""


class NonFiniteError(PclqError, ValueError):
    """A matrix contains NaN or infinite entries."""


class ConfigError(PclqError, ValueError):
    """A numerical or experiment parameter is out of range."""


class NumericalError(PclqError):
    """Base class for numerical failures (CLI exit code 2)."""


class MaxIterExceededError(NumericalError):
    """An iterative solver did not reach its tolerance."""

    def __init__(self, message: str, iterations: int, residual: float) -> None:
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class SingularInnerSolveError(NumericalError):
    """The inner matrix R + B^T P B could not be factorized."""


class UnstablePolicyError(NumericalError):
    """The closed loop A + BK failed the stability certificate."""


class UnstableInitialPolicyError(UnstablePolicyError):
    """Policy iteration was started from a non-stabilizing gain."""


class InvariantViolationError(NumericalError):
    """A subspace is not invariant under the given matrix."""


class DegenerateResidualError(NumericalError):
    """Residualized regression features have zero empirical variance."""


class DegenerateBlockError(NumericalError):
    """A sampled diagonal block has a negligible spectral radius."""


class SigmaZeroUnknownError(NumericalError):
    """The second-moment estimator needs an isotropic initial-state scale."""
