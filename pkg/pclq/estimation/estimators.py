"""Least-squares and second-moment estimators of (A, B)."""

import logging

import numpy as np

from pclq.config import get_settings
from pclq.core.base import Matrix, as_matrix
from pclq.core.exceptions import ShapeError, SigmaZeroUnknownError
from pclq.estimation.base import Dataset, EstimateResult

logger = logging.getLogger(__name__)


def pinv(m: Matrix) -> Matrix:
    """Moore-Penrose pseudo-inverse with the package-wide rank tolerance."""
    if m.size == 0:
        return np.zeros((m.shape[1], m.shape[0]))
    rcond = get_settings().rank_tol_factor * max(m.shape)
    return np.linalg.pinv(m, rcond=rcond)


def ols_estimate(ds: Dataset, known_b: Matrix | None = None) -> EstimateResult:
    """
    Minimum-Frobenius-norm least squares of x1 on (x0, u0).

    With ``known_b`` the inputs are subtracted first, x1 - u0 B^T is regressed
    on x0 alone and B is passed through unchanged.

    Args:
        ds: Transition samples
        known_b: Optional true input matrix (d x d_u)

    Returns:
        EstimateResult: OLS estimate

    """
    if known_b is not None:
        known_b = as_matrix(known_b, "known_b")
        if known_b.shape != (ds.d, ds.d_u):
            msg = f"known_b must be {ds.d}x{ds.d_u}, got {known_b.shape}"
            raise ShapeError(msg)
        theta = pinv(ds.x0) @ (ds.x1 - ds.u0 @ known_b.T)
        return EstimateResult(a_hat=theta.T, b_hat=known_b, estimator_kind="ols")

    features = np.hstack([ds.x0, ds.u0])
    theta = pinv(features) @ ds.x1
    return EstimateResult(
        a_hat=theta[: ds.d].T,
        b_hat=theta[ds.d :].T,
        estimator_kind="ols",
    )


def estimate_b_second_moment(ds: Dataset) -> Matrix:
    """B_hat = (1/N) sum x1 u0^T, valid when u0 has identity covariance."""
    return ds.x1.T @ ds.u0 / ds.n


def second_moment_estimate(ds: Dataset) -> EstimateResult:
    """
    Plug-in second moments A_hat = sum x1 x0^T / (N sigma0^2), B_hat = sum x1 u0^T / N.

    Requires isotropic x0 with known scale sigma0 and identity-covariance u0.

    Raises:
        SigmaZeroUnknownError: The dataset marks a general x0 covariance

    """
    if ds.sigma0 <= 0.0:
        msg = "second-moment estimator needs isotropic x0 with sigma0 > 0"
        raise SigmaZeroUnknownError(msg)
    a_hat = ds.x1.T @ ds.x0 / (ds.n * ds.sigma0**2)
    return EstimateResult(
        a_hat=a_hat,
        b_hat=estimate_b_second_moment(ds),
        estimator_kind="second_moment",
    )
