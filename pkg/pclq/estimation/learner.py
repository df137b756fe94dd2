"""End-to-end learner: estimate, soft-threshold, solve the certainty-equivalent DARE."""

import logging

import numpy as np

from pclq.core.base import LqSystem, Matrix, as_matrix
from pclq.core.exceptions import ConfigError, ShapeError
from pclq.core.riccati import solve_dare
from pclq.estimation.base import Dataset, EstimateResult, EstimatorKind, LearnedPolicy
from pclq.estimation.estimators import (
    estimate_b_second_moment,
    ols_estimate,
    second_moment_estimate,
)
from pclq.estimation.semiparametric import semiparametric_estimate_a
from pclq.estimation.thresholding import soft_threshold

logger = logging.getLogger(__name__)


def estimate(ds: Dataset, kind: EstimatorKind, known_b: Matrix | None = None) -> EstimateResult:
    """
    Run one of the entrywise estimators.

    Args:
        ds: Transition samples
        kind: Estimator to use
        known_b: True input matrix to use instead of estimating B

    Returns:
        EstimateResult: Raw (unthresholded) estimate

    """
    if kind == "ols":
        return ols_estimate(ds, known_b)

    if known_b is not None:
        known_b = as_matrix(known_b, "known_b")
        if known_b.shape != (ds.d, ds.d_u):
            msg = f"known_b must be {ds.d}x{ds.d_u}, got {known_b.shape}"
            raise ShapeError(msg)

    if kind == "second_moment":
        result = second_moment_estimate(ds)
        if known_b is None:
            return result
        return EstimateResult(a_hat=result.a_hat, b_hat=known_b, estimator_kind=kind)

    if kind == "semiparametric":
        a_hat, failed = semiparametric_estimate_a(ds)
        b_hat = estimate_b_second_moment(ds) if known_b is None else known_b
        return EstimateResult(
            a_hat=a_hat,
            b_hat=b_hat,
            estimator_kind=kind,
            failed_entries=failed,
        )

    msg = f"unknown estimator: {kind}"
    raise ConfigError(msg)


def learn_policy(
    ds: Dataset,
    eps: float,
    kind: EstimatorKind,
    dare_tol: float | None = None,
    known_b: Matrix | None = None,
    dare_method: str = "value",
) -> LearnedPolicy:
    """
    Learn a certainty-equivalent controller from transition samples.

    The selected estimator yields (A_hat, B_hat); both are soft-thresholded
    with eps, and the DARE of (A_bar, B_bar, Q = I, R = I) gives the gain.
    A known input matrix is used as given, without thresholding.

    Args:
        ds: Transition samples
        eps: Soft-threshold level (0 disables thresholding)
        kind: Estimator to use
        dare_tol: DARE tolerance (defaults to settings)
        known_b: True input matrix, used unthresholded when given
        dare_method: ``value``, ``policy`` or ``reference``

    Returns:
        LearnedPolicy: Gain, value matrix and the models it was derived from

    Raises:
        MaxIterExceededError: The thresholded model is not stabilizable

    """
    if eps < 0:
        msg = f"threshold must be non-negative, got {eps}"
        raise ConfigError(msg)

    result = estimate(ds, kind, known_b)
    a_bar = soft_threshold(result.a_hat, eps)
    b_bar = result.b_hat if known_b is not None else soft_threshold(result.b_hat, eps)
    model = LqSystem(a=a_bar, b=b_bar, q=np.eye(ds.d), r=np.eye(ds.d_u))
    solution = solve_dare(model, method=dare_method, tol=dare_tol)
    logger.debug(
        f"Learned {kind} policy: eps={eps}, nonzeros={int(np.count_nonzero(a_bar))}/{a_bar.size}"
    )
    return LearnedPolicy(solution=solution, estimate=result, a_bar=a_bar, b_bar=b_bar, eps=eps)
