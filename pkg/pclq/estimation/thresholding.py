"""Entrywise soft-thresholding."""

import numpy as np

from pclq.core.base import Matrix, as_matrix
from pclq.core.exceptions import ConfigError


def soft_threshold(m: Matrix, eps: float) -> Matrix:
    """
    Shrink every entry toward zero by eps; entries with |x| <= eps become exactly 0.

    STh_eps(x) = 1{|x| > eps} (x - sign(x) eps)

    Args:
        m: Matrix to threshold
        eps: Non-negative threshold

    Returns:
        Matrix: Thresholded copy

    """
    if eps < 0:
        msg = f"threshold must be non-negative, got {eps}"
        raise ConfigError(msg)
    m = as_matrix(m, "m")
    return np.where(np.abs(m) > eps, m - np.sign(m) * eps, 0.0)


def false_positives(a_true: Matrix, a_est: Matrix) -> int:
    """Count entries that are zero in a_true but nonzero in a_est."""
    return int(np.sum((a_true == 0.0) & (a_est != 0.0)))


def missed_nonzeros(a_true: Matrix, a_est: Matrix) -> int:
    """Count entries that are nonzero in a_true but zero in a_est."""
    return int(np.sum((a_true != 0.0) & (a_est == 0.0)))
