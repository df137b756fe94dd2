"""
Spectral-radius estimation and stability certification by repeated squaring.

The certificate uses ||M^k||_F < 1 for some k = 2^j, which implies
rho(M) <= ||M^k||^(1/k) < 1. No eigendecomposition is performed.
"""

import logging
import math

import numpy as np

from pclq.config import get_settings
from pclq.core.base import Matrix, StabilityReport, as_matrix, fro
from pclq.core.exceptions import ConfigError

logger = logging.getLogger(__name__)


def spectral_radius_estimate(m: Matrix, max_squarings: int | None = None) -> StabilityReport:
    """
    Estimate rho(M) from norms of M^(2^j) and certify stability.

    Each power is rescaled to unit Frobenius norm before squaring and the
    log-scale is carried separately, so neither overflow nor underflow occurs.

    Args:
        m: Square matrix
        max_squarings: Number of squarings (defaults to settings)

    Returns:
        StabilityReport: Gelfand estimate at the final squaring and the first
        certified power, if any

    """
    m = as_matrix(m, "m", square=True)
    if max_squarings is None:
        max_squarings = get_settings().stability_squarings
    if max_squarings < 1:
        msg = f"max_squarings must be >= 1, got {max_squarings}"
        raise ConfigError(msg)

    power = np.array(m)
    log_scale = 0.0
    certified: int | None = None
    estimate = 0.0

    for j in range(max_squarings + 1):
        exponent = 2**j
        norm = fro(power)
        if norm == 0.0:
            # nilpotent: every later power vanishes too
            return StabilityReport(
                is_stable=True,
                radius_estimate=0.0,
                certified_power=certified if certified is not None else exponent,
            )
        log_norm = math.log(norm) + log_scale
        if certified is None and log_norm < 0.0:
            certified = exponent
        estimate = math.exp(log_norm / exponent)
        if j == max_squarings:
            break
        power = power / norm
        power = power @ power
        log_scale = 2.0 * log_norm

    return StabilityReport(
        is_stable=certified is not None,
        radius_estimate=estimate,
        certified_power=certified,
    )


def gelfand_radius(m: Matrix, squarings: int | None = None) -> float:
    """Return only the Gelfand spectral-radius estimate of M."""
    if squarings is None:
        squarings = get_settings().normalization_squarings
    return spectral_radius_estimate(m, squarings).radius_estimate


def is_stable(m: Matrix, max_squarings: int | None = None) -> bool:
    """Return True when the norm-power certificate proves rho(M) < 1."""
    return spectral_radius_estimate(m, max_squarings).is_stable
