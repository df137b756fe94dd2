"""
Semiparametric (orthogonalized, sample-split) least squares.

For y = <w, z1> + <e, z2> + noise, the first half of the samples fits the
nuisance maps L = E[z1 | z2] and c = E[y | z2]; the second half regresses
y - <c, z2> on z1 - L z2. Applied with y = x1(i), z1 = x0(j) and
z2 = x0(all but j), this gives an entrywise estimate of A.
"""

import logging
from typing import NamedTuple

import numpy as np

from pclq.core.base import Matrix, as_matrix
from pclq.core.exceptions import ConfigError, DegenerateResidualError
from pclq.estimation.base import Dataset, SemiparamProblem
from pclq.estimation.estimators import pinv

logger = logging.getLogger(__name__)

DEGENERACY_RTOL = 1e-14


class NuisanceFit(NamedTuple):
    """First-stage quantities that do not depend on the response."""

    n_train: int
    gram_pinv: Matrix
    z2_train: Matrix
    z2_eval: Matrix
    residual: Matrix
    residual_gram_pinv: Matrix


def split_index(n: int) -> int:
    """Number of rows used for the nuisance stage: the first floor(N/2)."""
    if n < 2:
        msg = f"semiparametric estimation needs at least 2 samples, got {n}"
        raise ConfigError(msg)
    return n // 2


def fit_nuisance(z1: Matrix, z2: Matrix) -> NuisanceFit:
    """
    Fit L_hat on the first half and residualize z1 on the second half.

    Args:
        z1: N x d_w target features
        z2: N x d_e nuisance features

    Returns:
        NuisanceFit: Cached first-stage quantities

    Raises:
        DegenerateResidualError: z1 - L_hat z2 has no variance on the second half

    """
    n_train = split_index(z1.shape[0])
    z1_train, z1_eval = z1[:n_train], z1[n_train:]
    z2_train, z2_eval = z2[:n_train], z2[n_train:]

    gram_pinv = pinv(z2_train.T @ z2_train)
    l_hat = (z1_train.T @ z2_train) @ gram_pinv
    residual = z1_eval - z2_eval @ l_hat.T
    residual_gram = residual.T @ residual

    scale = float(np.trace(z1_eval.T @ z1_eval))
    if scale == 0.0 or float(np.trace(residual_gram)) <= DEGENERACY_RTOL * scale:
        msg = "residualized target features have zero empirical variance"
        raise DegenerateResidualError(msg)

    return NuisanceFit(
        n_train=n_train,
        gram_pinv=gram_pinv,
        z2_train=z2_train,
        z2_eval=z2_eval,
        residual=residual,
        residual_gram_pinv=pinv(residual_gram),
    )


def solve_target(fit: NuisanceFit, y: np.ndarray) -> np.ndarray:
    """
    Second-stage estimate for one response vector or several response columns.

    Args:
        fit: First-stage quantities
        y: Length-N vector or N x k matrix of responses

    Returns:
        np.ndarray: w_hat with shape (d_w,) or (d_w, k)

    """
    y_train, y_eval = y[: fit.n_train], y[fit.n_train :]
    c_hat = fit.gram_pinv @ (fit.z2_train.T @ y_train)
    orthogonal = y_eval - fit.z2_eval @ c_hat
    return fit.residual_gram_pinv @ (fit.residual.T @ orthogonal)


def semiparametric_solve(problem: SemiparamProblem) -> np.ndarray:
    """Estimate the target coefficient w of a general semiparametric problem."""
    return solve_target(fit_nuisance(problem.z1, problem.z2), problem.y)


def entry_problem(ds: Dataset, i: int, j: int) -> SemiparamProblem:
    """Reduce entry (i, j) of A to y = x1(i), z1 = x0(j), z2 = x0(others)."""
    others = [k for k in range(ds.d) if k != j]
    return SemiparamProblem(y=ds.x1[:, i], z1=ds.x0[:, [j]], z2=ds.x0[:, others])


class GramCache:
    """
    Per-column first-stage fits, shared across all rows i of A.

    The nuisance fit for column j depends only on x0, so it is computed once
    and reused for every response x1(i).
    """

    def __init__(self, ds: Dataset) -> None:
        """Bind the cache to a dataset."""
        self._ds = ds
        self._fits: dict[int, NuisanceFit] = {}

    def fit_for(self, j: int) -> NuisanceFit:
        """Return (and memoize) the nuisance fit of column j."""
        if j not in self._fits:
            others = [k for k in range(self._ds.d) if k != j]
            self._fits[j] = fit_nuisance(self._ds.x0[:, [j]], self._ds.x0[:, others])
        return self._fits[j]

    def owns(self, ds: Dataset) -> bool:
        """Check the cache was built for this dataset."""
        return ds is self._ds


def semiparametric_entry(
    ds: Dataset,
    i: int,
    j: int,
    gram_cache: GramCache | None = None,
) -> float:
    """
    Semiparametric estimate of A(i, j).

    Args:
        ds: Transition samples (N >= 2)
        i: Row index
        j: Column index
        gram_cache: Optional cache of per-column nuisance fits for this dataset

    Returns:
        float: Estimated entry

    """
    if gram_cache is not None and gram_cache.owns(ds):
        return float(solve_target(gram_cache.fit_for(j), ds.x1[:, i])[0])
    return float(semiparametric_solve(entry_problem(ds, i, j))[0])


def semiparametric_estimate_a(ds: Dataset, gram_cache: GramCache | None = None) -> tuple[Matrix, int]:
    """
    Entrywise semiparametric estimate of A.

    Columns whose residualized feature is degenerate are set to zero and
    counted rather than aborting the loop. Each column owns its nuisance fit,
    so columns may be processed independently.

    Args:
        ds: Transition samples (N >= 2)
        gram_cache: Optional cache to reuse

    Returns:
        tuple: (d x d estimate, number of failed entries)

    """
    split_index(ds.n)
    cache = gram_cache if gram_cache is not None and gram_cache.owns(ds) else GramCache(ds)
    a_hat = np.zeros((ds.d, ds.d))
    failed = 0
    for j in range(ds.d):
        try:
            fit = cache.fit_for(j)
        except DegenerateResidualError:
            failed += ds.d
            continue
        a_hat[:, j] = solve_target(fit, ds.x1)[0]

    if failed:
        logger.warning(f"Semiparametric estimate zeroed {failed} degenerate entries")
    return as_matrix(a_hat, "a_hat"), failed
