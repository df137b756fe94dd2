"""Monte-Carlo trials and the success-frequency sweep."""

import logging
import math
from collections.abc import Iterable
from concurrent.futures import ProcessPoolExecutor
from itertools import groupby

import numpy as np

from pclq.config import get_settings
from pclq.core.exceptions import NumericalError
from pclq.core.riccati import closed_loop, cost_ratio, solve_dare
from pclq.core.stability import is_stable
from pclq.estimation.base import Dataset
from pclq.estimation.learner import learn_policy
from pclq.estimation.thresholding import false_positives
from pclq.harness.base import ESTIMATOR_TAGS, ExperimentConfig, SweepRow, TrialResult
from pclq.synth.base import GeneratedSystem, PcLqSpec
from pclq.synth.generators import gen_pclq, sample_transitions
from pclq.synth.rng import CounterRng

logger = logging.getLogger(__name__)

SYSTEM_STREAM = 0
DATA_STREAM = 1


def trial_rng(cfg: ExperimentConfig, d: int, n: int, trial_index: int) -> CounterRng:
    """
    Random stream of one trial.

    Every estimator of a cell sees the same stream, so the estimators are
    compared on identical systems and datasets.
    """
    return CounterRng(cfg.base_seed).split(d, n, trial_index)


def trial_data(cfg: ExperimentConfig, d: int, n: int, trial_index: int) -> tuple[GeneratedSystem, Dataset]:
    """
    True system and samples of one trial, shared by every estimator of the cell.

    Args:
        cfg: Experiment configuration
        d: State dimension
        n: Number of transition samples
        trial_index: Trial number within the cell

    Returns:
        tuple: Generated PC-LQ and its n transitions

    """
    rng = trial_rng(cfg, d, n, trial_index)
    spec = PcLqSpec(
        s_c=cfg.s_c,
        s_e=cfg.s_e,
        d=d,
        d_u=cfg.d_u,
        rho1=cfg.rho1,
        rho2=cfg.rho2,
        rho3=cfg.rho3,
        seed=cfg.base_seed,
        q_mode=cfg.q_mode,
        block_norm=cfg.block_norm,
    )
    generated = gen_pclq(spec, rng.split(SYSTEM_STREAM))
    ds = sample_transitions(generated.system, n, cfg.noise(), rng.split(DATA_STREAM))
    return generated, ds


def run_trial(cfg: ExperimentConfig, estimator: str, d: int, n: int, trial_index: int) -> TrialResult:
    """
    Learn a controller from n fresh samples and evaluate it on the true system.

    Success means the closed loop A + B K_bar passes the stability certificate
    and the average cost is within ``success_factor`` of the optimum. Numerical
    failures of the estimator or the DARE are recorded as failed trials.

    Args:
        cfg: Experiment configuration
        estimator: One of ``ols``, ``ols_sth``, ``moment``, ``semiparam``
        d: State dimension
        n: Number of transition samples
        trial_index: Trial number within the cell

    Returns:
        TrialResult: Outcome of the trial

    """
    kind, thresholded = ESTIMATOR_TAGS[estimator]

    def failed(dare_converged: bool, false_positive_zeros: int = 0) -> TrialResult:
        return TrialResult(
            estimator=estimator,
            d=d,
            n=n,
            trial_index=trial_index,
            stabilized=False,
            cost_ratio=math.inf,
            dare_converged=dare_converged,
            false_positive_zeros=false_positive_zeros,
        )

    try:
        generated, ds = trial_data(cfg, d, n, trial_index)
        true_sys = generated.system
        optimal = solve_dare(true_sys, method=cfg.dare_method)
    except NumericalError as e:
        logger.warning(f"Trial {(estimator, d, n, trial_index)}: true system could not be solved: {e}")
        return failed(dare_converged=False)

    try:
        learned = learn_policy(
            ds,
            cfg.eps if thresholded else 0.0,
            kind,
            known_b=true_sys.b if cfg.known_b else None,
            dare_method=cfg.dare_method,
        )
    except NumericalError as e:
        logger.debug(f"Trial {(estimator, d, n, trial_index)} failed to learn a policy: {e}")
        return failed(dare_converged=False)

    k_bar = learned.solution.k
    fp = false_positives(true_sys.a, learned.a_bar)
    if not is_stable(closed_loop(true_sys, k_bar)):
        return failed(dare_converged=True, false_positive_zeros=fp)

    ratio = cost_ratio(true_sys, k_bar, optimal.p, np.eye(d))
    if not math.isfinite(ratio):
        return failed(dare_converged=True, false_positive_zeros=fp)

    return TrialResult(
        estimator=estimator,
        d=d,
        n=n,
        trial_index=trial_index,
        stabilized=True,
        cost_ratio=ratio,
        dare_converged=True,
        false_positive_zeros=fp,
        success=ratio <= cfg.success_factor,
    )


def _run_task(task: tuple[ExperimentConfig, str, int, int, int]) -> TrialResult:
    return run_trial(*task)


def run_trials(cfg: ExperimentConfig, workers: int | None = None) -> list[TrialResult]:
    """
    Run every trial of the sweep.

    Trials are independent; with more than one worker they are spread over a
    process pool. The result order is (estimator, d, n, trial_index)
    regardless of completion order.

    Args:
        cfg: Experiment configuration
        workers: Process count (defaults to settings)

    Returns:
        list[TrialResult]: Sorted trial records

    """
    workers = get_settings().workers if workers is None else workers
    tasks = [(cfg, e, d, n, t) for e, d, n in cfg.cells() for t in range(cfg.trials)]
    logger.info(f"Running {len(tasks)} trials over {len(cfg.cells())} cells with {workers} worker(s)")

    if workers <= 1:
        results = [_run_task(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=max(1, cfg.trials // 4)))
    return sorted(results, key=lambda r: r.key)


def aggregate(results: Iterable[TrialResult], base_seed: int) -> list[SweepRow]:
    """Group trial records by (estimator, d, n) and compute success frequencies."""
    ordered = sorted(results, key=lambda r: r.key)
    rows = []
    for (estimator, d, n), cell in groupby(ordered, key=lambda r: (r.estimator, r.d, r.n)):
        row = SweepRow.from_trials(list(cell), base_seed)
        logger.info(
            f"{estimator} d={d} n={n}: {row.successes}/{row.trials} successes "
            f"(rate {row.success_rate:.2f} +/- {row.success_stddev:.2f})"
        )
        rows.append(row)
    return rows


def run_sweep(cfg: ExperimentConfig, workers: int | None = None) -> list[SweepRow]:
    """
    Run the full estimators x d_list x n_grid x trials product and aggregate it.

    Args:
        cfg: Experiment configuration
        workers: Process count (defaults to settings)

    Returns:
        list[SweepRow]: One row per cell, sorted by (estimator, d, n)

    """
    return aggregate(run_trials(cfg, workers), cfg.base_seed)
