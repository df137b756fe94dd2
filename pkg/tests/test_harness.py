"""Tests for trials, sweeps, aggregation and CSV output."""

import math

import numpy as np
import pytest

from pclq.estimation.estimators import ols_estimate
from pclq.estimation.thresholding import false_positives, soft_threshold
from pclq.harness.base import ExperimentConfig, SweepRow, TrialResult
from pclq.harness.report import CSV_FIELDS, emit_csv, read_csv
from pclq.harness.runner import aggregate, run_sweep, run_trial, run_trials, trial_data


def _trial(trial_index: int, success: bool, ratio: float = 1.05) -> TrialResult:
    return TrialResult(
        estimator="moment",
        d=12,
        n=100,
        trial_index=trial_index,
        stabilized=success,
        cost_ratio=ratio if success else math.inf,
        dare_converged=True,
        success=success,
    )


def test_config_defaults():
    """Test the desk-scale defaults and the full grid."""
    cfg = ExperimentConfig()
    assert cfg.d_list == [20, 50]
    assert cfg.n_grid == list(range(100, 1001, 100))
    assert (cfg.trials, cfg.eps, cfg.success_factor) == (50, 0.1, 1.1)
    assert cfg.known_b

    full = ExperimentConfig.full_grid()
    assert full.d_list == [20, 50, 100, 150]
    assert full.n_grid[:3] == [100, 120, 140]
    assert full.n_grid[-1] == 1000
    assert full.trials == 100


@pytest.mark.parametrize(
    "overrides",
    [
        {"trials": 0},
        {"success_factor": 0.9},
        {"n_grid": [200, 100]},
        {"n_grid": [100, 100]},
        {"n_grid": []},
        {"d_list": [8]},
        {"estimators": ["lasso"]},
        {"unknown_field": 1},
    ],
)
def test_config_validation(overrides):
    """Test invalid experiment parameters are rejected."""
    with pytest.raises(ValueError):
        ExperimentConfig(**overrides)


def test_config_from_yaml(tmp_path):
    """Test file values are read and keyword overrides win."""
    path = tmp_path / "experiment.yaml"
    path.write_text("d_list: [12]\nn_grid: [50, 100]\ntrials: 4\neps: 0.2\n", encoding="utf-8")

    cfg = ExperimentConfig.from_yaml(path, trials=2, eps=None)
    assert cfg.d_list == [12]
    assert cfg.trials == 2
    assert cfg.eps == 0.2


def test_trial_result_consistency():
    """Test stabilized trials need a finite cost and a converged DARE."""
    with pytest.raises(ValueError):
        TrialResult(
            estimator="ols", d=5, n=10, trial_index=0, stabilized=True, cost_ratio=math.inf, dare_converged=True
        )
    with pytest.raises(ValueError):
        TrialResult(
            estimator="ols",
            d=5,
            n=10,
            trial_index=0,
            stabilized=False,
            cost_ratio=math.inf,
            dare_converged=False,
            success=True,
        )


def test_sweep_row_aggregation():
    """Test success counts, the normal-approximation deviation and the mean cost ratio."""
    row = SweepRow.from_trials([_trial(0, True, 1.02), _trial(1, False), _trial(2, True, 1.04)], base_seed=3)

    assert (row.trials, row.successes) == (3, 2)
    assert row.success_rate == pytest.approx(2 / 3)
    assert row.success_stddev == pytest.approx(math.sqrt((2 / 3) * (1 / 3) / 3))
    assert row.mean_cost_ratio == pytest.approx(1.03)
    assert row.base_seed == 3


def test_sweep_row_extremes():
    """Test a cell without successes has zero deviation and no mean cost."""
    row = SweepRow.from_trials([_trial(0, False), _trial(1, False)], base_seed=0)

    assert row.success_rate == 0.0
    assert row.success_stddev == 0.0
    assert math.isnan(row.mean_cost_ratio)

    with pytest.raises(ValueError):
        SweepRow(
            estimator="ols",
            d=5,
            n=10,
            trials=2,
            successes=3,
            success_rate=1.5,
            success_stddev=0.0,
            mean_cost_ratio=1.0,
            base_seed=0,
        )


def test_run_trial_exact_model_succeeds():
    """Test noiseless data with a known B yields the optimal controller."""
    cfg = ExperimentConfig(d_list=[12], n_grid=[40], trials=1, s_c=3, s_e=3, sigma_xi=0.0, estimators=["ols"])
    result = run_trial(cfg, "ols", 12, 40, 0)

    assert result.dare_converged
    assert result.stabilized
    assert result.cost_ratio == pytest.approx(1.0, abs=1e-6)
    assert result.success

    # Thresholding removes the round-off nonzeros of the exact estimate
    assert result.false_positive_zeros > 0
    thresholded = run_trial(cfg, "ols_sth", 12, 40, 0)
    assert thresholded.false_positive_zeros == 0


def test_run_trial_underdetermined_completes():
    """Test a hopeless sample size finishes with a consistent record."""
    cfg = ExperimentConfig(d_list=[50], n_grid=[10], trials=1)
    for estimator in ("ols", "ols_sth", "moment", "semiparam"):
        result = run_trial(cfg, estimator, 50, 10, 0)
        assert result.estimator == estimator
        assert not result.success or result.stabilized
        assert result.stabilized == math.isfinite(result.cost_ratio)


def test_run_trial_deterministic(small_config):
    """Test identical indices give identical records."""
    first = run_trial(small_config, "moment", 12, 60, 1)
    second = run_trial(small_config, "moment", 12, 60, 1)

    assert first == second


def test_run_sweep_shape(small_config):
    """Test one row per (estimator, d, n) cell in sorted order."""
    rows = run_sweep(small_config)

    assert [(r.estimator, r.d, r.n) for r in rows] == [
        ("moment", 12, 60),
        ("moment", 12, 120),
        ("ols", 12, 60),
        ("ols", 12, 120),
    ]
    assert all(r.trials == 3 for r in rows)
    assert all(0 <= r.successes <= r.trials for r in rows)


def test_aggregation_matches_trials(small_config):
    """Test per-cell successes equal the count of successful trial records."""
    trials = run_trials(small_config)
    rows = aggregate(trials, small_config.base_seed)

    assert len(trials) == 4 * small_config.trials
    assert [t.key for t in trials] == sorted(t.key for t in trials)
    for row in rows:
        cell = [t for t in trials if (t.estimator, t.d, t.n) == (row.estimator, row.d, row.n)]
        assert row.successes == sum(t.success for t in cell)


def test_sweep_single_trial():
    """Test a one-trial cell has a success rate of 0 or 1."""
    cfg = ExperimentConfig(d_list=[12], n_grid=[80], trials=1, s_c=3, s_e=3, estimators=["moment"])
    rows = run_sweep(cfg)

    assert len(rows) == 1
    assert rows[0].success_rate in (0.0, 1.0)


def test_sweep_csv_deterministic_across_workers(tmp_path, small_config):
    """Test the CSV is byte-identical across runs and process counts."""
    serial = tmp_path / "serial.csv"
    parallel = tmp_path / "parallel.csv"
    emit_csv(run_sweep(small_config, workers=1), serial)
    emit_csv(run_sweep(small_config, workers=2), parallel)

    assert serial.read_bytes() == parallel.read_bytes()


def test_emit_csv_format(tmp_path):
    """Test header, field count, LF endings and parse-back."""
    empty = tmp_path / "empty.csv"
    emit_csv([], empty)
    assert empty.read_text(encoding="utf-8") == ",".join(CSV_FIELDS) + "\n"

    row = SweepRow.from_trials([_trial(0, True, 1.0123456789), _trial(1, False), _trial(2, True, 1.0)], 11)
    path = tmp_path / "rows.csv"
    emit_csv([row], path)

    data = path.read_bytes()
    assert b"\r" not in data
    lines = data.decode("utf-8").splitlines()
    assert len(lines) == 2
    assert len(lines[1].split(",")) == 9
    assert lines[1].startswith("moment,12,100,3,2,0.666667,")

    (parsed,) = read_csv(path)
    assert (parsed.estimator, parsed.d, parsed.n, parsed.successes) == ("moment", 12, 100, 2)
    assert parsed.success_rate == pytest.approx(row.success_rate, rel=1e-5)
    assert parsed.mean_cost_ratio == pytest.approx(row.mean_cost_ratio, rel=1e-5)


def test_emit_csv_unwritable(tmp_path):
    """Test write failures name the path."""
    target = tmp_path / "missing_dir" / "rows.csv"
    with pytest.raises(OSError, match="missing_dir"):
        emit_csv([], target)


@pytest.mark.slow
def test_sparse_estimator_needs_fewer_samples():
    """Test the thresholded estimator reaches 80% success at a smaller N than OLS for d = 50."""
    cfg = ExperimentConfig(estimators=["ols", "moment"])
    rows = run_sweep(cfg)

    def first_reliable_n(estimator: str, d: int) -> float:
        for row in rows:
            if (row.estimator, row.d) == (estimator, d) and row.success_rate >= 0.8:
                return row.n
        return math.inf

    assert first_reliable_n("moment", 50) < first_reliable_n("ols", 50)
    assert first_reliable_n("moment", 20) <= 1000
    assert first_reliable_n("ols", 20) <= 1000


@pytest.mark.slow
def test_success_rate_grows_with_samples():
    """Test the sparse estimator succeeds at least as often with many samples as with few."""
    cfg = ExperimentConfig(d_list=[20], n_grid=[100, 2000], estimators=["moment"])
    low, high = run_sweep(cfg)

    assert high.success_rate >= low.success_rate


def test_estimators_share_trial_data(small_config):
    """Test every estimator of a cell is scored on the same system and samples."""
    generated, ds = trial_data(small_config, 12, 120, 1)
    again, ds_again = trial_data(small_config, 12, 120, 1)
    np.testing.assert_array_equal(generated.system.a, again.system.a)
    np.testing.assert_array_equal(ds.x1, ds_again.x1)

    _, other = trial_data(small_config, 12, 120, 2)
    assert not np.array_equal(ds.x0, other.x0)

    a_hat = ols_estimate(ds, known_b=generated.system.b).a_hat
    for estimator, eps in (("ols", 0.0), ("ols_sth", small_config.eps)):
        result = run_trial(small_config, estimator, 12, 120, 1)
        assert result.dare_converged
        assert result.false_positive_zeros == false_positives(generated.system.a, soft_threshold(a_hat, eps))


def test_config_block_norm():
    """Test sweeps normalize blocks by their top singular value unless told otherwise."""
    assert ExperimentConfig().block_norm == "singular"
    assert ExperimentConfig(block_norm="spectral").block_norm == "spectral"
    with pytest.raises(ValueError):
        ExperimentConfig(block_norm="frobenius")


@pytest.mark.slow
def test_many_samples_reach_optimal_cost():
    """Test the thresholded moment estimator is near-optimal on d = 20 with 10^5 samples."""
    cfg = ExperimentConfig(eps=0.01)
    result = run_trial(cfg, "moment", 20, 100_000, 0)

    assert result.stabilized
    assert result.cost_ratio < 1.01
