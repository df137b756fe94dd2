"""Test configuration and fixtures for the pclq toolkit."""

import numpy as np
import pytest

from pclq.config import get_settings
from pclq.core.base import LqSystem
from pclq.harness.base import ExperimentConfig
from pclq.synth.base import NoiseSpec, PcLqSpec
from pclq.synth.generators import gen_counterexample, gen_pclq, sample_transitions
from pclq.synth.rng import CounterRng

GOLDEN_RATIO = (1.0 + np.sqrt(5.0)) / 2.0


@pytest.fixture(autouse=True)
def fresh_settings():
    """Drop cached settings so environment changes in a test do not leak."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def counterexample_system() -> LqSystem:
    """Two-state counterexample with rho = 0.5: only the first state is actuated and costed."""
    return gen_counterexample(2, [0.5])


@pytest.fixture
def unstable_scalar() -> LqSystem:
    """Scalar system a = 2, b = q = r = 1 with P = 2 + sqrt(5)."""
    return LqSystem(a=[[2.0]], b=[[1.0]], q=[[1.0]], r=[[1.0]])


def make_stable_system(seed: int, d: int, d_u: int = 2, radius: float = 0.8) -> LqSystem:
    """Random system whose open loop has the given spectral radius."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d))
    a = g * (radius / np.max(np.abs(np.linalg.eigvals(g))))
    return LqSystem(a=a, b=rng.standard_normal((d, d_u)), q=np.eye(d), r=np.eye(d_u))


@pytest.fixture
def stable_systems() -> list[LqSystem]:
    """Fifty random open-loop stable systems with d between 2 and 8."""
    return [make_stable_system(seed, d=2 + seed % 7) for seed in range(50)]


@pytest.fixture
def pclq_spec() -> PcLqSpec:
    """Default-sized PC-LQ: s_c = s_e = 5, d = 20, d_u = 1."""
    return PcLqSpec(seed=7)


@pytest.fixture
def generated(pclq_spec):
    """A generated PC-LQ system with block labels."""
    return gen_pclq(pclq_spec)


@pytest.fixture
def noiseless_dataset(generated):
    """Transitions without process noise (x1 = A x0 + B u0 exactly)."""
    noise = NoiseSpec(sigma0=1.0, sigma_u=1.0, sigma_xi=0.0)
    return sample_transitions(generated.system, 60, noise, CounterRng(3))


@pytest.fixture
def small_config() -> ExperimentConfig:
    """A fast sweep configuration: one d, two sample sizes, three trials."""
    return ExperimentConfig(
        d_list=[12],
        n_grid=[60, 120],
        trials=3,
        estimators=["ols", "moment"],
        s_c=3,
        s_e=3,
    )
