"""Synthetic PC-LQ systems, the uncontrollable-coupling counterexample, and transition sampling."""

import logging

import numpy as np

from pclq.config import get_settings
from pclq.core.base import LqSystem, Matrix
from pclq.core.exceptions import ConfigError, DegenerateBlockError
from pclq.core.stability import gelfand_radius
from pclq.estimation.base import Dataset
from pclq.structure.analysis import linf_block_norm
from pclq.structure.base import SparsityBlocks
from pclq.synth.base import BlockNorm, GeneratedSystem, NoiseSpec, PcLqSpec, QMode
from pclq.synth.rng import CounterRng

logger = logging.getLogger(__name__)

MIN_BLOCK_RADIUS = 1e-12
MAX_BLOCK_DRAWS = 5


def _block_scale(block: Matrix, norm: BlockNorm) -> float:
    if norm == "singular":
        return float(np.linalg.norm(block, 2))
    return gelfand_radius(block, get_settings().normalization_squarings)


def _draw_block(size: int, rho: float, rng: CounterRng, norm: BlockNorm = "spectral") -> Matrix:
    """Gaussian square block rescaled to Gelfand spectral radius rho, or to 2-norm rho."""
    if size == 0:
        return np.zeros((0, 0))
    for _ in range(MAX_BLOCK_DRAWS):
        block = rng.standard_normal((size, size))
        scale = _block_scale(block, norm)
        if scale >= MIN_BLOCK_RADIUS:
            return block * (rho / scale)
    msg = f"could not draw a {size}x{size} block with non-negligible {norm} scale"
    raise DegenerateBlockError(msg)


def cost_matrix(blocks: SparsityBlocks, mode: QMode = "i_onetwo") -> Matrix:
    """
    State cost of a PC-LQ.

    ``i_onetwo`` puts ones on blocks 1-2 and zeros on block 3; ``identity`` is I_d.
    """
    if mode == "identity":
        return np.eye(blocks.d)
    diagonal = np.zeros(blocks.d)
    diagonal[blocks.relevant] = 1.0
    return np.diag(diagonal)


def _assemble(
    blocks: SparsityBlocks,
    a1: Matrix,
    a2: Matrix,
    a3: Matrix,
    a12: Matrix,
    a32: Matrix,
    b1: Matrix,
    d_u: int,
    q_mode: QMode,
) -> GeneratedSystem:
    d = blocks.d
    i1, i2, i3 = blocks.block1, blocks.block2, blocks.block3
    a = np.zeros((d, d))
    a[np.ix_(i1, i1)] = a1
    a[np.ix_(i1, i2)] = a12
    a[np.ix_(i2, i2)] = a2
    a[np.ix_(i3, i2)] = a32
    a[np.ix_(i3, i3)] = a3
    b = np.zeros((d, d_u))
    b[i1, :] = b1

    linf_a3 = linf_block_norm(a3)
    if linf_a3 >= 1.0:
        logger.debug(f"Irrelevant block is not L-infinity stable (norm {linf_a3:.3f})")
    system = LqSystem(a=a, b=b, q=cost_matrix(blocks, q_mode), r=np.eye(d_u))
    return GeneratedSystem(system=system, blocks=blocks, linf_a3=linf_a3)


def gen_pclq(spec: PcLqSpec, rng: CounterRng | None = None) -> GeneratedSystem:
    """
    Draw a coordinate-aligned PC-LQ system.

    Diagonal blocks A_1, A_2, A_3 are Gaussian and rescaled to the target
    radii (spectral radius or 2-norm, per spec.block_norm); couplings A_12,
    A_32 and B_1 are standard Gaussian; every other entry of (A, B) is
    exactly zero.

    Args:
        spec: Block sizes, radii and seed
        rng: Stream to draw from (defaults to the stream of spec.seed)

    Returns:
        GeneratedSystem: System, block labels and ||A_3||_inf

    """
    rng = CounterRng(spec.seed) if rng is None else rng
    blocks = spec.blocks()
    s_c, s_e = spec.s_c, spec.s_e
    s3 = spec.d - s_c - s_e

    a1 = _draw_block(s_c, spec.rho1, rng, spec.block_norm)
    a2 = _draw_block(s_e, spec.rho2, rng, spec.block_norm)
    a3 = _draw_block(s3, spec.rho3, rng, spec.block_norm)
    a12 = rng.standard_normal((s_c, s_e))
    a32 = rng.standard_normal((s3, s_e))
    b1 = rng.standard_normal((s_c, spec.d_u))
    return _assemble(blocks, a1, a2, a3, a12, a32, b1, spec.d_u, spec.q_mode)


def resample_irrelevant(
    generated: GeneratedSystem,
    rho3: float,
    rng: CounterRng,
    block_norm: BlockNorm = "spectral",
) -> GeneratedSystem:
    """
    Redraw the irrelevant dynamics A_32 and A_3 (A_3 rescaled to rho3), keeping everything else.

    Args:
        generated: System to modify
        rho3: Target radius of the new A_3
        rng: Stream for the new blocks
        block_norm: Normalization of the new A_3

    Returns:
        GeneratedSystem: System with identical blocks 1-2 and cost

    """
    blocks = generated.blocks
    a = np.array(generated.system.a)
    i2, i3 = blocks.block2, blocks.block3
    a3 = _draw_block(len(i3), rho3, rng, block_norm)
    a32 = rng.standard_normal((len(i3), len(i2)))
    a[np.ix_(i3, i2)] = a32
    a[np.ix_(i3, i3)] = a3
    system = LqSystem(a=a, b=generated.system.b, q=generated.system.q, r=generated.system.r)
    return GeneratedSystem(system=system, blocks=blocks, linf_a3=linf_block_norm(a3))


def gen_counterexample(d: int, rho: list[float] | np.ndarray) -> LqSystem:
    """
    System whose optimal gain depends on uncontrollable dynamics.

    A has a first row of ones and diag(1, rho_1, ..., rho_{d-1}) elsewhere,
    B = e_1, Q = diag(1, 0, ..., 0) and R = 1.

    Args:
        d: State dimension (>= 2)
        rho: d - 1 modes with |rho_i| < 1

    Returns:
        LqSystem: The counterexample system

    """
    rho = np.asarray(rho, dtype=np.float64).reshape(-1)
    if d < 2 or rho.shape != (d - 1,):
        msg = f"need d >= 2 and {d - 1} modes, got d={d} and {rho.shape[0]} modes"
        raise ConfigError(msg)
    if np.max(np.abs(rho)) >= 1.0:
        msg = "all modes must satisfy |rho_i| < 1"
        raise ConfigError(msg)
    a = np.diag(np.concatenate([[1.0], rho]))
    a[0, :] = 1.0
    b = np.zeros((d, 1))
    b[0, 0] = 1.0
    q = np.zeros((d, d))
    q[0, 0] = 1.0
    return LqSystem(a=a, b=b, q=q, r=np.eye(1))


def sample_transitions(sys: LqSystem, n: int, noise: NoiseSpec, rng: CounterRng) -> Dataset:
    """
    Sample N one-step transitions x1 = A x0 + B u0 + xi.

    x0 ~ N(0, sigma0^2 I) or N(0, Sigma), u0 ~ N(0, sigma_u^2 I) and
    xi ~ N(0, sigma_xi^2 I), drawn in that order from the stream.

    Args:
        sys: System to sample from
        n: Number of samples (>= 1)
        noise: Noise levels and x0 covariance
        rng: Random stream

    Returns:
        Dataset: Samples; sigma0 is 0 when x0 has a general covariance

    """
    if n < 1:
        msg = f"need at least one sample, got {n}"
        raise ConfigError(msg)
    x0 = rng.standard_normal((n, sys.d)) @ noise.x0_factor(sys.d).T
    u0 = noise.sigma_u * rng.standard_normal((n, sys.d_u))
    xi = noise.sigma_xi * rng.standard_normal((n, sys.d))
    x1 = x0 @ sys.a.T + u0 @ sys.b.T + xi
    sigma0 = noise.sigma0 if noise.covariance_kind == "isotropic" else 0.0
    return Dataset(x0=x0, u0=u0, x1=x1, sigma0=sigma0)
