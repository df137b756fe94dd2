"""Tests for controllability, relevant disturbances and the PC-LQ decomposition."""

import numpy as np
import pytest

from pclq.core.exceptions import InvariantViolationError
from pclq.structure.analysis import (
    block_partition_sparsity,
    controllability_matrix,
    linf_block_norm,
    numeric_rank,
    relevant_disturbances_matrix,
    relevant_value_norm,
)
from pclq.structure.base import PcPartition, SparsityBlocks, SubspaceBasis
from pclq.structure.subspaces import (
    complement_basis,
    minimal_invariant_subspace,
    orthonormal_span,
    pc_decompose,
)
from pclq.synth.base import PcLqSpec
from pclq.synth.generators import gen_counterexample, gen_pclq


def test_numeric_rank():
    """Test rank decisions on exact and degenerate matrices."""
    assert numeric_rank(np.zeros((3, 3))) == 0
    assert numeric_rank(np.outer([1.0, 2.0, 3.0], [1.0, -1.0])) == 1
    assert numeric_rank(np.eye(4)) == 4
    assert numeric_rank(np.zeros((3, 0))) == 0


def test_controllability_of_diagonal_system():
    """Test only the actuated coordinate is controllable when A is diagonal."""
    a = np.diag([0.5, 0.7, 0.9])
    b = np.array([[1.0], [0.0], [0.0]])

    gamma = controllability_matrix(a, b)
    assert gamma.shape == (3, 3)
    assert numeric_rank(gamma) == 1


def test_counterexample_structure():
    """Test the two-state counterexample: one controllable and one relevant mode."""
    sys = gen_counterexample(2, [0.5])
    partition = pc_decompose(sys.a, sys.b)

    assert numeric_rank(controllability_matrix(sys.a, sys.b)) == 1
    assert numeric_rank(relevant_disturbances_matrix(sys.a, partition.p_c)) == 1
    assert (partition.s_c, partition.s_e) == (1, 1)
    assert partition.residual < 1e-12


def test_minimal_invariant_subspace():
    """Test invariant spans for eigenvector and generic seeds."""
    a = np.diag([1.0, 2.0, 3.0])

    eigen_seed = SubspaceBasis.coordinates(3, [0])
    assert minimal_invariant_subspace(a, eigen_seed).dim_subspace == 1

    generic = SubspaceBasis(basis=np.ones((3, 1)) / np.sqrt(3.0))
    assert minimal_invariant_subspace(a, generic).dim_subspace == 3

    empty = SubspaceBasis.empty(3)
    assert minimal_invariant_subspace(a, empty).dim_subspace == 0


def test_orthonormal_span_and_complement():
    """Test the span of a rank-deficient matrix and its orthogonal complement."""
    m = np.array([[1.0, 2.0], [1.0, 2.0], [0.0, 0.0], [0.0, 0.0]])
    span = orthonormal_span(m)
    complement = complement_basis(span)

    assert span.dim_subspace == 1
    assert complement.shape == (4, 3)
    np.testing.assert_allclose(span.basis.T @ complement, 0.0, atol=1e-12)
    np.testing.assert_allclose(complement.T @ complement, np.eye(3), atol=1e-12)

    # Degenerate ends
    assert complement_basis(SubspaceBasis.empty(2)).shape == (2, 2)
    assert complement_basis(SubspaceBasis.coordinates(2, [0, 1])).shape == (2, 0)


def test_subspace_validation():
    """Test non-orthonormal bases are rejected."""
    with pytest.raises(ValueError):
        SubspaceBasis(basis=np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_non_invariant_subspace():
    """Test the relevant disturbances matrix requires an invariant subspace."""
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])

    with pytest.raises(InvariantViolationError):
        relevant_disturbances_matrix(swap, SubspaceBasis.coordinates(2, [0]))


def test_generated_system_ranks():
    """Test generated PC-LQ systems have s_c controllable and s_e relevant directions."""
    rank_hits = 0
    for seed in range(100):
        sys = gen_pclq(PcLqSpec(seed=seed)).system
        partition = pc_decompose(sys.a, sys.b)
        gamma_rank = numeric_rank(controllability_matrix(sys.a, sys.b))
        rd_rank = numeric_rank(relevant_disturbances_matrix(sys.a, partition.p_c))
        if (gamma_rank, rd_rank) == (5, 5):
            rank_hits += 1
        assert partition.residual < 1e-8
    assert rank_hits >= 95


def test_pc_decompose_recovers_blocks(generated):
    """Test the decomposition of a coordinate-aligned PC-LQ."""
    sys, blocks = generated.system, generated.blocks
    partition = pc_decompose(sys.a, sys.b)

    assert isinstance(partition, PcPartition)
    assert (partition.s_c, partition.s_e, partition.s) == (5, 5, 10)
    assert partition.p_c.contains(partition.p_b)
    assert partition.p_r.contains(partition.p_c)

    # Controllable subspace is the span of block 1
    block1 = SubspaceBasis.coordinates(sys.d, blocks.block1)
    np.testing.assert_allclose(partition.p_c.projector(), block1.projector(), atol=1e-8)

    # Relevant subspace is the span of blocks 1 and 2
    relevant = SubspaceBasis.coordinates(sys.d, blocks.relevant)
    np.testing.assert_allclose(partition.p_r.projector(), relevant.projector(), atol=1e-8)


def test_block_partition_sparsity(generated):
    """Test the block labels are read back from the zero pattern."""
    sys = generated.system
    blocks = block_partition_sparsity(sys.a, sys.b)

    assert blocks == generated.blocks
    assert not np.any(sys.a[blocks.zero_mask()])


def test_block_partition_small_example():
    """Test a hand-built pattern: 0 actuated, 1 feeds 0, 2 is driven by 1 only."""
    a = np.array(
        [
            [0.5, 1.0, 0.0],
            [0.0, 0.5, 0.0],
            [0.0, 1.0, 0.5],
        ]
    )
    b = np.array([[1.0], [0.0], [0.0]])

    blocks = block_partition_sparsity(a, b)
    assert blocks == SparsityBlocks(block1=[0], block2=[1], block3=[2])
    assert blocks.relevant == [0, 1]


def test_sparsity_blocks_validation():
    """Test blocks must partition the coordinates."""
    with pytest.raises(ValueError):
        SparsityBlocks(block1=[0, 1], block2=[1], block3=[])


def test_linf_block_norm():
    """Test the induced infinity norm is the largest absolute row sum."""
    assert linf_block_norm(np.array([[0.5, -0.4], [0.1, 0.2]])) == pytest.approx(0.9)
    assert linf_block_norm(np.zeros((0, 0))) == 0.0


def test_relevant_value_norm(generated):
    """Test the relevant-subsystem value norm is finite and at least 1 (Q = I)."""
    norm = relevant_value_norm(generated.system, generated.blocks)

    assert np.isfinite(norm)
    assert norm >= 1.0


def _partially_controllable_pair(seed: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Random (A, B) in a rotated basis whose first r coordinates are the controllable part."""
    rng = np.random.default_rng(seed)
    d = 5 + seed % 4
    r = 1 + seed % 4
    a_tilde = rng.standard_normal((d, d)) / np.sqrt(d)
    a_tilde[r:, :r] = 0.0
    b_tilde = np.zeros((d, 2))
    b_tilde[:r] = rng.standard_normal((r, 2))
    rotation, _ = np.linalg.qr(rng.standard_normal((d, d)))
    return rotation @ a_tilde @ rotation.T, rotation @ b_tilde, rotation[:, :r]


def test_krylov_span_is_minimal_invariant_subspace():
    """Test the controllability-matrix span equals the minimal invariant subspace containing span(B)."""
    for seed in range(50):
        a, b, controllable = _partially_controllable_pair(seed)
        krylov = orthonormal_span(controllability_matrix(a, b))
        invariant = minimal_invariant_subspace(a, orthonormal_span(b))

        assert invariant.dim_subspace == krylov.dim_subspace == controllable.shape[1]
        np.testing.assert_allclose(invariant.projector(), krylov.projector(), atol=1e-8)
        np.testing.assert_allclose(invariant.projector(), controllable @ controllable.T, atol=1e-8)


@pytest.mark.parametrize(("rho", "rank"), [((0.3, 0.7), 2), ((0.5, 0.5), 1)])
def test_counterexample_relevant_rank(rho, rank):
    """Test repeated uncontrollable modes collapse the relevant-disturbance rank."""
    sys = gen_counterexample(3, list(rho))
    partition = pc_decompose(sys.a, sys.b)

    assert partition.s_c == 1
    assert numeric_rank(relevant_disturbances_matrix(sys.a, partition.p_c)) == rank
    assert partition.s_e == rank
