"""Structural analysis: controllability, relevant disturbances and PC-LQ blocks."""

from .analysis import (
    block_partition_sparsity,
    controllability_matrix,
    krylov_matrix,
    linf_block_norm,
    numeric_rank,
    relevant_disturbances_matrix,
    relevant_value_norm,
)
from .base import PcPartition, SparsityBlocks, SubspaceBasis
from .subspaces import complement_basis, minimal_invariant_subspace, orthonormal_span, pc_decompose

__all__ = [
    "PcPartition",
    "SparsityBlocks",
    "SubspaceBasis",
    "block_partition_sparsity",
    "complement_basis",
    "controllability_matrix",
    "krylov_matrix",
    "linf_block_norm",
    "minimal_invariant_subspace",
    "numeric_rank",
    "orthonormal_span",
    "pc_decompose",
    "relevant_disturbances_matrix",
    "relevant_value_norm",
]
