"""Controllability, relevant-disturbance and sparsity analysis of LQ systems."""

import logging

import numpy as np

from pclq.config import get_settings
from pclq.core.base import LqSystem, Matrix, as_matrix, fro
from pclq.core.exceptions import InvariantViolationError, ShapeError
from pclq.core.riccati import solve_dare_value_iteration
from pclq.structure.base import SparsityBlocks, SubspaceBasis
from pclq.structure.subspaces import complement_basis

logger = logging.getLogger(__name__)


def krylov_matrix(a: Matrix, b: Matrix, powers: int) -> Matrix:
    """Return [B, AB, ..., A^powers B]."""
    blocks = [b]
    for _ in range(powers):
        blocks.append(a @ blocks[-1])
    return np.hstack(blocks)


def controllability_matrix(a: Matrix, b: Matrix) -> Matrix:
    """
    Controllability matrix [B, AB, ..., A^(d-1) B].

    Powers beyond d - 1 add nothing to the span (Cayley-Hamilton).

    Args:
        a: d x d dynamics
        b: d x d_u input matrix

    Returns:
        Matrix: d x (d * d_u) matrix

    """
    a = as_matrix(a, "a", square=True)
    b = as_matrix(b, "b")
    d = a.shape[0]
    if b.shape[0] != d:
        msg = f"b must have {d} rows, got {b.shape}"
        raise ShapeError(msg)
    return krylov_matrix(a, b, d - 1)


def numeric_rank(m: Matrix, tol_factor: float | None = None) -> int:
    """
    Count singular values above tol_factor * max(rows, cols) * sigma_max.

    Args:
        m: Any matrix
        tol_factor: Relative tolerance (defaults to settings)

    Returns:
        int: Numerical rank

    """
    tol_factor = get_settings().rank_tol_factor if tol_factor is None else tol_factor
    m = as_matrix(m, "m")
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol_factor * max(m.shape) * s[0]))


def relevant_disturbances_matrix(a: Matrix, p_c: SubspaceBasis, tol: float | None = None) -> Matrix:
    """
    Relevant disturbances matrix of A with respect to its controllable subspace.

    A is rotated into the basis [p_c | complement], giving the blocks X_12
    (coupling of the complement into p_c) and X_2 (complement dynamics). The
    result is [X_12^T, X_2^T X_12^T, ..., (X_2^T)^(d - s_c) X_12^T]; its rank
    is the number of uncontrollable directions relevant for control.

    Args:
        a: d x d dynamics
        p_c: Invariant (controllable) subspace of A
        tol: Invariance tolerance relative to ||A||_F (defaults to settings)

    Returns:
        Matrix: (d - s_c) x ((d - s_c + 1) * s_c) matrix

    Raises:
        InvariantViolationError: p_c is not A-invariant

    """
    tol = get_settings().subspace_tol if tol is None else tol
    a = as_matrix(a, "a", square=True)
    d = a.shape[0]
    if p_c.dim_ambient != d:
        msg = f"subspace lives in R^{p_c.dim_ambient}, matrix acts on R^{d}"
        raise ShapeError(msg)

    basis = p_c.basis
    leakage = fro(a @ basis - basis @ (basis.T @ a @ basis))
    if leakage > tol * max(1.0, fro(a)):
        msg = f"subspace is not invariant: ||(I - P_c) A P_c||_F = {leakage:.3e}"
        raise InvariantViolationError(msg)

    complement = complement_basis(p_c)
    x_12 = basis.T @ a @ complement
    x_2 = complement.T @ a @ complement
    return krylov_matrix(x_2.T, x_12.T, d - p_c.dim_subspace)


def linf_block_norm(a3: Matrix) -> float:
    """Induced infinity norm: maximum absolute row sum."""
    a3 = as_matrix(a3, "a3", square=True)
    if a3.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(a3), axis=1)))


def _closure(start: np.ndarray, step: np.ndarray) -> np.ndarray:
    """Fixed point of reach |= step(reach) for a boolean adjacency operator."""
    reach = start.copy()
    while True:
        grown = reach | step[:, reach].any(axis=1)
        if np.array_equal(grown, reach):
            return reach
        reach = grown


def block_partition_sparsity(a: Matrix, b: Matrix, zero_tol: float = 0.0) -> SparsityBlocks:
    """
    Read the PC-LQ block labels off the sparsity pattern of (A, B).

    With an edge j -> i whenever |A(i, j)| > zero_tol, block 1 holds the
    coordinates reachable from the row support of B, block 2 the remaining
    coordinates with a directed path into block 1, and block 3 the rest.

    Args:
        a: d x d dynamics
        b: d x d_u input matrix
        zero_tol: Magnitude at or below which an entry counts as zero

    Returns:
        SparsityBlocks: Coordinate labels

    """
    a = as_matrix(a, "a", square=True)
    b = as_matrix(b, "b")
    edges = np.abs(a) > zero_tol  # edges[i, j]: j -> i
    actuated = (np.abs(b) > zero_tol).any(axis=1)

    block1 = _closure(actuated, edges)
    # reverse edges: i -> j whenever j -> i
    upstream = _closure(block1, edges.T)
    block2 = upstream & ~block1
    block3 = ~upstream

    return SparsityBlocks(
        block1=np.flatnonzero(block1).tolist(),
        block2=np.flatnonzero(block2).tolist(),
        block3=np.flatnonzero(block3).tolist(),
    )


def relevant_value_norm(sys: LqSystem, blocks: SparsityBlocks) -> float:
    """
    Operator norm of the optimal value matrix of the relevant subsystem (blocks 1-2, Q = I).

    Reported as a diagnostic of how hard the learning problem is.
    """
    idx = blocks.relevant
    if not idx:
        return 0.0
    relevant = LqSystem(
        a=sys.a[np.ix_(idx, idx)],
        b=sys.b[idx, :],
        q=np.eye(len(idx)),
        r=sys.r,
    )
    p = solve_dare_value_iteration(relevant).p
    return float(np.linalg.norm(p, 2))
