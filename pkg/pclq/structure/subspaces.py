"""Orthonormal spans, minimal invariant subspaces and the PC-LQ decomposition."""

import logging

import numpy as np
import scipy.linalg

from pclq.config import get_settings
from pclq.core.base import Matrix, as_matrix, fro
from pclq.core.exceptions import ShapeError
from pclq.structure.base import PcPartition, SubspaceBasis

logger = logging.getLogger(__name__)


def _rank_threshold(m: Matrix, singular_values: np.ndarray, tol_factor: float) -> float:
    if singular_values.size == 0:
        return 0.0
    return tol_factor * max(m.shape) * float(singular_values[0])


def orthonormal_span(m: Matrix, tol_factor: float | None = None) -> SubspaceBasis:
    """
    Orthonormal basis of the column span of M via the SVD.

    Args:
        m: d x k matrix
        tol_factor: Relative rank tolerance (defaults to settings)

    Returns:
        SubspaceBasis: Leading left singular vectors above the rank threshold

    """
    tol_factor = get_settings().rank_tol_factor if tol_factor is None else tol_factor
    m = as_matrix(m, "m")
    d = m.shape[0]
    if m.size == 0:
        return SubspaceBasis.empty(d)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    rank = int(np.sum(s > _rank_threshold(m, s, tol_factor))) if s[0] > 0 else 0
    return SubspaceBasis(basis=u[:, :rank])


def complement_basis(subspace: SubspaceBasis) -> Matrix:
    """
    Orthonormal basis of the orthogonal complement, by QR completion.

    Returns:
        Matrix: d x (d - r) matrix with orthonormal columns

    """
    d, r = subspace.dim_ambient, subspace.dim_subspace
    if r == 0:
        return np.eye(d)
    if r == d:
        return np.zeros((d, 0))
    q, _ = scipy.linalg.qr(subspace.basis, mode="full")
    return q[:, r:]


def minimal_invariant_subspace(
    a: Matrix,
    seed: SubspaceBasis,
    tol_factor: float | None = None,
) -> SubspaceBasis:
    """
    Smallest A-invariant subspace containing the seed (the Krylov span of A on the seed).

    Columns of A V are orthogonalized against the current basis in a fixed
    order; a direction is appended when its residual exceeds the tolerance.
    Only directions added in the previous pass are propagated, and the loop
    ends after a pass with no additions.

    Args:
        a: Square d x d matrix
        seed: Orthonormal seed basis
        tol_factor: Relative tolerance (defaults to settings)

    Returns:
        SubspaceBasis: Orthonormal basis of the invariant subspace

    """
    tol_factor = get_settings().rank_tol_factor if tol_factor is None else tol_factor
    a = as_matrix(a, "a", square=True)
    d = a.shape[0]
    if seed.dim_ambient != d:
        msg = f"seed lives in R^{seed.dim_ambient}, matrix acts on R^{d}"
        raise ShapeError(msg)

    threshold = tol_factor * max(d, 1) * fro(a)
    basis = np.array(seed.basis)
    frontier = basis
    while frontier.shape[1] > 0 and basis.shape[1] < d:
        added = []
        for column in (a @ frontier).T:
            v = column - basis @ (basis.T @ column)
            v = v - basis @ (basis.T @ v)
            norm = float(np.linalg.norm(v))
            if norm > threshold:
                v = v / norm
                basis = np.column_stack([basis, v])
                added.append(v)
                if basis.shape[1] == d:
                    break
        frontier = np.column_stack(added) if added else np.zeros((d, 0))

    logger.debug(f"Invariant subspace grew from {seed.dim_subspace} to {basis.shape[1]}")
    return SubspaceBasis(basis=basis)


def pc_decompose(a: Matrix, b: Matrix, tol_factor: float | None = None) -> PcPartition:
    """
    Decompose R^d into the input span, controllable subspace and relevant subspace.

    P_c is the minimal A-invariant subspace containing span(B) and P_r is the
    minimal (I - P_c) A^T-invariant subspace containing P_c. The residual
    measures how far A is from the block form
    P_c A P_c + P_r A (P_r - P_c) + (I - P_r) A (I - P_c).

    Args:
        a: d x d dynamics
        b: d x d_u input matrix
        tol_factor: Relative rank tolerance (defaults to settings)

    Returns:
        PcPartition: Nested bases and the block-form residual

    """
    a = as_matrix(a, "a", square=True)
    b = as_matrix(b, "b")
    d = a.shape[0]
    if b.shape[0] != d:
        msg = f"b must have {d} rows, got {b.shape}"
        raise ShapeError(msg)

    p_b = orthonormal_span(b, tol_factor)
    p_c = minimal_invariant_subspace(a, p_b, tol_factor)
    proj_c = p_c.projector()
    eye = np.eye(d)
    p_r = minimal_invariant_subspace((eye - proj_c) @ a.T, p_c, tol_factor)
    proj_r = p_r.projector()

    block_form = (
        proj_c @ a @ proj_c
        + proj_r @ a @ (proj_r - proj_c)
        + (eye - proj_r) @ a @ (eye - proj_c)
    )
    residual = fro(a - block_form)
    logger.debug(
        f"PC decomposition: s_c={p_c.dim_subspace}, s={p_r.dim_subspace}, residual={residual:.3e}"
    )
    return PcPartition(p_b=p_b, p_c=p_c, p_r=p_r, residual=residual)
