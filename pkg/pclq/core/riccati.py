"""
Discrete algebraic Riccati equation solvers and policy evaluation.

Gains follow the convention u = K x with K = -(R + B^T P B)^{-1} B^T P A,
so A + B K is the closed loop everywhere in the package.
"""

import logging
import math

import numpy as np
import scipy.linalg

from pclq.config import get_settings
from pclq.core.base import LqSystem, Matrix, RiccatiSolution, as_matrix, fro, symmetrize
from pclq.core.exceptions import (
    ConfigError,
    MaxIterExceededError,
    NumericalError,
    ShapeError,
    SingularInnerSolveError,
    UnstableInitialPolicyError,
    UnstablePolicyError,
)
from pclq.core.stability import is_stable

logger = logging.getLogger(__name__)


def _inner_factor(sys: LqSystem, p: Matrix) -> tuple[Matrix, bool]:
    """Cholesky-factorize R + B^T P B."""
    inner = symmetrize(sys.r + sys.b.T @ p @ sys.b)
    try:
        return scipy.linalg.cho_factor(inner, lower=True)
    except np.linalg.LinAlgError as e:
        msg = f"R + B^T P B is not positive definite: {e}"
        raise SingularInnerSolveError(msg) from e


def _map_and_gain(sys: LqSystem, p: Matrix) -> tuple[Matrix, Matrix]:
    bpa = sys.b.T @ p @ sys.a
    factor = _inner_factor(sys, p)
    solved = scipy.linalg.cho_solve(factor, bpa)
    p_next = sys.a.T @ p @ sys.a + sys.q - bpa.T @ solved
    return symmetrize(p_next), -solved


def riccati_map(sys: LqSystem, p: Matrix) -> Matrix:
    """Apply P -> A^T P A + Q - (B^T P A)^T (R + B^T P B)^{-1} B^T P A."""
    return _map_and_gain(sys, p)[0]


def gain_from_value(sys: LqSystem, p: Matrix) -> Matrix:
    """Return K = -(R + B^T P B)^{-1} B^T P A."""
    return _map_and_gain(sys, p)[1]


def riccati_residual(sys: LqSystem, p: Matrix) -> float:
    """Relative fixed-point residual ||Riccati(P) - P||_F / (1 + ||P||_F)."""
    return fro(riccati_map(sys, p) - p) / (1.0 + fro(p))


def closed_loop(sys: LqSystem, k: Matrix) -> Matrix:
    """Return A + B K."""
    k = as_matrix(k, "k")
    if k.shape != (sys.d_u, sys.d):
        msg = f"gain must be {sys.d_u}x{sys.d}, got {k.shape}"
        raise ShapeError(msg)
    return sys.a + sys.b @ k


def average_cost(p: Matrix, w: Matrix) -> float:
    """
    Steady-state per-step expected cost trace(P W).

    Args:
        p: Value matrix of a policy
        w: Process-noise covariance

    Returns:
        float: trace(P W)

    """
    p = as_matrix(p, "p", square=True)
    w = as_matrix(w, "w", square=True)
    if p.shape != w.shape:
        msg = f"p and w shapes differ: {p.shape} vs {w.shape}"
        raise ShapeError(msg)
    return float(np.sum(p * w.T))


def solve_dare_value_iteration(
    sys: LqSystem,
    tol: float | None = None,
    max_iter: int | None = None,
) -> RiccatiSolution:
    """
    Solve the DARE by value iteration started from P_0 = Q.

    Stops at the first iterate P whose one-step change satisfies
    ||Riccati(P) - P||_F / (1 + ||P||_F) < tol and returns that iterate, so the
    reported residual is exactly the Riccati residual of the returned P.

    Args:
        sys: LQ system
        tol: Relative stopping tolerance (defaults to settings)
        max_iter: Iteration budget (defaults to settings)

    Returns:
        RiccatiSolution: Value matrix, gain and diagnostics

    Raises:
        MaxIterExceededError: No convergence (non-stabilizable model)
        SingularInnerSolveError: R + B^T P B not positive definite

    """
    settings = get_settings()
    tol = settings.dare_tol if tol is None else tol
    max_iter = settings.dare_max_iter if max_iter is None else max_iter
    if tol <= 0:
        msg = f"tol must be positive, got {tol}"
        raise ConfigError(msg)

    bound = settings.divergence_bound * (1.0 + fro(sys.q))
    p = np.array(sys.q)
    residual = math.inf
    for iteration in range(1, max_iter + 1):
        p_next, k = _map_and_gain(sys, p)
        norm_next = fro(p_next)
        residual = fro(p_next - p) / (1.0 + fro(p))
        if residual < tol:
            logger.debug(f"Value iteration converged in {iteration} steps (residual {residual:.3e})")
            return RiccatiSolution(p=p, k=k, iterations=iteration, residual=residual)
        if not math.isfinite(norm_next) or norm_next > bound:
            msg = f"Value iteration diverged after {iteration} steps (||P||_F = {norm_next:.3e})"
            raise MaxIterExceededError(msg, iterations=iteration, residual=residual)
        p = p_next

    msg = f"Value iteration did not converge in {max_iter} steps (residual {residual:.3e})"
    raise MaxIterExceededError(msg, iterations=max_iter, residual=residual)


def policy_value(
    sys: LqSystem,
    k: Matrix,
    tol: float | None = None,
    max_iter: int | None = None,
) -> Matrix:
    """
    Evaluate a stabilizing gain: P = (A+BK)^T P (A+BK) + Q + K^T R K.

    The Lyapunov series is summed by doubling, S_2n = S_n + (M^n)^T S_n M^n,
    until the increment has Frobenius norm below tol.

    Args:
        sys: LQ system
        k: Gain (d_u x d)
        tol: Absolute increment tolerance (defaults to settings)
        max_iter: Maximum number of doublings (defaults to settings)

    Returns:
        Matrix: Value matrix P_K

    Raises:
        UnstablePolicyError: The closed loop is not certified stable

    """
    settings = get_settings()
    tol = settings.lyapunov_tol if tol is None else tol
    max_iter = settings.lyapunov_max_doublings if max_iter is None else max_iter

    k = as_matrix(k, "k")
    m = closed_loop(sys, k)
    if not is_stable(m):
        msg = "closed loop A + BK failed the stability certificate"
        raise UnstablePolicyError(msg)

    total = symmetrize(sys.q + k.T @ sys.r @ k)
    m_pow = m
    for _ in range(max_iter):
        increment = m_pow.T @ total @ m_pow
        total = symmetrize(total + increment)
        if fro(increment) < tol:
            return total
        m_pow = m_pow @ m_pow

    msg = f"Lyapunov doubling did not converge in {max_iter} doublings"
    raise MaxIterExceededError(msg, iterations=max_iter, residual=fro(increment))


def policy_iteration(
    sys: LqSystem,
    k0: Matrix,
    tol: float | None = None,
    max_iter: int | None = None,
) -> RiccatiSolution:
    """
    Solve the DARE by policy iteration from a stabilizing gain.

    Args:
        sys: LQ system
        k0: Stabilizing initial gain
        tol: Relative stopping tolerance on successive value matrices
        max_iter: Maximum number of policy improvements

    Returns:
        RiccatiSolution: Value matrix, gain and diagnostics

    Raises:
        UnstableInitialPolicyError: k0 does not stabilize the system
        MaxIterExceededError: No convergence within max_iter improvements

    """
    settings = get_settings()
    tol = settings.dare_tol if tol is None else tol
    max_iter = settings.dare_max_iter if max_iter is None else max_iter

    if not is_stable(closed_loop(sys, k0)):
        msg = "initial gain does not stabilize the system"
        raise UnstableInitialPolicyError(msg)

    p_prev = policy_value(sys, k0)
    residual = math.inf
    for iteration in range(1, max_iter + 1):
        k = gain_from_value(sys, p_prev)
        p = policy_value(sys, k)
        residual = fro(p - p_prev) / (1.0 + fro(p_prev))
        p_prev = p
        if residual < tol:
            logger.debug(f"Policy iteration converged in {iteration} steps")
            return RiccatiSolution(
                p=p,
                k=gain_from_value(sys, p),
                iterations=iteration,
                residual=riccati_residual(sys, p),
            )

    msg = f"Policy iteration did not converge in {max_iter} steps (change {residual:.3e})"
    raise MaxIterExceededError(msg, iterations=max_iter, residual=residual)


def solve_dare_reference(sys: LqSystem) -> RiccatiSolution:
    """
    Solve the DARE with SciPy's Schur-based solver.

    Used as a cross-check of the iterative solvers and selectable in
    experiments.

    Raises:
        NumericalError: SciPy could not find a stabilizing solution

    """
    try:
        p = scipy.linalg.solve_discrete_are(sys.a, sys.b, sys.q, sys.r)
    except (np.linalg.LinAlgError, ValueError) as e:
        msg = f"reference DARE solver failed: {e}"
        raise NumericalError(msg) from e
    if not np.all(np.isfinite(p)):
        msg = "reference DARE solver returned non-finite values"
        raise NumericalError(msg)
    p = symmetrize(p)
    return RiccatiSolution(
        p=p,
        k=gain_from_value(sys, p),
        iterations=0,
        residual=riccati_residual(sys, p),
    )


def solve_dare(sys: LqSystem, method: str = "value", tol: float | None = None) -> RiccatiSolution:
    """
    Dispatch to a DARE solver by name.

    ``policy`` starts from the zero gain, which must stabilize the system.
    """
    if method == "value":
        return solve_dare_value_iteration(sys, tol=tol)
    if method == "policy":
        return policy_iteration(sys, np.zeros((sys.d_u, sys.d)), tol=tol)
    if method == "reference":
        return solve_dare_reference(sys)
    msg = f"unknown DARE method: {method}"
    raise ConfigError(msg)


def cost_ratio(
    sys: LqSystem,
    k: Matrix,
    p_star: Matrix,
    w: Matrix | None = None,
) -> float:
    """
    Return trace(P_K W) / trace(P_star W), or +inf if K is not certified stabilizing.

    Args:
        sys: True LQ system
        k: Gain to evaluate
        p_star: Optimal value matrix of the true system
        w: Noise covariance (identity by default)

    Returns:
        float: Cost ratio, at least 1 up to numerical error for optimal p_star

    """
    w = np.eye(sys.d) if w is None else w
    try:
        p_k = policy_value(sys, k)
    except (UnstablePolicyError, MaxIterExceededError):
        return math.inf
    optimal = average_cost(p_star, w)
    achieved = average_cost(p_k, w)
    if optimal <= 0.0:
        return 1.0 if achieved <= 0.0 else math.inf
    return achieved / optimal
