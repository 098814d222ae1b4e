"""Sparse recovery of non-hub link delays and the success criterion.

Two solvers act on the hub-subtracted system: orthogonal matching pursuit
(default) and nonnegative iterative soft-thresholding for the l1-regularised
least-squares problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import solve_triangular

from .errors import ParameterError, RecoveryError, StructureError
from .measurements import DelaySignal, MeasurementPlan, MeasurementVector, effective_system

# Half of the smallest support value at the largest swept sparsity rate,
# 0.5 * 5 * (1 - 0.35); three orders of magnitude above the noise ceiling.
SUPPORT_THRESHOLD = 0.5 * 5.0 * (1.0 - 0.35)
SUCCESS_REL_ERROR = 0.02

OMP = "omp"
ISTA_L1 = "ista_l1"


@dataclass
class SolverResult:
    x: np.ndarray
    iterations: int
    rank_deficient: bool = False
    objective: list[float] = field(default_factory=list)


def recover_omp(A: np.ndarray, b: np.ndarray, k_max: int, tol: float = 1e-9) -> SolverResult:
    """Orthogonal matching pursuit with a nonnegativity clamp on the output.

    Each step picks the column with the largest normalised absolute
    correlation with the residual and refits all selected columns by least
    squares (incremental QR).  Stops after ``k_max`` atoms, when the residual
    norm drops to ``tol``, or when the selected columns span the row space.

    Parameters
    ----------
    A : ndarray, shape (rows, cols)
    b : ndarray, shape (rows,)
    k_max : int
        Sparsity budget, at most ``cols``.
    tol : float
        Absolute residual tolerance.

    Raises
    ------
    RecoveryError
        If ``A`` is zero but ``b`` is not.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    rows, cols = A.shape
    if rows < 1:
        raise ParameterError("measurement matrix needs at least one row")
    if b.shape != (rows,):
        raise StructureError(f"rhs has shape {b.shape}, expected ({rows},)")
    if not 0 <= k_max <= cols:
        raise ParameterError(f"k_max must lie in [0, {cols}], got {k_max}")

    x = np.zeros(cols)
    residual = b.copy()
    if np.linalg.norm(residual) <= tol or k_max == 0:
        return SolverResult(x, 0)
    norms = np.linalg.norm(A, axis=0)
    usable = norms > 0
    if not usable.any():
        raise RecoveryError("zero measurement matrix cannot explain a nonzero rhs")
    inv_norms = np.where(usable, 1.0 / np.where(usable, norms, 1.0), 0.0)

    budget = min(k_max, rows, cols)
    Q = np.zeros((rows, budget))
    R = np.zeros((budget, budget))
    qtb = np.zeros(budget)
    support: list[int] = []
    excluded = ~usable
    rank_deficient = False
    while len(support) < budget:
        corr = np.abs(A.T @ residual) * inv_norms
        corr[excluded] = -1.0
        j = int(np.argmax(corr))
        if corr[j] <= 1e-12 * np.linalg.norm(residual):
            break
        k = len(support)
        a = A[:, j]
        q = a.copy()
        coeffs = np.zeros(k)
        for _ in range(2):
            c = Q[:, :k].T @ q
            q -= Q[:, :k] @ c
            coeffs += c
        nq = np.linalg.norm(q)
        if nq <= 1e-10 * norms[j]:
            rank_deficient = True
            excluded[j] = True
            continue
        Q[:, k] = q / nq
        R[:k, k] = coeffs
        R[k, k] = nq
        qtb[k] = Q[:, k] @ b
        support.append(j)
        excluded[j] = True
        residual -= Q[:, k] * (Q[:, k] @ residual)
        if np.linalg.norm(residual) <= tol:
            break
    k = len(support)
    if k:
        x[support] = solve_triangular(R[:k, :k], qtb[:k])
    np.maximum(x, 0.0, out=x)
    return SolverResult(x, k, rank_deficient)


def l1_objective(A, b, v, lam) -> float:
    r = A @ v - b
    return 0.5 * float(r @ r) + lam * float(np.abs(v).sum())


def recover_l1(
    A: np.ndarray,
    b: np.ndarray,
    lam: float,
    max_iter: int = 20000,
    tol: float = 1e-10,
) -> SolverResult:
    """Nonnegative ISTA for ``min 0.5 ||A v - b||^2 + lam ||v||_1`` over ``v >= 0``.

    Uses the fixed step ``1 / ||A||_2^2`` so the objective never increases;
    an increase beyond rounding raises ``RecoveryError``.  Converged when the
    iterate moves less than ``tol`` in l2.
    """
    if lam <= 0:
        raise ParameterError(f"lambda must be positive, got {lam}")
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    cols = A.shape[1]
    v = np.zeros(cols)
    lip = float(np.linalg.norm(A, 2) ** 2) if A.size else 0.0
    obj = l1_objective(A, b, v, lam)
    trace = [obj]
    if lip == 0.0:
        return SolverResult(v, 0, objective=trace)
    step = 1.0 / lip
    Atb = A.T @ b
    it = 0
    for it in range(1, max_iter + 1):
        grad = A.T @ (A @ v) - Atb
        v_new = np.maximum(v - step * grad - step * lam, 0.0)
        obj_new = l1_objective(A, b, v_new, lam)
        if obj_new > obj + 1e-10 * max(1.0, abs(obj)):
            raise RecoveryError(f"objective increased from {obj:.6g} to {obj_new:.6g} at iteration {it}")
        trace.append(obj_new)
        moved = np.linalg.norm(v_new - v)
        v, obj = v_new, obj_new
        if moved < tol:
            break
    return SolverResult(v, it, objective=trace)


def assemble(x_t_hat: np.ndarray, plan: MeasurementPlan, y: MeasurementVector) -> np.ndarray:
    """Full-length estimate: solver output on T, direct reads on the hub."""
    x_t_hat = np.asarray(x_t_hat, dtype=float)
    if x_t_hat.shape != plan.t_edges.shape or y.y_direct.shape != plan.hub_edges.shape:
        raise StructureError("estimate or direct reads do not match the plan")
    x_hat = np.zeros(plan.m)
    x_hat[plan.t_edges] = x_t_hat
    x_hat[plan.hub_edges] = y.y_direct
    return x_hat


@dataclass(frozen=True, eq=False)
class RecoveryResult:
    x_hat: np.ndarray
    recovered_support: frozenset[int]
    rel_error: float
    success: bool
    solver: str = OMP
    iterations: int = 0
    degenerate: bool = False
    rank_deficient: bool = False


def judge(
    x_hat: np.ndarray,
    x0: DelaySignal,
    solver: str = OMP,
    iterations: int = 0,
    threshold: float = SUPPORT_THRESHOLD,
    rank_deficient: bool = False,
) -> RecoveryResult:
    """Success iff every true support link is recovered and the relative
    l2 error is below 0.02.

    A link counts as recovered when its estimate exceeds ``threshold``.  For
    an all-zero ``x0`` the relative error is replaced by ``||x_hat||`` and the
    result is flagged ``degenerate``.
    """
    x_hat = np.asarray(x_hat, dtype=float)
    if x_hat.shape != x0.x.shape:
        raise StructureError(f"estimate has shape {x_hat.shape}, signal {x0.x.shape}")
    norm0 = float(np.linalg.norm(x0.x))
    diff = float(np.linalg.norm(x_hat - x0.x))
    degenerate = norm0 == 0.0
    rel = float(np.linalg.norm(x_hat)) if degenerate else diff / norm0
    found = frozenset(np.flatnonzero(x_hat > threshold).tolist())
    success = set(x0.support.tolist()) <= found and rel < SUCCESS_REL_ERROR
    return RecoveryResult(
        x_hat=x_hat,
        recovered_support=found,
        rel_error=rel,
        success=bool(success),
        solver=solver,
        iterations=iterations,
        degenerate=degenerate,
        rank_deficient=rank_deficient,
    )


def default_k_max(k: int, cols: int) -> int:
    return min(cols, math.ceil(1.5 * k))


def recover(
    plan: MeasurementPlan,
    y: MeasurementVector,
    k: int,
    solver: str = OMP,
    lam: Optional[float] = None,
) -> tuple[np.ndarray, SolverResult]:
    """Solve the hub-subtracted system and assemble the full estimate.

    ``k`` is the sparsity budget handed to OMP as ``ceil(1.5 k)``; ``lam``
    defaults to ``1e-3`` for the l1 solver.
    """
    A, rhs = effective_system(plan, y)
    cols = A.shape[1]
    if cols == 0:
        res = SolverResult(np.zeros(0), 0)
    elif solver == OMP:
        res = recover_omp(A, rhs, default_k_max(k, cols))
    elif solver == ISTA_L1:
        res = recover_l1(A, rhs, 1e-3 if lam is None else lam)
    else:
        raise ParameterError(f"unknown solver {solver!r}")
    return assemble(res.x, plan, y), res
