"""Tikhonov-regularized least squares by orthogonal factorization"""

import logging

import numpy as np
from scipy import linalg

from ..errors import ArgumentError
from ..models.config import Norm
from ..models.numerics import RidgeProblem, RidgeSolution

logger = logging.getLogger(__name__)


def regularizer_diagonal(K: int, norm: Norm) -> np.ndarray:
    """Diagonal D with ||D a|| equal to the L^2 or H^1 norm of f_a"""
    if K < 1:
        raise ArgumentError(f"K must be >= 1, got {K}")
    if Norm(norm) == Norm.L2:
        return np.ones(K)
    return np.sqrt(1.0 + (np.pi * np.arange(K)) ** 2)


def _normal_residual(problem: RidgeProblem, a: np.ndarray) -> float:
    A, D = problem.A, problem.D
    gradient = A.T @ (A @ a) + problem.tau ** 2 * D * D * a - A.T @ problem.b
    return float(np.linalg.norm(gradient))


def solve_ridge(problem: RidgeProblem) -> RidgeSolution:
    """Minimize ||A a - b||^2 + tau^2 ||D a||^2

    The stacked system [A; tau D] a = [b; 0] is solved through its QR
    factorization. A rank-deficient system (possible only for tau = 0) falls
    back to the minimum-norm least-squares solution and is flagged degenerate.
    """
    A, b, tau, D = problem.A, problem.b, problem.tau, problem.D
    K = problem.K
    if tau > 0:
        stacked = np.vstack([A, tau * np.diag(D)])
        rhs = np.concatenate([b, np.zeros(K)])
    else:
        stacked, rhs = A, b

    degenerate = stacked.shape[0] < K
    if not degenerate:
        Q, R = linalg.qr(stacked, mode="economic")
        diagonal = np.abs(np.diag(R))
        threshold = np.finfo(float).eps * max(stacked.shape) * max(float(diagonal.max()), 1e-300)
        degenerate = bool(np.any(diagonal <= threshold))
    if degenerate:
        a, _, rank, _ = linalg.lstsq(stacked, rhs)
        logger.warning("Ridge system is rank deficient (rank %d of %d); using minimum-norm solution", rank, K)
    else:
        a = linalg.solve_triangular(R, Q.T @ rhs)
        rank = K

    return RidgeSolution(
        a=a,
        degenerate=degenerate,
        rank=int(rank),
        normal_residual=_normal_residual(problem, a),
    )
