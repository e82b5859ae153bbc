"""Gauss-Legendre quadrature on [0, 1]"""

import logging
import math
from functools import lru_cache

import numpy as np

from ..errors import ArgumentError
from ..models.numerics import QuadratureRule

logger = logging.getLogger(__name__)

MAX_NODES = 1 << 16
MAX_NEWTON_STEPS = 100


def _legendre_pair(L: int, x: np.ndarray):
    """P_L(x) and P_{L-1}(x) by the three-term recurrence"""
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(1, L):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p, p_prev


@lru_cache(maxsize=64)
def gauss_legendre(L: int) -> QuadratureRule:
    """L-point Gauss-Legendre rule mapped to [0, 1]

    Roots of P_L are found by Newton iteration started from Chebyshev-angle
    estimates; the rule integrates polynomials of degree <= 2L-1 exactly.

    Args:
        L: Number of nodes, 1 <= L <= 2^16

    Returns:
        Rule with increasing nodes in (0, 1) and positive weights summing to 1
    """
    if isinstance(L, bool) or not isinstance(L, (int, np.integer)) or not 1 <= L <= MAX_NODES:
        raise ArgumentError(f"Number of quadrature nodes must be in [1, {MAX_NODES}], got {L!r}")
    L = int(L)
    if L == 1:
        return QuadratureRule(nodes=np.array([0.5]), weights=np.array([1.0]))

    i = np.arange(1, L + 1)
    x = np.cos(math.pi * (i - 0.25) / (L + 0.5)) * (1 - 1 / (8 * L ** 2) + 1 / (8 * L ** 3))
    for step in range(MAX_NEWTON_STEPS):
        p, p_prev = _legendre_pair(L, x)
        dp = L * (x * p - p_prev) / (x * x - 1)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) <= 1e-15:
            break
    else:
        logger.warning("Newton iteration for L=%d stopped after %d steps", L, MAX_NEWTON_STEPS)

    p, p_prev = _legendre_pair(L, x)
    dp = L * (x * p - p_prev) / (x * x - 1)
    weights = 2.0 / ((1.0 - x * x) * dp * dp)

    # roots come out descending; symmetrize about 0
    x = x[::-1]
    weights = weights[::-1]
    x = 0.5 * (x - x[::-1])
    weights = 0.5 * (weights + weights[::-1])
    logger.debug("Gauss-Legendre rule with L=%d converged after %d Newton steps", L, step + 1)
    return QuadratureRule(nodes=0.5 * (x + 1.0), weights=0.5 * weights)
