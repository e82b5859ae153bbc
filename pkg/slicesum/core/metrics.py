"""Error functionals: forward error, slicing variance and Monte Carlo MSE"""

import logging
from typing import Callable, Optional

import numpy as np
from scipy.integrate import trapezoid

from ..errors import ArgumentError, NumericalError
from ..models.coefficients import CosineCoefficients
from ..models.numerics import QuadratureRule
from ..models.result import ErrorReport, MseEstimate
from ..utils.threads import ordered_map
from .fastsum import sample_directions
from .quadrature import gauss_legendre
from .sliceop import apply_Sd, clamp_variance, cosine_synthesis, slice_moments, variance_Vd

logger = logging.getLogger(__name__)

DEFAULT_RULE_NODES = 2048

RealFunction = Callable[[np.ndarray], np.ndarray]


def default_grid(points: int = 1001, start: float = 0.0) -> np.ndarray:
    """Uniform grid s_n = n / (points - 1), optionally clipped below at `start`"""
    grid = np.linspace(0.0, 1.0, points)
    return grid[grid >= start]


def reference_rule(a: CosineCoefficients) -> QuadratureRule:
    """Rule with twice the nodes used for fitting"""
    L = a.meta.L
    return gauss_legendre(2 * L if L else DEFAULT_RULE_NODES)


def forward_error(a: CosineCoefficients, F: RealFunction, grid: Optional[np.ndarray] = None,
                  rule2L: Optional[QuadratureRule] = None, with_variance: bool = True) -> ErrorReport:
    """|S_d[f_a](s) - F(s)| on a grid with a doubled quadrature rule

    Args:
        a: Coefficients to assess
        F: Target profile
        grid: Points in [0, 1]; defaults to the 1001-point uniform grid
        rule2L: Quadrature rule; defaults to 2L nodes of the fit
        with_variance: Also compute V_d[f_a] and the decomposition residual

    Returns:
        ErrorReport
    """
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    rule = reference_rule(a) if rule2L is None else rule2L
    target = np.asarray(F(grid), dtype=float)
    if with_variance:
        first, second = slice_moments(a, a.d, grid, rule)
        variance = clamp_variance(second - first * first, second)
        forward = first - target
        # E[(f - F)^2] computed directly against its split
        direct = second - 2 * target * first + target * target
        residual = float(np.max(np.abs(direct - (forward * forward + variance)))) if grid.size else 0.0
    else:
        first = apply_Sd(a, a.d, grid, rule)
        variance = np.zeros_like(grid)
        forward = first - target
        residual = 0.0
    forward_abs = np.abs(forward)
    return ErrorReport(
        grid=grid,
        forward_abs=forward_abs,
        forward_max=float(np.max(forward_abs)) if grid.size else 0.0,
        forward_l2=float(np.sqrt(trapezoid(forward_abs ** 2, grid))) if grid.size > 1 else 0.0,
        variance=variance,
        decomposition_residual=residual,
    )


def predicted_mse(a: CosineCoefficients, F: RealFunction, x_norms, P: int,
                  rule: Optional[QuadratureRule] = None) -> np.ndarray:
    """Forward error squared plus V_d[f_a] / P"""
    rule = reference_rule(a) if rule is None else rule
    x_norms = np.asarray(x_norms, dtype=float)
    first, second = slice_moments(a, a.d, x_norms, rule)
    variance = clamp_variance(second - first * first, second)
    forward = first - np.asarray(F(x_norms), dtype=float)
    return forward * forward + variance / P


def empirical_mse(a: CosineCoefficients, F: RealFunction, x_norms, P: int, trials: int,
                  seed: int = 0, workers: Optional[int] = None) -> MseEstimate:
    """Monte Carlo estimate of E[((1/P) sum_p f_a(|<xi_p, x>|) - F(||x||))^2]

    x is placed on the first axis; every trial draws P i.i.d. directions from
    its own child of the master seed sequence.
    """
    x_norms = np.atleast_1d(np.asarray(x_norms, dtype=float))
    if np.any(~((x_norms >= 0) & (x_norms <= 1))):
        raise ArgumentError("x_norms must lie in [0, 1]")
    if P < 1 or trials < 2:
        raise ArgumentError(f"Need P >= 1 and trials >= 2, got P={P}, trials={trials}")
    target = np.asarray(F(x_norms), dtype=float)
    children = np.random.SeedSequence(seed).spawn(trials)

    def one_trial(child: np.random.SeedSequence) -> np.ndarray:
        first_axis = sample_directions(a.d, P, "iid", seed=child).xi[:, 0]
        values = cosine_synthesis(a, np.abs(np.multiply.outer(first_axis, x_norms)))
        return (values.mean(axis=0) - target) ** 2

    squared = np.vstack(ordered_map(one_trial, children, workers=workers))
    return MseEstimate(
        x_norms=x_norms,
        mean=squared.mean(axis=0),
        stderr=squared.std(axis=0, ddof=1) / np.sqrt(trials),
        P=P,
        trials=trials,
        seed=seed,
    )


def variance_bound(a: CosineCoefficients) -> float:
    """Uniform bound 2 ||a||_1^2 on V_d[f_a]"""
    return float(2.0 * np.sum(np.abs(a.a)) ** 2)


def max_variance(a: CosineCoefficients, grid: Optional[np.ndarray] = None,
                 rule: Optional[QuadratureRule] = None) -> float:
    grid = default_grid() if grid is None else grid
    rule = reference_rule(a) if rule is None else rule
    return float(np.max(variance_Vd(a, a.d, grid, rule)))


def relative_l2(s_ref, s_hat) -> float:
    """||s_ref - s_hat|| / ||s_ref||"""
    s_ref = np.asarray(s_ref, dtype=float)
    s_hat = np.asarray(s_hat, dtype=float)
    if s_ref.shape != s_hat.shape:
        raise ArgumentError(f"Shape mismatch {s_ref.shape} vs {s_hat.shape}")
    norm = float(np.linalg.norm(s_ref))
    if norm == 0.0:
        raise NumericalError("Relative error undefined for a zero reference")
    return float(np.linalg.norm(s_ref - s_hat)) / norm
