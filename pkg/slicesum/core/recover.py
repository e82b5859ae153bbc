"""Recovery of slicing-function coefficients from a radial profile F

Three routes are provided: the spatial-domain fit, the frequency-domain fit
(display matrix plus cosine analysis) and analytic constructions (odd-d
derivative formula, closed-form catalog, monomial inversion).
"""

import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from ..errors import ArgumentError, InputDataError, UnsupportedKernelError
from ..models.coefficients import CoefficientMetadata, CosineCoefficients
from ..models.config import FitConfig, Method, Norm
from ..models.kernel import KernelName, KernelSpec
from ..models.numerics import RecursionTable, RidgeProblem
from .kernels import (
    LAPLACE_MAX_DIMENSION,
    derivative_function,
    kernel_function,
    preimage_function,
)
from .quadrature import gauss_legendre
from .ridge import regularizer_diagonal, solve_ridge
from .sliceop import cosine_analysis, display_matrix, spatial_images
from .specfun import check_dimension, monomial_eigenvalue

logger = logging.getLogger(__name__)

FD_MAX_DIMENSION = 11
FD_ACCURACY = 8

RealFunction = Callable[[np.ndarray], np.ndarray]
DerivativeFunction = Callable[[int, np.ndarray], np.ndarray]


def _check_tau(cfg: FitConfig) -> None:
    if not cfg.tau > 0:
        raise ArgumentError(f"Regularization parameter must be positive, got tau={cfg.tau}")


def _samples(F: RealFunction, t: np.ndarray) -> np.ndarray:
    values = np.asarray(F(t), dtype=float)
    finite = np.isfinite(values)
    if not np.all(finite):
        bad = int(np.argmin(finite))
        raise InputDataError(f"Non-finite F sample at node {bad} (t={t[bad]:.6g})")
    return values


def _infer_method(cfg: FitConfig, spatial: bool) -> Method:
    return Method.for_norms(spatial, cfg.range_norm, cfg.domain_norm)


def _metadata(cfg: FitConfig, method: Method, kernel: Optional[KernelSpec], scale: float,
              J: Optional[int] = None) -> CoefficientMetadata:
    return CoefficientMetadata(
        method=method,
        tau=cfg.tau,
        domain_norm=cfg.domain_norm,
        range_norm=cfg.range_norm,
        kernel=kernel,
        scale=scale,
        L=cfg.L,
        J=J,
    )


def spatial_problem(F: RealFunction, d: int, K: int, L: int, tau: float, domain_norm: Norm) -> RidgeProblem:
    """Weighted least-squares system of the spatial-domain fit

    Rows are sqrt(v_l) S_d[g_k](t_l) against targets sqrt(v_l) F(t_l).
    """
    d = check_dimension(d)
    rule = gauss_legendre(L)
    root_weights = np.sqrt(rule.weights)
    H = spatial_images(d, K, L)
    A = (H * root_weights).T
    b = root_weights * _samples(F, rule.nodes)
    return RidgeProblem(A=A, b=b, tau=tau, D=regularizer_diagonal(K, domain_norm))


def fit_spatial(F: RealFunction, d: int, cfg: FitConfig, kernel: Optional[KernelSpec] = None,
                scale: float = 1.0) -> CosineCoefficients:
    """Spatial-domain fit: minimize ||S_d[f_a] - F||_{L^2} + tau ||f_a||

    Args:
        F: Vectorized target profile on [0, 1]
        d: Dimension
        cfg: Discretization (K, L) and regularization (tau, domain_norm)
        kernel: Catalog kernel recorded in the metadata
        scale: Dilation recorded in the metadata

    Returns:
        Fitted cosine coefficients
    """
    _check_tau(cfg)
    if cfg.range_norm != Norm.L2:
        raise ArgumentError("The spatial-domain fit measures the residual in L2 only")
    problem = spatial_problem(F, d, cfg.K, cfg.L, cfg.tau, cfg.domain_norm)
    solution = solve_ridge(problem)
    logger.info("Spatial fit d=%d K=%d L=%d tau=%g", d, cfg.K, cfg.L, cfg.tau)
    method = _infer_method(cfg, spatial=True)
    return CosineCoefficients(a=solution.a, d=d, meta=_metadata(cfg, method, kernel, scale))


def frequency_problem(F: RealFunction, d: int, cfg: FitConfig) -> RidgeProblem:
    """Display-matrix system of the frequency-domain fit"""
    d = check_dimension(d)
    S = display_matrix(d, cfg.J, cfg.K, cfg.L).S
    b = cosine_analysis(F, cfg.J, oversample=cfg.oversample, extrapolate=cfg.extrapolate)
    if cfg.range_norm == Norm.H1:
        row_scale = regularizer_diagonal(cfg.J, Norm.H1)
        A = S * row_scale[:, None]
        b = b * row_scale
    else:
        A = S
    return RidgeProblem(A=A, b=b, tau=cfg.tau, D=regularizer_diagonal(cfg.K, cfg.domain_norm))


def fit_frequency(F: RealFunction, d: int, cfg: FitConfig, kernel: Optional[KernelSpec] = None,
                  scale: float = 1.0) -> CosineCoefficients:
    """Frequency-domain fit through the display matrix"""
    _check_tau(cfg)
    solution = solve_ridge(frequency_problem(F, d, cfg))
    method = _infer_method(cfg, spatial=False)
    logger.info("Frequency fit d=%d K=%d J=%d L=%d tau=%g range=%s",
                d, cfg.K, cfg.J, cfg.L, cfg.tau, cfg.range_norm.value)
    return CosineCoefficients(a=solution.a, d=d, meta=_metadata(cfg, method, kernel, scale, J=cfg.J))


def recursion_table(d: int) -> RecursionTable:
    """Integer table of the odd-dimension inverse

    a[0][0] = 1, a[m][0] = (d - 2m) a[m-1][0], a[m][m] = 1,
    a[m][k] = (d - 2m + k) a[m-1][k] + a[m][k-1].
    """
    d = check_dimension(d)
    if d % 2 == 0:
        raise ArgumentError(f"Recursion table requires odd d, got {d}")
    n = (d - 1) // 2
    rows = [[1]]
    for m in range(1, n + 1):
        previous = rows[-1]
        row = [(d - 2 * m) * previous[0]]
        for k in range(1, m):
            row.append((d - 2 * m + k) * previous[k] + row[k - 1])
        row.append(1)
        rows.append(row)
    return RecursionTable(d=d, rows=tuple(tuple(row) for row in rows))


def inversion_prefactor(d: int) -> float:
    """2^n n! / (2n)! with n = (d - 1) / 2"""
    n = (d - 1) // 2
    return 2 ** n * math.factorial(n) / math.factorial(2 * n)


def inverse_norm_bound(d: int) -> float:
    """Bound C_d = (prefactor * sum_k a[n][k])^(1/2) of the odd-d inverse"""
    table = recursion_table(d)
    return math.sqrt(inversion_prefactor(d) * table.row_sum(table.n))


@lru_cache(maxsize=32)
def _central_weights(order: int) -> tuple:
    """Fornberg stencil weights at integer offsets, exact in rationals"""
    half = (order + 1) // 2 + FD_ACCURACY // 2 - 1
    x = list(range(-half, half + 1))
    n = len(x)
    C = [[Fraction(0)] * (order + 1) for _ in range(n)]
    C[0][0] = Fraction(1)
    c1 = Fraction(1)
    c4 = Fraction(x[0])
    for i in range(1, n):
        mn = min(i, order)
        c2 = Fraction(1)
        c5 = c4
        c4 = Fraction(x[i])
        for j in range(i):
            c3 = Fraction(x[i] - x[j])
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    C[i][k] = c1 * (k * C[i - 1][k - 1] - c5 * C[i - 1][k]) / c2
                C[i][0] = -c1 * c5 * C[i - 1][0] / c2
            for k in range(mn, 0, -1):
                C[j][k] = (c4 * C[j][k] - k * C[j][k - 1]) / c3
            C[j][0] = c4 * C[j][0] / c3
        c1 = c2
    offsets = np.array(x, dtype=float)
    weights = np.array([float(row[order]) for row in C])
    return offsets, weights


def finite_difference_derivative(F: RealFunction, order: int, t) -> np.ndarray:
    """Central difference of accuracy 8 with step eps^(1/(order+2))"""
    t = np.asarray(t, dtype=float)
    if order == 0:
        return np.asarray(F(t), dtype=float)
    offsets, weights = _central_weights(order)
    h = np.finfo(float).eps ** (1.0 / (order + 2))
    total = np.zeros_like(t)
    for offset, weight in zip(offsets, weights):
        total = total + weight * np.asarray(F(t + offset * h), dtype=float)
    return total / h ** order


def analytic_inverse_odd(F: RealFunction, d: int, t_points,
                         derivatives: Optional[DerivativeFunction] = None) -> np.ndarray:
    """Odd-d inverse f(t) = prefactor * sum_k a[n][k] t^k F^(k)(t)

    Args:
        F: Profile, evaluable slightly outside [0, 1] when differenced
        d: Odd dimension
        t_points: Evaluation points
        derivatives: (k, t) -> F^(k)(t); finite differences are used when absent

    Returns:
        f at t_points
    """
    table = recursion_table(d)
    n = table.n
    if derivatives is None:
        if d > FD_MAX_DIMENSION:
            raise ArgumentError(
                f"Finite-difference derivatives are limited to d <= {FD_MAX_DIMENSION}; "
                "supply closed-form derivatives"
            )
        derivatives = lambda k, t: finite_difference_derivative(F, k, t)
    t = np.asarray(t_points, dtype=float)
    total = np.zeros_like(t)
    for k in range(n + 1):
        values = np.asarray(derivatives(k, t), dtype=float)
        if values.shape != t.shape:
            raise ArgumentError(f"Derivative of order {k} returned shape {values.shape}, expected {t.shape}")
        total = total + float(table[n, k]) * t ** k * values
    return inversion_prefactor(d) * total


def invert_power_series(coefficients: Sequence[float], d: int) -> np.ndarray:
    """Map F = sum_k b_k s^k to f = sum_k (b_k / lambda_{k,d}) t^k"""
    b = np.asarray(coefficients, dtype=float)
    return b / monomial_eigenvalue(d, np.arange(b.size))


def direct_coefficients(kernel: KernelSpec, d: int, K: int, scale: float = 1.0,
                        oversample: int = 4, extrapolate: bool = True) -> CosineCoefficients:
    """Cosine coefficients of the closed-form slicing function f(scale * t)"""
    d = check_dimension(d)
    if not kernel.has_known_f:
        raise UnsupportedKernelError(
            f"Kernel '{kernel.name.value}' has no closed-form preimage; use a fit method"
        )
    if kernel.name == KernelName.LAPLACE and d > LAPLACE_MAX_DIMENSION:
        logger.warning("Laplace preimage series is limited to d <= %d; falling back to the spatial fit",
                       LAPLACE_MAX_DIMENSION)
        return fit_kernel(kernel, d, Method.S_L2_H1, FitConfig.for_method(Method.S_L2_H1, K=K), scale)
    f = preimage_function(kernel, d, scale)
    a = cosine_analysis(f, K, oversample=oversample, extrapolate=extrapolate)
    meta = CoefficientMetadata(method=Method.DIRECT, kernel=kernel, scale=scale, J=K)
    return CosineCoefficients(a=a, d=d, meta=meta)


def analytic_coefficients(kernel: KernelSpec, d: int, K: int, scale: float = 1.0,
                          oversample: int = 4) -> CosineCoefficients:
    """Cosine coefficients of the odd-d analytic inverse of F(scale * s)"""
    F = kernel_function(kernel, scale)
    f = lambda t: analytic_inverse_odd(F, d, t, derivatives=derivative_function(kernel, scale))
    a = cosine_analysis(f, K, oversample=oversample, extrapolate=True)
    meta = CoefficientMetadata(method=Method.ANALYTIC, kernel=kernel, scale=scale, J=K)
    return CosineCoefficients(a=a, d=d, meta=meta)


def fit_kernel(kernel: KernelSpec, d: int, method: Method, cfg: Optional[FitConfig] = None,
               scale: float = 1.0) -> CosineCoefficients:
    """Coefficients for a catalog kernel dilated by `scale` with any method"""
    method = Method(method)
    if cfg is None:
        cfg = FitConfig.for_method(method) if method.is_fit else FitConfig()
    if method == Method.DIRECT:
        return direct_coefficients(kernel, d, cfg.K, scale, cfg.oversample, cfg.extrapolate)
    if method == Method.ANALYTIC:
        return analytic_coefficients(kernel, d, cfg.K, scale, cfg.oversample)
    F = kernel_function(kernel, scale)
    if method.is_spatial:
        return fit_spatial(F, d, cfg, kernel=kernel, scale=scale)
    return fit_frequency(F, d, cfg, kernel=kernel, scale=scale)
