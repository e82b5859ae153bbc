"""Discretizations of the slicing operator S_d[f](s) = int_0^1 f(ts) rho_d(t) dt"""

import logging
import math
from functools import lru_cache
from typing import Callable, Tuple, Union

import numpy as np
from numpy.polynomial import chebyshev
from scipy.fft import dct

from ..errors import ArgumentError, InputDataError, NumericalError
from ..models.coefficients import CosineCoefficients
from ..models.numerics import DisplayMatrix, QuadratureRule
from .quadrature import gauss_legendre
from .specfun import check_dimension, density_rho, normalization_c

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
ROW_CHUNK = 2048
VARIANCE_TOLERANCE = 1e-12

RealFunction = Callable[[np.ndarray], np.ndarray]
Coefficients = Union[CosineCoefficients, np.ndarray]


def _unit_points(points, name: str = "s") -> np.ndarray:
    arr = np.atleast_1d(np.asarray(points, dtype=float))
    if arr.ndim != 1:
        raise ArgumentError(f"{name} must be one-dimensional")
    if np.any(~((arr >= 0) & (arr <= 1))):
        bad = int(np.argmax(~((arr >= 0) & (arr <= 1))))
        raise ArgumentError(f"{name}[{bad}]={arr[bad]!r} lies outside [0, 1]")
    return arr


def _coefficient_array(a: Coefficients) -> np.ndarray:
    if isinstance(a, CosineCoefficients):
        return a.a
    return np.asarray(a, dtype=float).ravel()


def slice_weights(d: int, rule: QuadratureRule) -> np.ndarray:
    """Quadrature weights times rho_d at the nodes"""
    return rule.weights * density_rho(d, rule.nodes)


def apply_Sd(f: Union[RealFunction, CosineCoefficients], d: int, s_points, rule: QuadratureRule) -> np.ndarray:
    """Evaluate S_d[f] at s_points by quadrature

    Args:
        f: Vectorized callable on [0, 1] or a cosine coefficient vector
        d: Dimension
        s_points: Evaluation points in [0, 1]
        rule: Quadrature rule for the t-integral

    Returns:
        S_d[f](s) for every s
    """
    d = check_dimension(d)
    s = _unit_points(s_points)
    if isinstance(f, CosineCoefficients):
        return f.a @ basis_images(d, f.K, s, rule)
    weights = slice_weights(d, rule)
    out = np.empty(s.size)
    for start in range(0, s.size, ROW_CHUNK):
        chunk = s[start:start + ROW_CHUNK]
        values = np.asarray(f(np.multiply.outer(chunk, rule.nodes)), dtype=float)
        out[start:start + ROW_CHUNK] = values @ weights
    return out


def basis_images(d: int, K: int, s_points, rule: QuadratureRule) -> np.ndarray:
    """Matrix H[k, i] = S_d[g_k](s_i) for k < K

    cos(pi k s t) is generated by the Chebyshev recurrence in k.
    """
    d = check_dimension(d)
    if K < 1:
        raise ArgumentError(f"K must be >= 1, got {K}")
    s = _unit_points(s_points)
    weights = slice_weights(d, rule)
    H = np.empty((K, s.size))
    H[0] = weights.sum()
    for start in range(0, s.size, ROW_CHUNK):
        stop = min(start + ROW_CHUNK, s.size)
        c = np.cos(math.pi * np.multiply.outer(s[start:stop], rule.nodes))
        prev, cur = np.ones_like(c), c
        for k in range(1, K):
            if k > 1:
                prev, cur = cur, 2.0 * c * cur - prev
            H[k, start:stop] = SQRT2 * (cur @ weights)
    return H


@lru_cache(maxsize=16)
def spatial_images(d: int, K: int, L: int) -> np.ndarray:
    """Basis images at the nodes of the L-point rule (read-only, cached)"""
    rule = gauss_legendre(L)
    H = basis_images(d, K, rule.nodes, rule)
    H.setflags(write=False)
    logger.debug("Computed basis images for d=%d, K=%d, L=%d", d, K, L)
    return H


def assemble_display_matrix(d: int, J: int, K: int, rule: QuadratureRule) -> DisplayMatrix:
    """Display matrix S[j, k] = <g_j, S_d[g_k]> of size J x K

    Uses S[j, k] = sum_i v_i rho_d(t_i) [sinc(k t_i + j) + sinc(k t_i - j)] for
    j >= 1, S[0, k] = sqrt(2) sum_i v_i rho_d(t_i) sinc(k t_i) and S[j, 0] = delta_j0.
    """
    d = check_dimension(d)
    if J < 1 or K < 1:
        raise ArgumentError(f"J and K must be >= 1, got J={J}, K={K}")
    t = rule.nodes
    weights = slice_weights(d, rule)
    S = np.zeros((J, K))
    S[0, 0] = 1.0
    j = np.arange(1, J, dtype=float)[:, None]
    sign = np.where(np.arange(1, J) % 2 == 0, 1.0, -1.0)[:, None]
    for k in range(1, K):
        kt = k * t
        S[0, k] = SQRT2 * (np.sinc(kt) @ weights)
        if J == 1:
            continue
        # sin(pi (kt +- j)) = (-1)^j sin(pi kt)
        numerator = sign * np.sin(math.pi * kt)
        plus = numerator / (math.pi * (kt + j))
        diff = kt - j
        near = np.abs(diff) < 0.5
        with np.errstate(divide="ignore", invalid="ignore"):
            minus = numerator / (math.pi * diff)
        minus[near] = np.sinc(diff[near])
        S[1:, k] = (plus + minus) @ weights
    return DisplayMatrix(S=S, d=d, L=rule.L)


@lru_cache(maxsize=8)
def display_matrix(d: int, J: int, K: int, L: int) -> DisplayMatrix:
    """Cached display matrix on the L-point Gauss-Legendre rule"""
    logger.debug("Assembling display matrix d=%d, J=%d, K=%d, L=%d", d, J, K, L)
    return assemble_display_matrix(d, J, K, gauss_legendre(L))


def _sample(F: RealFunction, t: np.ndarray) -> np.ndarray:
    values = np.asarray(F(t), dtype=float)
    if values.shape != t.shape:
        values = np.broadcast_to(values, t.shape)
    finite = np.isfinite(values)
    if not np.all(finite):
        bad = int(np.argmin(finite))
        raise InputDataError(f"Non-finite F sample at node {bad} (t={t[bad]:.6g})")
    return values


def _midpoint_dct(F: RealFunction, J: int, n: int) -> np.ndarray:
    t = (np.arange(n) + 0.5) / n
    y = dct(_sample(F, t), type=2, norm=None)[:J]
    b = y / (2 * n)
    b[1:] *= SQRT2
    return b


def cosine_analysis(F: RealFunction, J: int, oversample: int = 4,
                    method: str = "dct", extrapolate: bool = False) -> np.ndarray:
    """First J cosine coefficients b_k = int_0^1 F g_k of a function on [0, 1]

    Args:
        F: Vectorized callable on [0, 1]
        J: Number of coefficients
        oversample: Samples per coefficient for the midpoint DCT-II
        method: "dct" (midpoint DCT-II) or "quadrature" (Gauss-Legendre)
        extrapolate: Combine DCTs at n and 2n midpoints, cancelling the O(h^2) term

    Returns:
        Array of J coefficients
    """
    if J < 1:
        raise ArgumentError(f"J must be >= 1, got {J}")
    if oversample < 2:
        raise ArgumentError(f"oversample must be >= 2, got {oversample}")
    if method == "quadrature":
        rule = gauss_legendre(max(2048, 4 * J))
        values = _sample(F, rule.nodes)
        c = np.cos(math.pi * np.multiply.outer(np.arange(J), rule.nodes))
        b = c @ (rule.weights * values)
        b[1:] *= SQRT2
        return b
    if method != "dct":
        raise ArgumentError(f"Unknown cosine analysis method '{method}'")
    n = oversample * J
    b = _midpoint_dct(F, J, n)
    if extrapolate:
        b = (4.0 * _midpoint_dct(F, J, 2 * n) - b) / 3.0
    return b


def _chebyshev_coefficients(a: np.ndarray) -> np.ndarray:
    c = a * SQRT2
    c[0] = a[0]
    return c


def cosine_synthesis(a: Coefficients, t_points) -> np.ndarray:
    """Evaluate f_a(t) = a_0 + sqrt(2) sum_k a_k cos(pi k t)

    Clenshaw summation of sum_k c_k T_k(cos(pi t)), exact up to rounding.
    """
    coeffs = _coefficient_array(a)
    t = np.asarray(t_points, dtype=float)
    return chebyshev.chebval(np.cos(math.pi * t), _chebyshev_coefficients(coeffs))


def slice_moments(a: Coefficients, d: int, s_points, rule: QuadratureRule) -> Tuple[np.ndarray, np.ndarray]:
    """(S_d[f_a](s), S_d[f_a^2](s)) from one synthesis per quadrature point"""
    d = check_dimension(d)
    s = _unit_points(s_points)
    coeffs = _chebyshev_coefficients(_coefficient_array(a))
    weights = slice_weights(d, rule)
    first = np.empty(s.size)
    second = np.empty(s.size)
    for start in range(0, s.size, ROW_CHUNK):
        chunk = s[start:start + ROW_CHUNK]
        values = chebyshev.chebval(np.cos(math.pi * np.multiply.outer(chunk, rule.nodes)), coeffs)
        first[start:start + ROW_CHUNK] = values @ weights
        second[start:start + ROW_CHUNK] = (values * values) @ weights
    return first, second


def clamp_variance(variance: np.ndarray, scale: np.ndarray) -> np.ndarray:
    """Zero out negative rounding noise; anything larger is an error"""
    tolerance = VARIANCE_TOLERANCE * np.maximum(1.0, scale)
    if np.any(variance < -tolerance):
        bad = int(np.argmin(variance + tolerance))
        raise NumericalError(f"Negative variance {variance[bad]:.3e} at grid point {bad}")
    return np.maximum(variance, 0.0)


def variance_Vd(a: Coefficients, d: int, s_points, rule: QuadratureRule) -> np.ndarray:
    """V_d[f_a](s) = S_d[f_a^2](s) - S_d[f_a](s)^2"""
    first, second = slice_moments(a, d, s_points, rule)
    return clamp_variance(second - first * first, second)


def lp_operator_bound(d: int, p: float) -> float:
    """Bound c_d p / (p - 1) on the L^p operator norm of S_d, p > 1"""
    if not p > 1:
        raise ArgumentError(f"p must be > 1, got {p}")
    if math.isinf(p):
        return 1.0
    return normalization_c(d) * p / (p - 1)


def h1_operator_bound(d: int) -> float:
    """Bound (2 + c_d / 2)^(1/2) on the H^1 operator norm of S_d"""
    return math.sqrt(2.0 + normalization_c(d) / 2.0)
