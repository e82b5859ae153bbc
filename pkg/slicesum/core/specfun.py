"""Special-function primitives of the slicing operator

All Gamma-ratio constants are evaluated in log space so that dimensions up to
d = 10^4 neither overflow nor underflow.
"""

import math
from typing import Union

import numpy as np
from scipy.special import gammaln

from ..errors import DomainError
from .quadrature import gauss_legendre

ArrayLike = Union[float, np.ndarray]

LOG_SQRT_PI = 0.5 * math.log(math.pi)
SERIES_MAX_TERMS = 60
ETA_CHUNK = 4096


def check_dimension(d: int) -> int:
    """Validate an ambient dimension d >= 3"""
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)):
        raise DomainError(f"Dimension must be an integer, got {d!r}")
    if d < 3:
        raise DomainError(f"Dimension must be >= 3, got {d}")
    return int(d)


def _scalar_or_array(values: np.ndarray, like) -> ArrayLike:
    return float(values) if np.ndim(like) == 0 else values


def log_gamma(x: ArrayLike) -> ArrayLike:
    """ln Gamma(x) for x > 0"""
    arr = np.asarray(x, dtype=float)
    if not np.all(arr > 0):
        raise DomainError(f"log_gamma requires x > 0, got {np.min(arr)}")
    return _scalar_or_array(gammaln(arr), x)


def log_normalization_c(d: int) -> float:
    d = check_dimension(d)
    return math.log(2.0) + gammaln(d / 2) - LOG_SQRT_PI - gammaln((d - 1) / 2)


def normalization_c(d: int) -> float:
    """c_d = 2 Gamma(d/2) / (sqrt(pi) Gamma((d-1)/2))"""
    return float(math.exp(log_normalization_c(d)))


def density_rho(d: int, t: ArrayLike) -> ArrayLike:
    """Projection density rho_d(t) = c_d (1 - t^2)^((d-3)/2) on [0, 1]

    Args:
        d: Dimension (>= 3)
        t: Point(s) in [0, 1]

    Returns:
        Density values, exactly 0 at t = 1 for d > 3
    """
    d = check_dimension(d)
    arr = np.asarray(t, dtype=float)
    if np.any(~((arr >= 0) & (arr <= 1))):
        raise DomainError("density_rho requires t in [0, 1]")
    c = normalization_c(d)
    if d == 3:
        return _scalar_or_array(np.full(arr.shape, c), t)
    exponent = (d - 3) / 2
    with np.errstate(divide="ignore"):
        values = np.where(arr < 1, c * np.exp(exponent * np.log1p(-arr * arr)), 0.0)
    return _scalar_or_array(values, t)


def monomial_eigenvalue(d: int, k: ArrayLike) -> ArrayLike:
    """Eigenvalue lambda_{k,d} with S_d[t^k] = lambda_{k,d} s^k"""
    d = check_dimension(d)
    arr = np.asarray(k, dtype=float)
    if np.any(~(arr > -1)):
        raise DomainError("monomial_eigenvalue requires k > -1")
    log_value = gammaln(d / 2) + gammaln((arr + 1) / 2) - LOG_SQRT_PI - gammaln((arr + d) / 2)
    return _scalar_or_array(np.exp(log_value), k)


def eta_switch(d: int) -> float:
    """Argument above which eta is evaluated by quadrature"""
    return max(8.0, math.sqrt(d))


def _eta_series(d: int, s: np.ndarray) -> np.ndarray:
    # term_{k+1} = term_k * (-(s/2)^2) / ((k+1)(k+d/2))
    q = -(s / 2) ** 2
    term = np.ones_like(s)
    total = np.ones_like(s)
    for k in range(SERIES_MAX_TERMS):
        term = term * q / ((k + 1) * (k + d / 2))
        total += term
        if np.all(np.abs(term) < 1e-18):
            break
    return total


def _eta_quadrature(d: int, s: np.ndarray) -> np.ndarray:
    # t = sin(theta): integral of cos(s sin theta) cos^(d-2) theta over [0, pi/2]
    n_nodes = max(128, 1 << int(math.ceil(math.log2(1.5 * float(np.max(s)) + 32))))
    rule = gauss_legendre(n_nodes)
    theta = 0.5 * math.pi * rule.nodes
    weights = 0.5 * math.pi * rule.weights * np.exp(log_normalization_c(d) + (d - 2) * np.log(np.cos(theta)))
    sin_theta = np.sin(theta)
    out = np.empty_like(s)
    for start in range(0, s.size, ETA_CHUNK):
        chunk = s[start:start + ETA_CHUNK]
        out[start:start + ETA_CHUNK] = np.cos(np.multiply.outer(chunk, sin_theta)) @ weights
    return out


def eta(d: int, s: ArrayLike) -> ArrayLike:
    """Principal function eta_d(s) = S_d[cos](s), s >= 0

    Power series below `eta_switch(d)`, Gauss-Legendre quadrature above.
    """
    d = check_dimension(d)
    arr = np.asarray(s, dtype=float)
    if np.any(~(arr >= 0)):
        raise DomainError("eta requires s >= 0")
    flat = arr.ravel()
    out = np.empty_like(flat)
    small = flat <= eta_switch(d)
    if np.any(small):
        out[small] = _eta_series(d, flat[small])
    if np.any(~small):
        out[~small] = _eta_quadrature(d, flat[~small])
    return _scalar_or_array(out.reshape(arr.shape), s)


def sinc(x: ArrayLike) -> ArrayLike:
    """Normalized sinc, sin(pi x) / (pi x)"""
    return _scalar_or_array(np.sinc(np.asarray(x, dtype=float)), x)
