"""Catalog of radial kernels F and their closed-form slicing functions f

Kernels are defined on [0, inf) and are even in s; slicing functions are
evaluated for t >= 0 so that dilated targets F(scale * s) can be served.
"""

import logging
import math
from typing import Callable, Optional

import mpmath
import numpy as np
from numpy.polynomial import hermite_e
from scipy.special import digamma, eval_legendre, gammaln

from ..errors import DomainError, NumericalError, UnsupportedKernelError
from ..models.kernel import KernelName, KernelSpec
from .specfun import check_dimension

logger = logging.getLogger(__name__)

EULER_GAMMA = 0.5772156649015329
LAPLACE_MAX_DIMENSION = 200
MAX_LOST_DIGITS = 6.0
MAX_SERIES_TERMS = 5000
LOG_TINY = math.log(1e-18)

RealFunction = Callable[[np.ndarray], np.ndarray]


def eval_F(spec: KernelSpec, s) -> np.ndarray:
    """Kernel profile F(s)"""
    s = np.abs(np.asarray(s, dtype=float))
    c = spec.c
    name = spec.name
    if name == KernelName.GAUSS:
        return np.exp(-s * s / (2 * c * c))
    if name == KernelName.LAPLACE:
        return np.exp(-c * s)
    if name == KernelName.IMQ:
        return 1.0 / np.sqrt(c * c + s * s)
    if name == KernelName.MQ:
        return -np.sqrt(c * c + s * s)
    if name == KernelName.TPS:
        cs = c * s
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(cs > 0, cs * cs * np.log(cs), 0.0)
    if name == KernelName.LOG:
        with np.errstate(divide="ignore"):
            return np.log(c * s)
    if name == KernelName.BUMP:
        inside = s < c
        with np.errstate(divide="ignore", over="ignore"):
            gap = np.where(inside, c * c - s * s, 1.0)
            return np.where(inside, np.exp(-c * c / gap), 0.0)
    raise UnsupportedKernelError(f"Unknown kernel '{name}'")


def kernel_function(spec: KernelSpec, scale: float = 1.0) -> RealFunction:
    """Vectorized s -> F(scale * s)"""
    return lambda s: eval_F(spec, scale * np.asarray(s, dtype=float))


def tps_alpha(d: int) -> float:
    """alpha_d = (d/2)(H_{d/2} - 2 + log 4) with H_x = psi(x + 1) + gamma"""
    d = check_dimension(d)
    harmonic = digamma(d / 2 + 1) + EULER_GAMMA
    return 0.5 * d * (harmonic - 2.0 + math.log(4.0))


def log_beta(d: int) -> float:
    """beta_d = -int_0^1 log(r) rho_d(r) dr = (psi(d/2) - psi(1/2)) / 2"""
    d = check_dimension(d)
    return 0.5 * (digamma(d / 2) - digamma(0.5))


def _signed_log_series(log_coeff: Callable[[int], float], log_base: np.ndarray, alternating: bool):
    """sum_n (-1)^n exp(log_coeff(n) + n log_base) with Kahan summation

    Returns the sums and, per point, the number of decimal digits lost to
    cancellation.
    """
    total = np.zeros_like(log_base)
    carry = np.zeros_like(log_base)
    peak = np.full_like(log_base, -np.inf)
    previous = np.full_like(log_base, np.inf)
    for n in range(MAX_SERIES_TERMS):
        exponent = log_coeff(n) + (n * log_base if n > 0 else 0.0)
        with np.errstate(over="ignore", invalid="ignore"):
            term = np.exp(exponent)
            if alternating and n % 2 == 1:
                term = -term
            y = term - carry
            updated = total + y
            carry = (updated - total) - y
        total = updated
        peak = np.maximum(peak, exponent)
        magnitude = np.log(np.maximum(np.abs(total), 1e-300))
        settled = (exponent < LOG_TINY + magnitude) & (exponent <= previous)
        if n > 1 and np.all(settled | ~np.isfinite(total)):
            break
        previous = exponent
    else:
        raise NumericalError("Slicing-function series did not converge")
    finite = np.isfinite(total)
    with np.errstate(invalid="ignore"):
        lost = (peak - np.log(np.maximum(np.abs(total), 1e-300))) / math.log(10.0)
    # overflowed sums: digits needed to hold the largest term
    lost = np.where(finite, lost, peak / math.log(10.0) + 20.0)
    return total, lost


def _with_precision_fallback(values: np.ndarray, lost: np.ndarray, points: np.ndarray,
                             exact: Callable[[float, int], float]) -> np.ndarray:
    bad = np.flatnonzero((lost > MAX_LOST_DIGITS) | ~np.isfinite(values))
    if bad.size:
        logger.debug("Re-evaluating %d points in extended precision", bad.size)
        for i in bad:
            dps = int(30 + lost[i])
            values[i] = exact(float(points[i]), dps)
    return values


def _gauss_f(d: int, c: float, t: np.ndarray) -> np.ndarray:
    # 1F1(d/2; 1/2; -x), x = t^2 / (2 c^2)
    a, b = d / 2, 0.5
    x = (t / c) ** 2 / 2
    base_a, base_b = gammaln(a), gammaln(b)

    def log_coeff(n: int) -> float:
        return gammaln(a + n) - base_a - gammaln(b + n) + base_b - gammaln(n + 1)

    with np.errstate(divide="ignore"):
        log_x = np.log(x)
    values, lost = _signed_log_series(log_coeff, log_x, alternating=True)

    def exact(xi: float, dps: int) -> float:
        with mpmath.workdps(dps):
            return float(mpmath.hyp1f1(a, b, -xi))

    return _with_precision_fallback(values, lost, x, exact)


def _laplace_f(d: int, c: float, t: np.ndarray) -> np.ndarray:
    base = gammaln(d / 2)
    half_log_pi = 0.5 * math.log(math.pi)

    def log_coeff(n: int) -> float:
        return half_log_pi + gammaln((n + d) / 2) - gammaln(n + 1) - base - gammaln((n + 1) / 2)

    ct = c * t
    with np.errstate(divide="ignore"):
        log_ct = np.log(ct)
    values, lost = _signed_log_series(log_coeff, log_ct, alternating=True)

    def exact(u: float, dps: int) -> float:
        # even and odd parts as 1F2 series
        with mpmath.workdps(dps):
            z = mpmath.mpf(u) ** 2 / 4
            even = mpmath.hyp1f2(mpmath.mpf(d) / 2, 0.5, 0.5, z)
            factor = mpmath.sqrt(mpmath.pi) * mpmath.gamma(mpmath.mpf(d + 1) / 2) / mpmath.gamma(mpmath.mpf(d) / 2)
            odd = u * factor * mpmath.hyp1f2(mpmath.mpf(d + 1) / 2, 1.5, 1, z)
            return float(even - odd)

    return _with_precision_fallback(values, lost, ct, exact)


def eval_known_f(spec: KernelSpec, d: int, t) -> np.ndarray:
    """Closed-form slicing function f with S_d[f] = F

    Args:
        spec: Kernel with a known preimage (gauss, laplace, imq, tps, log)
        d: Dimension
        t: Points t >= 0 (t > 0 for log)

    Returns:
        f(t) as a float array
    """
    d = check_dimension(d)
    if not spec.has_known_f:
        raise UnsupportedKernelError(f"Kernel '{spec.name.value}' has no closed-form preimage")
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr >= 0)):
        raise DomainError("Slicing functions are evaluated at t >= 0")
    flat = arr.ravel()
    c = spec.c
    name = spec.name

    if name == KernelName.GAUSS:
        out = _gauss_f(d, c, flat)
    elif name == KernelName.LAPLACE:
        if d > LAPLACE_MAX_DIMENSION:
            raise UnsupportedKernelError(
                f"Laplace series is limited to d <= {LAPLACE_MAX_DIMENSION}, got d={d}"
            )
        out = _laplace_f(d, c, flat)
    elif name == KernelName.IMQ:
        out = np.exp((d - 1) * math.log(c) - 0.5 * d * np.log(c * c + flat * flat))
    elif name == KernelName.TPS:
        ct = c * flat
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(ct > 0, d * ct * ct * np.log(ct) + tps_alpha(d) * ct * ct, 0.0)
    else:
        if np.any(flat <= 0):
            raise DomainError("LOG slicing function is singular at t = 0")
        out = log_beta(d) + np.log(c * flat)
    return out.reshape(arr.shape)


def preimage_function(spec: KernelSpec, d: int, scale: float = 1.0) -> RealFunction:
    """Vectorized t -> f(scale * t), the preimage of F(scale * s)"""
    if not spec.has_known_f:
        raise UnsupportedKernelError(f"Kernel '{spec.name.value}' has no closed-form preimage")
    return lambda t: eval_known_f(spec, d, scale * np.asarray(t, dtype=float))


def closed_form_derivative(spec: KernelSpec, order: int, s) -> np.ndarray:
    """k-th derivative of F for gauss, imq and mq"""
    if order < 0:
        raise DomainError(f"Derivative order must be >= 0, got {order}")
    s = np.asarray(s, dtype=float)
    c = spec.c
    name = spec.name
    if name == KernelName.GAUSS:
        selector = np.zeros(order + 1)
        selector[order] = 1.0
        return (-1) ** order * c ** (-order) * hermite_e.hermeval(s / c, selector) * np.exp(-s * s / (2 * c * c))
    if name == KernelName.IMQ:
        r = np.sqrt(c * c + s * s)
        return (-1) ** order * math.factorial(order) * eval_legendre(order, s / r) / r ** (order + 1)
    if name == KernelName.MQ:
        if order == 0:
            return -np.sqrt(c * c + s * s)
        imq = spec.model_copy(update={"name": KernelName.IMQ})
        value = s * closed_form_derivative(imq, order - 1, s)
        if order >= 2:
            value = value + (order - 1) * closed_form_derivative(imq, order - 2, s)
        return -value
    raise UnsupportedKernelError(f"No closed-form derivatives for kernel '{name.value}'")


def derivative_function(spec: KernelSpec, scale: float = 1.0) -> Optional[Callable[[int, np.ndarray], np.ndarray]]:
    """(k, s) -> d^k/ds^k F(scale * s), or None without closed forms"""
    if spec.name not in (KernelName.GAUSS, KernelName.IMQ, KernelName.MQ):
        return None
    return lambda k, s: scale ** k * closed_form_derivative(spec, k, scale * np.asarray(s, dtype=float))
