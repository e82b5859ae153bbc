"""Sliced kernel summation and its brute-force reference"""

import logging
import math
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy.spatial.distance import cdist

from ..errors import ArgumentError, InputDataError
from ..models.coefficients import CosineCoefficients
from ..models.config import DirectionMode
from ..models.numerics import DirectionSet, PointCloud
from ..utils.threads import ordered_map, resolve_workers
from .nfft import gridder
from .specfun import check_dimension

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
PROJECTION_TOLERANCE = 1e-12
CHUNK = 1024

RealFunction = Callable[[np.ndarray], np.ndarray]
Seed = Union[int, np.random.SeedSequence]


def _as_seed_sequence(seed: Seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(int(seed))


def _haar_orthogonal(rng: np.random.Generator, d: int) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((d, d)))
    return Q * np.sign(np.diag(R))


def sample_directions(d: int, P: int, mode: Union[DirectionMode, str] = DirectionMode.IID,
                      seed: Seed = 0) -> DirectionSet:
    """P unit directions on the sphere in R^d

    iid mode normalizes standard Gaussian vectors; orthogonal mode stacks the
    rows of independent Haar-distributed orthogonal matrices, d rows at a time.
    """
    d = check_dimension(d)
    if P < 1:
        raise ArgumentError(f"P must be >= 1, got {P}")
    mode = DirectionMode(mode)
    sequence = _as_seed_sequence(seed)
    rng = np.random.default_rng(sequence)
    if mode == DirectionMode.IID:
        xi = rng.standard_normal((P, d))
        xi /= np.linalg.norm(xi, axis=1, keepdims=True)
    else:
        blocks = []
        remaining = P
        while remaining > 0:
            block = _haar_orthogonal(rng, d)
            blocks.append(block[:min(d, remaining)])
            remaining -= d
        xi = np.vstack(blocks)
    return DirectionSet(xi=xi, mode=mode.value, seed=_seed_record(sequence))


def _seed_record(sequence: np.random.SeedSequence) -> Union[int, Tuple[int, ...]]:
    entropy = sequence.entropy
    if entropy is None:
        return 0
    if isinstance(entropy, (int, np.integer)):
        return int(entropy)
    return tuple(int(e) for e in entropy)


def _check_finite(values: np.ndarray, name: str) -> None:
    finite = np.isfinite(values)
    if not np.all(finite):
        bad = int(np.argmin(finite.reshape(finite.shape[0], -1).all(axis=1)))
        raise InputDataError(f"Non-finite value in {name} row {bad}")


def normalize_data(X, Y, w, scale: Optional[float] = None) -> PointCloud:
    """Divide X and Y by max||X_n|| + max||Y_m|| so all distances are <= 1

    Args:
        X: Sources, N x d
        Y: Targets, M x d
        w: Source weights, N
        scale: Fixed scale; must not be smaller than the minimal one

    Returns:
        Normalized point cloud carrying the applied scale
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    w = np.asarray(w, dtype=float).ravel()
    if X.shape[0] < 1 or Y.shape[0] < 1:
        raise ArgumentError("Need at least one source and one target")
    _check_finite(X, "X")
    _check_finite(Y, "Y")
    _check_finite(w[:, None], "w")
    minimal = float(np.max(np.linalg.norm(X, axis=1)) + np.max(np.linalg.norm(Y, axis=1)))
    if scale is None:
        scale = minimal if minimal > 0 else 1.0
    elif scale < minimal * (1 - 1e-12):
        raise ArgumentError(f"scale {scale:.6g} is smaller than the data radius {minimal:.6g}")
    return PointCloud(X=X / scale, Y=Y / scale, w=w, scale=float(scale))


def _coefficient_array(a: Union[CosineCoefficients, np.ndarray]) -> np.ndarray:
    if isinstance(a, CosineCoefficients):
        return a.a
    return np.asarray(a, dtype=float).ravel()


def _check_projections(values: np.ndarray, name: str) -> np.ndarray:
    if values.size and np.max(np.abs(values)) > 1 + PROJECTION_TOLERANCE:
        raise ArgumentError(f"Projections {name} must lie in [-1, 1]; normalize the data first")
    return values


def _exponential_moments(xp: np.ndarray, w: np.ndarray, K: int) -> np.ndarray:
    k = np.arange(K)
    w_hat = np.zeros(K, dtype=complex)
    for start in range(0, xp.size, CHUNK):
        phase = np.exp(1j * math.pi * np.multiply.outer(xp[start:start + CHUNK], k))
        w_hat += w[start:start + CHUNK] @ phase
    return w_hat


def fastsum_1d(xp, yp, w, a: Union[CosineCoefficients, np.ndarray], accelerated: bool = False) -> np.ndarray:
    """t_m = sum_n f_a(|x_n - y_m|) w_n for projected points in [-1, 1]

    Args:
        xp: Projected sources
        yp: Projected targets
        w: Source weights
        a: Cosine coefficients of f
        accelerated: Use Gaussian-gridded NFFTs instead of direct sums

    Returns:
        Kernel sums at the targets
    """
    xp = _check_projections(np.asarray(xp, dtype=float).ravel(), "xp")
    yp = _check_projections(np.asarray(yp, dtype=float).ravel(), "yp")
    w = np.asarray(w, dtype=float).ravel()
    if w.size != xp.size:
        raise ArgumentError(f"{xp.size} projections but {w.size} weights")
    coeffs = _coefficient_array(a)
    K = coeffs.size
    if K == 1:
        return np.full(yp.size, coeffs[0] * w.sum())

    # c_0 = a_0, c_{+-k} = a_k / sqrt(2)
    exponential = coeffs / SQRT2
    exponential[0] = coeffs[0]
    if accelerated:
        nfft = gridder(K)
        w_hat = nfft.adjoint(math.pi * xp, w)
        return nfft.forward(math.pi * yp, exponential * w_hat)

    w_hat = _exponential_moments(xp, w, K)
    weighted = exponential * w_hat
    weighted[1:] *= 2.0
    k = np.arange(K)
    out = np.empty(yp.size)
    for start in range(0, yp.size, CHUNK):
        phase = np.exp(-1j * math.pi * np.multiply.outer(yp[start:start + CHUNK], k))
        out[start:start + CHUNK] = (phase @ weighted).real
    return out


def sliced_sum(pc: PointCloud, a: CosineCoefficients, directions: DirectionSet,
               accelerated: bool = False, workers: Optional[int] = None) -> np.ndarray:
    """s_m ~ (1/P) sum_p fastsum_1d(<X, xi_p>, <Y, xi_p>)

    Slices run on a thread pool; per-slice sums are added in slice order so
    the result does not depend on the worker count.
    """
    if directions.d != pc.d:
        raise ArgumentError(f"Directions live in R^{directions.d}, data in R^{pc.d}")
    if isinstance(a, CosineCoefficients):
        if a.d != pc.d:
            raise ArgumentError(f"Coefficients were fitted for d={a.d}, data has d={pc.d}")
        if not math.isclose(a.scale, pc.scale, rel_tol=1e-12):
            raise ArgumentError(f"Coefficient scale {a.scale:.17g} differs from data scale {pc.scale:.17g}")
    xi = directions.xi
    x_proj = pc.X @ xi.T
    y_proj = pc.Y @ xi.T

    def one_slice(p: int) -> np.ndarray:
        return fastsum_1d(x_proj[:, p], y_proj[:, p], pc.w, a, accelerated=accelerated)

    n_workers = resolve_workers(workers)
    logger.debug("Sliced sum N=%d M=%d P=%d with %d workers", pc.N, pc.M, directions.P, n_workers)
    partial = ordered_map(one_slice, range(directions.P), workers=n_workers)
    total = np.zeros(pc.M)
    for values in partial:
        total += values
    return total / directions.P


def brute_force_sum(pc: PointCloud, F: RealFunction, chunk: int = CHUNK) -> np.ndarray:
    """s_m = sum_n F(||X_n - Y_m||) w_n evaluated directly"""
    out = np.empty(pc.M)
    for start in range(0, pc.M, chunk):
        distances = cdist(pc.Y[start:start + chunk], pc.X)
        out[start:start + chunk] = np.asarray(F(distances), dtype=float) @ pc.w
    return out
