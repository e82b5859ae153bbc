#!/usr/bin/env python3
"""Tests for directions, 1-D fast summation and the sliced sum"""

import math
import os
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from slicesum.core import fastsum
from slicesum.core.experiment_engine import ExperimentEngine
from slicesum.core.kernels import kernel_function
from slicesum.core.nfft import GaussianGridder
from slicesum.core.quadrature import gauss_legendre
from slicesum.core.recover import fit_kernel
from slicesum.core.sliceop import apply_Sd, cosine_synthesis, variance_Vd
from slicesum.errors import ArgumentError, InputDataError
from slicesum.models.coefficients import CosineCoefficients
from slicesum.models.config import FitConfig, Method
from slicesum.models.kernel import KernelSpec
from slicesum.models.numerics import PointCloud
from slicesum.utils.threads import THREADS_ENV, ordered_map, resolve_workers
from slicesum.utils.testing import run_module_tests


def _naive_1d(xp, yp, w, a):
    return np.array([np.sum(cosine_synthesis(a, np.abs(xp - y)) * w) for y in yp])


def test_fastsum_1d_matches_naive_sum():
    rng = np.random.default_rng(9)
    for _ in range(50):
        N, M, K = (int(v) for v in rng.integers(1, 200, size=3))
        xp = rng.uniform(-0.5, 0.5, N)
        yp = rng.uniform(-0.5, 0.5, M)
        w = rng.standard_normal(N)
        a = rng.standard_normal(K)
        naive = _naive_1d(xp, yp, w, a)
        fast = fastsum.fastsum_1d(xp, yp, w, a)
        assert np.linalg.norm(fast - naive) <= 1e-10 * max(np.linalg.norm(naive), 1e-300) + 1e-12


def test_fastsum_1d_accelerated():
    rng = np.random.default_rng(21)
    K = 256
    a = rng.standard_normal(K) / (1.0 + np.arange(K)) ** 2
    a[0] = 1.0
    xp = rng.uniform(-0.5, 0.5, 3000)
    yp = rng.uniform(-0.5, 0.5, 2000)
    w = rng.uniform(0.0, 1.0, xp.size)
    exact = fastsum.fastsum_1d(xp, yp, w, a)
    approx = fastsum.fastsum_1d(xp, yp, w, a, accelerated=True)
    assert np.linalg.norm(approx - exact) <= 1e-8 * np.linalg.norm(exact)


def test_fastsum_1d_edge_cases():
    w = np.array([0.5, 1.5, -1.0])
    out = fastsum.fastsum_1d([0.1, -0.2, 0.3], [0.0, 0.4], w, np.array([2.0]))
    assert np.array_equal(out, [2.0, 2.0])
    # |x - y| reaches 2 when projections sit at opposite ends
    out = fastsum.fastsum_1d([-1.0], [1.0], [1.0], np.array([0.0, 1.0]))
    assert abs(out[0] - math.sqrt(2) * math.cos(2 * math.pi)) < 1e-14
    for bad in (dict(xp=[1.5], yp=[0.0], w=[1.0]), dict(xp=[0.0, 0.1], yp=[0.0], w=[1.0])):
        try:
            fastsum.fastsum_1d(a=np.ones(3), **bad)
        except ArgumentError:
            continue
        raise AssertionError(f"accepted {bad}")


def test_gridder_adjoint_and_forward():
    rng = np.random.default_rng(31)
    n = 64
    nfft = GaussianGridder(n)
    theta = rng.uniform(-math.pi, math.pi, 500)
    w = rng.standard_normal(500)
    k = np.arange(n)
    direct = w @ np.exp(1j * np.multiply.outer(theta, k))
    assert np.max(np.abs(nfft.adjoint(theta, w) - direct)) <= 1e-9 * np.max(np.abs(direct))

    half = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    half[0] = half[0].real
    phi = rng.uniform(-math.pi, math.pi, 300)
    full = np.concatenate([np.conj(half[1:])[::-1], half])
    ks = np.arange(-(n - 1), n)
    expected = (np.exp(-1j * np.multiply.outer(phi, ks)) @ full).real
    assert np.max(np.abs(nfft.forward(phi, half) - expected)) <= 1e-9 * np.max(np.abs(expected))


def test_iid_directions():
    directions = fastsum.sample_directions(7, 50, "iid", seed=3)
    assert directions.xi.shape == (50, 7)
    assert np.allclose(np.linalg.norm(directions.xi, axis=1), 1.0, atol=1e-14)
    again = fastsum.sample_directions(7, 50, "iid", seed=3)
    assert np.array_equal(directions.xi, again.xi)
    other = fastsum.sample_directions(7, 50, "iid", seed=4)
    assert not np.array_equal(directions.xi, other.xi)


def test_orthogonal_directions():
    d, P = 6, 15
    directions = fastsum.sample_directions(d, P, "orthogonal", seed=12)
    xi = directions.xi
    assert xi.shape == (P, d)
    assert np.allclose(np.linalg.norm(xi, axis=1), 1.0, atol=1e-14)
    for start in range(0, P, d):
        block = xi[start:start + d]
        gram = block @ block.T
        assert np.max(np.abs(gram - np.eye(block.shape[0]))) < 1e-12
    assert directions.mode == "orthogonal"


def test_direction_preconditions():
    for args in ((2, 5), (5, 0)):
        try:
            fastsum.sample_directions(*args)
        except ArgumentError:
            continue
        raise AssertionError(f"accepted {args}")


def test_normalize_data():
    X = np.array([[3.0, 4.0], [0.0, 1.0]])
    Y = np.array([[0.0, 2.0]])
    pc = fastsum.normalize_data(X, Y, [1.0, 2.0])
    assert pc.scale == 7.0
    distances = np.linalg.norm(pc.X[:, None, :] - pc.Y[None, :, :], axis=2)
    assert np.max(distances) <= 1.0
    fixed = fastsum.normalize_data(X, Y, [1.0, 2.0], scale=10.0)
    assert fixed.scale == 10.0 and np.allclose(fixed.X, X / 10.0)
    try:
        fastsum.normalize_data(X, Y, [1.0, 2.0], scale=5.0)
    except ArgumentError:
        pass
    else:
        raise AssertionError("scale below the data radius accepted")
    try:
        fastsum.normalize_data(np.array([[np.nan, 0.0], [0.0, 1.0]]), Y, [1.0, 2.0])
    except InputDataError as exc:
        assert "row 0" in str(exc)
    else:
        raise AssertionError("NaN accepted")


def test_brute_force_sum():
    rng = np.random.default_rng(14)
    pc = PointCloud(X=rng.uniform(-0.3, 0.3, (40, 4)), Y=rng.uniform(-0.3, 0.3, (25, 4)), w=rng.standard_normal(40))
    F = kernel_function(KernelSpec(name="laplace", c=2.0))
    expected = np.array([sum(F(np.linalg.norm(x - y)) * wn for x, wn in zip(pc.X, pc.w)) for y in pc.Y])
    assert np.allclose(fastsum.brute_force_sum(pc, F, chunk=7), expected, rtol=1e-13, atol=1e-13)


def test_constant_kernel_sum():
    rng = np.random.default_rng(5)
    pc = fastsum.normalize_data(rng.standard_normal((30, 5)), rng.standard_normal((10, 5)), rng.standard_normal(30))
    a = CosineCoefficients.custom(np.array([3.0, 0.0, 0.0]), 5).with_scale(pc.scale)
    directions = fastsum.sample_directions(5, 8, seed=1)
    out = fastsum.sliced_sum(pc, a, directions, workers=1)
    assert np.allclose(out, 3.0 * pc.w.sum(), rtol=1e-13)


def test_sliced_sum_is_independent_of_worker_count():
    rng = np.random.default_rng(6)
    pc = fastsum.normalize_data(rng.standard_normal((200, 8)), rng.standard_normal((150, 8)), rng.uniform(size=200))
    a = CosineCoefficients.custom(rng.standard_normal(32) / (1 + np.arange(32)) ** 2, 8).with_scale(pc.scale)
    directions = fastsum.sample_directions(8, 37, "orthogonal", seed=2)
    single = fastsum.sliced_sum(pc, a, directions, workers=1)
    pooled = fastsum.sliced_sum(pc, a, directions, workers=4)
    assert np.array_equal(single, pooled)


def test_sliced_sum_approximates_gauss_kernel():
    rng = np.random.default_rng(10)
    d = 10
    pc = fastsum.normalize_data(rng.standard_normal((300, d)), rng.standard_normal((200, d)), rng.uniform(size=300))
    spec = KernelSpec(name="gauss", c=3.0)
    coeffs = fit_kernel(spec, d, Method.S_L2_H1, FitConfig(K=128, L=512), scale=pc.scale)
    directions = fastsum.sample_directions(d, 200, "orthogonal", seed=0)
    approx = fastsum.sliced_sum(pc, coeffs, directions, accelerated=True, workers=2)
    reference = fastsum.brute_force_sum(pc, kernel_function(spec, pc.scale))
    assert np.linalg.norm(approx - reference) / np.linalg.norm(reference) < 0.1


def test_sliced_sum_preconditions():
    rng = np.random.default_rng(1)
    pc = fastsum.normalize_data(rng.standard_normal((5, 4)), rng.standard_normal((5, 4)), np.ones(5))
    a = CosineCoefficients.custom(np.ones(4), 4).with_scale(pc.scale)
    for coeffs, directions in (
        (a, fastsum.sample_directions(5, 3)),
        (CosineCoefficients.custom(np.ones(4), 5).with_scale(pc.scale), fastsum.sample_directions(4, 3)),
        (a.with_scale(2 * pc.scale), fastsum.sample_directions(4, 3)),
    ):
        try:
            fastsum.sliced_sum(pc, coeffs, directions, workers=1)
        except ArgumentError:
            continue
        raise AssertionError("mismatched inputs accepted")


def test_iid_coordinate_means_vanish():
    d, P = 5, 100_000
    xi = fastsum.sample_directions(d, P, "iid", seed=21).xi
    # E[xi_i] = 0 and Var[xi_i] = 1/d
    assert np.all(np.abs(xi.mean(axis=0)) <= 4 / math.sqrt(P * d))
    assert np.all(np.abs((xi ** 2).mean(axis=0) - 1 / d) <= 4 * math.sqrt(2 / P) / d)


def test_direction_seed_is_recorded():
    assert fastsum.sample_directions(5, 7, "orthogonal", seed=3).seed == 3
    sequence = np.random.SeedSequence([0, 3, 1])
    directions = fastsum.sample_directions(5, 7, "orthogonal", seed=sequence)
    assert directions.seed == (0, 3, 1)
    again = fastsum.sample_directions(5, 7, "orthogonal", seed=np.random.SeedSequence([0, 3, 1]))
    assert np.array_equal(directions.xi, again.xi)
    assert fastsum.sample_directions(5, 7, "iid", seed=sequence.spawn(1)[0]).xi.shape == (7, 5)


def test_experiment_repetitions_draw_their_own_directions():
    imq = KernelSpec(name="imq", c=1.0)
    engine = ExperimentEngine(N=200, M=150, repetitions=3, seed=4)
    coeffs = fit_kernel(imq, 8, Method.S_L2_H1, FitConfig(K=64, L=256))
    errors = engine.evaluate(imq, coeffs, P=16)
    assert len(errors) == 3
    assert all(np.isfinite(e) and 0 < e < 0.5 for e in errors), errors
    assert len(set(errors)) == 3
    result = engine.run(imq, 8, Method.S_L2_H1, P=16, cfg=FitConfig(K=64, L=256))
    assert result.errors == errors
    assert result.std_error > 0


def test_brute_force_sum_is_symmetric_under_role_swap():
    rng = np.random.default_rng(23)
    d = 10
    pc = fastsum.normalize_data(rng.standard_normal((100, d)), rng.standard_normal((100, d)), np.ones(100))
    F = kernel_function(KernelSpec(name="gauss", c=1.0))
    for _ in range(5):
        w = rng.standard_normal(100)
        u = rng.standard_normal(100)
        forward = fastsum.brute_force_sum(PointCloud(X=pc.X, Y=pc.Y, w=w), F)
        swapped = fastsum.brute_force_sum(PointCloud(X=pc.Y, Y=pc.X, w=u), F)
        # u^T K w = w^T K^T u
        assert abs(u @ forward - w @ swapped) <= 1e-12 * (np.abs(u) @ np.abs(forward) + 1)
    first = np.zeros(100)
    first[0] = 1.0
    column = fastsum.brute_force_sum(PointCloud(X=pc.X, Y=pc.Y, w=first), F)
    row = np.array([fastsum.brute_force_sum(PointCloud(X=pc.Y, Y=pc.X[:1], w=e), F)[0] for e in np.eye(100)])
    assert np.allclose(column, row, rtol=1e-14, atol=0)


def test_sliced_sum_error_matches_slicing_variance():
    d, P, draws = 10, 20, 50
    rng = np.random.default_rng(31)
    rule = gauss_legendre(512)
    a = CosineCoefficients.custom(np.array([0.4, 0.5, -0.3, 0.2, 0.1, -0.05]), d)
    y = rng.standard_normal(d)
    y *= 0.7 / np.linalg.norm(y)
    pc = PointCloud(X=np.zeros((1, d)), Y=y[None, :], w=np.ones(1))
    F = lambda s: apply_Sd(a, d, np.ravel(s), rule).reshape(np.shape(s))
    reference = fastsum.brute_force_sum(pc, F)[0]
    squared = np.empty(draws)
    for draw in range(draws):
        directions = fastsum.sample_directions(d, P, "iid", seed=np.random.SeedSequence([31, draw]))
        squared[draw] = (fastsum.sliced_sum(pc, a, directions, workers=1)[0] - reference) ** 2
    predicted = variance_Vd(a, d, [0.7], rule)[0] / P
    stderr = squared.std(ddof=1) / math.sqrt(draws)
    assert abs(squared.mean() - predicted) <= 3 * stderr, (squared.mean(), predicted, stderr)


def test_worker_resolution():
    assert resolve_workers(3) == 3
    assert ordered_map(lambda x: x * x, range(10), workers=3) == [x * x for x in range(10)]
    previous = os.environ.get(THREADS_ENV)
    try:
        os.environ[THREADS_ENV] = "5"
        assert resolve_workers() == 5
        for bad in ("zero", "0"):
            os.environ[THREADS_ENV] = bad
            try:
                resolve_workers()
            except ArgumentError:
                continue
            raise AssertionError(f"accepted {THREADS_ENV}={bad}")
    finally:
        if previous is None:
            os.environ.pop(THREADS_ENV, None)
        else:
            os.environ[THREADS_ENV] = previous


if __name__ == "__main__":
    sys.exit(run_module_tests(globals(), "fastsum"))
