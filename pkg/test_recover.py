#!/usr/bin/env python3
"""Tests for coefficient recovery: fits, odd-dimension inverse and catalog routes"""

import math
import sys
from pathlib import Path

import numpy as np
from numpy.polynomial import Polynomial

sys.path.insert(0, str(Path(__file__).parent))

from slicesum.core import recover
from slicesum.core.kernels import kernel_function
from slicesum.core.metrics import default_grid, forward_error
from slicesum.core.quadrature import gauss_legendre
from slicesum.core.ridge import solve_ridge
from slicesum.core.sliceop import apply_Sd, basis_images
from slicesum.core.specfun import monomial_eigenvalue
from slicesum.errors import ArgumentError, UnsupportedKernelError
from slicesum.models.config import FitConfig, Method, Norm
from slicesum.models.kernel import KernelSpec
from slicesum.utils.testing import run_module_tests

GAUSS = KernelSpec(name="gauss", c=1.0)


def _image_of(a_star: np.ndarray, d: int, L: int = 1024):
    """F = S_d[f_{a*}] on the same rule the fits use"""
    rule = gauss_legendre(L)
    return lambda s: a_star @ basis_images(d, a_star.size, np.ravel(s), rule)


def test_constant_profile_gives_first_unit_vector():
    one = lambda t: np.ones_like(t)
    for method in (Method.S_L2_H1, Method.F_L2_H1, Method.F_H1_H1):
        cfg = FitConfig.for_method(method, K=32, J=128, L=256, tau=1e-6)
        fit = recover.fit_spatial if method == Method.S_L2_H1 else recover.fit_frequency
        a = fit(one, 20, cfg).a
        expected = np.zeros(32)
        expected[0] = 1.0
        assert np.linalg.norm(a - expected) < 1e-8, method


def test_self_consistency_d10():
    rng = np.random.default_rng(10)
    a_star = rng.standard_normal(16)
    F = _image_of(a_star, 10)
    padded = np.concatenate([a_star, np.zeros(256 - 16)])
    spatial = recover.fit_spatial(F, 10, FitConfig(tau=1e-10))
    assert np.linalg.norm(spatial.a - padded) <= 1e-4
    frequency = recover.fit_frequency(F, 10, FitConfig(tau=1e-10))
    assert np.linalg.norm(frequency.a - padded) <= 1e-4
    assert frequency.meta.method == Method.F_L2_H1
    assert frequency.meta.J == 1024


def test_self_consistency_d100():
    """At d = 100 the low images are nearly collinear (singular values near 1e-10),
    so tau = 1e-10 may shrink a* along those directions. The fit must still be
    no worse than a* for its own objective, keep ||D a|| <= ||D a*|| and match
    the image."""
    rng = np.random.default_rng(100)
    a_star = rng.standard_normal(16)
    padded = np.concatenate([a_star, np.zeros(256 - 16)])
    F = _image_of(a_star, 100)
    cfg = FitConfig(tau=1e-10)
    grid = default_grid(257)
    problems = {
        "spatial": (recover.fit_spatial, recover.spatial_problem(F, 100, cfg.K, cfg.L, cfg.tau, cfg.domain_norm)),
        "frequency": (recover.fit_frequency, recover.frequency_problem(F, 100, cfg)),
    }
    for name, (fit, problem) in problems.items():
        fitted = fit(F, 100, cfg)
        a = fitted.a
        bound = problem.objective(padded)
        assert problem.objective(a) <= bound * (1 + 1e-6) + 1e-24, name
        assert np.linalg.norm(problem.D * a) <= math.sqrt(bound) / cfg.tau * (1 + 1e-6), name
        report = forward_error(fitted, F, grid=grid, rule2L=gauss_legendre(1024), with_variance=False)
        assert report.forward_max < 1e-6, (name, report.forward_max)


def test_fit_preconditions():
    one = lambda t: np.ones_like(t)
    for cfg in (FitConfig(tau=0.0), FitConfig(tau=-1.0)):
        try:
            recover.fit_spatial(one, 5, cfg)
        except ArgumentError:
            continue
        raise AssertionError("non-positive tau accepted")
    try:
        recover.fit_spatial(one, 5, FitConfig(range_norm=Norm.H1))
    except ArgumentError:
        pass
    else:
        raise AssertionError("spatial fit must reject an H1 range")


def test_recursion_table():
    table = recover.recursion_table(3)
    assert (table[1, 0], table[1, 1]) == (1, 1)
    table = recover.recursion_table(5)
    assert [table[2, k] for k in range(3)] == [3, 5, 1]
    assert table[1, 0] == 3
    big = recover.recursion_table(61)
    assert all(isinstance(x, int) and x > 0 for row in big.rows for x in row)
    try:
        recover.recursion_table(6)
    except ArgumentError:
        pass
    else:
        raise AssertionError("even d accepted")


def test_inverse_norm_bound():
    assert abs(recover.inverse_norm_bound(3) - math.sqrt(2)) < 1e-15
    # d = 5: prefactor 1/3, row sum 9
    assert abs(recover.inverse_norm_bound(5) - math.sqrt(3)) < 1e-14


def test_constant_inverts_to_constant():
    t = np.linspace(0.0, 1.0, 11)
    for d in (3, 5, 7, 9, 11):
        exact = lambda k, s: np.ones_like(s) if k == 0 else np.zeros_like(s)
        f = recover.analytic_inverse_odd(lambda s: np.ones_like(s), d, t, derivatives=exact)
        assert np.max(np.abs(f - 1.0)) < 1e-12, d


def test_small_dimension_examples():
    t = np.linspace(0.0, 1.0, 9)
    square = lambda s: s * s
    assert np.max(np.abs(recover.analytic_inverse_odd(square, 3, t) - 3 * t * t)) < 1e-8
    assert np.max(np.abs(recover.analytic_inverse_odd(square, 5, t) - 5 * t * t)) < 1e-6


def test_inverse_undoes_slicing_on_polynomials():
    rng = np.random.default_rng(8)
    t = np.linspace(0.0, 1.0, 21)
    for d in (3, 5, 7):
        for degree in range(9):
            p = Polynomial(rng.standard_normal(degree + 1))
            # S_d[t^k] = lambda_k s^k
            image = Polynomial(p.coef * monomial_eigenvalue(d, np.arange(degree + 1)))
            exact = lambda k, s, image=image: image.deriv(k)(s) if k else image(s)
            f = recover.analytic_inverse_odd(image, d, t, derivatives=exact)
            assert np.max(np.abs(f - p(t))) < 1e-8, (d, degree)

            differenced = recover.analytic_inverse_odd(image, d, t)
            tolerance = {3: 1e-8, 5: 1e-6, 7: 1e-4}[d]
            assert np.max(np.abs(differenced - p(t))) < tolerance, (d, degree)


def test_finite_differences_need_small_dimension():
    try:
        recover.analytic_inverse_odd(np.cos, 13, [0.5])
    except ArgumentError:
        pass
    else:
        raise AssertionError("finite differences above d = 11 accepted")


def test_power_series_inversion():
    assert np.allclose(recover.invert_power_series([1.0, 0.0, 1.0], 5), [1.0, 0.0, 5.0], rtol=1e-13)
    b = np.array([0.5, -1.0, 2.0, 0.25])
    f = recover.invert_power_series(b, 9)
    s = np.linspace(0.0, 1.0, 5)
    image = apply_Sd(lambda t: Polynomial(f)(t), 9, s, gauss_legendre(16))
    assert np.max(np.abs(image - Polynomial(b)(s))) < 1e-13


def test_direct_coefficients_imq():
    imq = KernelSpec(name="imq", c=1.0)
    F = kernel_function(imq)
    coarse = recover.direct_coefficients(imq, 5, 256)
    fine = recover.direct_coefficients(imq, 5, 512)
    rule = gauss_legendre(2048)
    err_coarse = forward_error(coarse, F, rule2L=rule, with_variance=False).forward_max
    err_fine = forward_error(fine, F, rule2L=rule, with_variance=False).forward_max
    assert err_coarse < 1e-4
    assert err_fine < err_coarse
    assert coarse.meta.method == Method.DIRECT


def test_direct_requires_known_preimage():
    for name in ("mq", "bump"):
        try:
            recover.direct_coefficients(KernelSpec(name=name, c=1.0), 10, 64)
        except UnsupportedKernelError as exc:
            assert "closed-form preimage" in str(exc)
            continue
        raise AssertionError(f"{name} has no direct coefficients")


def test_laplace_direct_falls_back_above_series_limit():
    laplace = KernelSpec(name="laplace", c=1.0)
    coeffs = recover.direct_coefficients(laplace, 300, 64)
    assert coeffs.meta.method == Method.S_L2_H1


def test_analytic_coefficients_gauss():
    coeffs = recover.fit_kernel(GAUSS, 7, Method.ANALYTIC, FitConfig(K=256))
    report = forward_error(coeffs, kernel_function(GAUSS), rule2L=gauss_legendre(2048), with_variance=False)
    assert report.forward_max < 1e-4
    assert coeffs.meta.method == Method.ANALYTIC


def test_fit_kernel_dispatch_and_metadata():
    cfg = FitConfig.for_method(Method.F_H1_H1, K=64, J=256, L=256)
    coeffs = recover.fit_kernel(GAUSS, 10, Method.F_H1_H1, cfg, scale=2.0)
    assert coeffs.meta.method == Method.F_H1_H1
    assert coeffs.meta.tau == 1e-4
    assert coeffs.meta.range_norm == Norm.H1
    assert coeffs.meta.kernel == GAUSS
    assert coeffs.scale == 2.0
    report = forward_error(coeffs, kernel_function(GAUSS, 2.0), with_variance=False)
    assert report.forward_max < 1e-2


def test_fit_labels_follow_both_norms():
    F = kernel_function(GAUSS)
    small = dict(K=32, J=128, L=256, tau=1e-6)
    cases = [
        (recover.fit_spatial, Norm.L2, Norm.H1, Method.S_L2_H1),
        (recover.fit_spatial, Norm.L2, Norm.L2, Method.S_L2_L2),
        (recover.fit_frequency, Norm.L2, Norm.H1, Method.F_L2_H1),
        (recover.fit_frequency, Norm.L2, Norm.L2, Method.F_L2_L2),
        (recover.fit_frequency, Norm.H1, Norm.H1, Method.F_H1_H1),
        (recover.fit_frequency, Norm.H1, Norm.L2, Method.F_H1_L2),
    ]
    for fit, range_norm, domain_norm, expected in cases:
        coeffs = fit(F, 10, FitConfig(range_norm=range_norm, domain_norm=domain_norm, **small))
        assert coeffs.meta.method == expected, (range_norm, domain_norm, coeffs.meta.method)
        assert coeffs.meta.domain_norm == domain_norm
    variant = recover.fit_kernel(GAUSS, 10, Method.F_L2_L2, FitConfig.for_method(Method.F_L2_L2, K=32, J=128, L=256))
    assert variant.meta.method == Method.F_L2_L2
    assert variant.meta.tau == 1e-7
    assert Method.parse("s-l2-l2").is_spatial and Method.S_L2_L2.is_fit


def test_fitted_forward_error_decreases_with_K():
    F = kernel_function(GAUSS)
    errors = []
    for K in (8, 16, 32, 64):
        coeffs = recover.fit_spatial(F, 10, FitConfig(K=K, tau=1e-12))
        errors.append(forward_error(coeffs, F, with_variance=False).forward_l2)
    assert all(later <= earlier + 1e-10 for earlier, later in zip(errors, errors[1:])), errors


def test_least_squares_is_not_truncation():
    """F = S_d[g_K] with K = floor(d / (2 pi)): the best K-term fit is not zero"""
    d = 100
    K = int(d // (2 * math.pi))
    assert K == 15
    rule = gauss_legendre(1024)
    F = lambda s: basis_images(d, K + 1, s, rule)[K]
    problem = recover.spatial_problem(F, d, K, 1024, 0.0, Norm.L2)
    a_hat = solve_ridge(problem).a
    assert np.linalg.norm(a_hat) > 1e-6


if __name__ == "__main__":
    sys.exit(run_module_tests(globals(), "recover"))
