"""Kernel-sum experiment engine"""

import logging
import statistics
import time
from typing import Callable, List, Optional

import numpy as np

from ..errors import UnsupportedKernelError
from ..models.coefficients import CosineCoefficients
from ..models.config import DirectionMode, FitConfig, Method
from ..models.kernel import KernelSpec
from ..models.numerics import PointCloud
from ..models.result import ExperimentResult
from .fastsum import brute_force_sum, normalize_data, sample_directions, sliced_sum
from .kernels import kernel_function
from .metrics import default_grid, forward_error, relative_l2
from .recover import fit_kernel

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[str, int, int], None]


def gaussian_problem(d: int, N: int, M: int, seed: int, repetition: int) -> PointCloud:
    """Standard-Gaussian sources and targets with U[0, 1] weights, normalized

    The returned cloud carries scale 1: kernels are evaluated on the
    normalized points.
    """
    rng = np.random.default_rng([seed, repetition])
    X = rng.standard_normal((N, d))
    Y = rng.standard_normal((M, d))
    w = rng.uniform(0.0, 1.0, N)
    pc = normalize_data(X, Y, w)
    return PointCloud(X=pc.X, Y=pc.Y, w=pc.w, scale=1.0)


class ExperimentEngine:
    """Runs the averaged relative-error protocol for kernel sums"""

    def __init__(self, N: int = 2000, M: int = 2000, repetitions: int = 10, seed: int = 0,
                 accelerated: bool = False, workers: Optional[int] = None):
        self.N = N
        self.M = M
        self.repetitions = repetitions
        self.seed = seed
        self.accelerated = accelerated
        self.workers = workers
        self._problems: dict = {}

    def _problem(self, d: int, repetition: int) -> PointCloud:
        key = (d, repetition)
        if key not in self._problems:
            self._problems[key] = gaussian_problem(d, self.N, self.M, self.seed, repetition)
        return self._problems[key]

    def _reference(self, kernel: KernelSpec, pc: PointCloud, d: int, repetition: int) -> np.ndarray:
        key = ("reference", kernel, d, repetition)
        if key not in self._problems:
            self._problems[key] = brute_force_sum(pc, kernel_function(kernel))
        return self._problems[key]

    def evaluate(self, kernel: KernelSpec, coeffs: CosineCoefficients, P: int,
                 progress_callback: Optional[ProgressCallback] = None) -> List[float]:
        """Relative L2 errors of the sliced sum, one per repetition"""
        errors = []
        for rep in range(self.repetitions):
            if progress_callback:
                progress_callback(kernel.label, rep + 1, self.repetitions)
            pc = self._problem(coeffs.d, rep)
            reference = self._reference(kernel, pc, coeffs.d, rep)
            directions = sample_directions(coeffs.d, P, DirectionMode.ORTHOGONAL,
                                           seed=np.random.SeedSequence([self.seed, rep, 1]))
            estimate = sliced_sum(pc, coeffs, directions, accelerated=self.accelerated, workers=self.workers)
            errors.append(relative_l2(reference, estimate))
        return errors

    def run(self, kernel: KernelSpec, d: int, method: Method, P: Optional[int] = None,
            cfg: Optional[FitConfig] = None,
            progress_callback: Optional[ProgressCallback] = None) -> ExperimentResult:
        """
        Fit coefficients for one kernel and method, then measure the sliced sum

        Args:
            kernel: Catalog kernel
            d: Dimension
            method: Recovery method
            P: Number of orthogonal directions (defaults to d)
            cfg: Fit configuration; method defaults when omitted
            progress_callback: Optional callback (label, repetition, total)

        Returns:
            ExperimentResult with per-repetition errors
        """
        P = d if P is None else P
        start = time.perf_counter()
        coeffs = fit_kernel(kernel, d, method, cfg)
        fit_seconds = time.perf_counter() - start

        grid = default_grid(start=0.05) if not np.isfinite(kernel_function(kernel)(0.0)) else None
        report = forward_error(coeffs, kernel_function(kernel), grid=grid, with_variance=False)

        start = time.perf_counter()
        errors = self.evaluate(kernel, coeffs, P, progress_callback)
        sum_seconds = time.perf_counter() - start

        logger.info("%s %s d=%d: mean relative error %.3e", kernel.label, method.value, d,
                    statistics.mean(errors))
        return ExperimentResult(
            kernel=kernel,
            method=method,
            d=d,
            tau=coeffs.meta.tau if method.is_fit else None,
            P=P,
            N=self.N,
            M=self.M,
            repetitions=self.repetitions,
            seed=self.seed,
            errors=errors,
            mean_error=statistics.mean(errors),
            std_error=statistics.stdev(errors) if len(errors) > 1 else 0.0,
            forward_max=report.forward_max,
            fit_seconds=fit_seconds,
            sum_seconds=sum_seconds,
        )

    def compare_methods(self, kernels: List[KernelSpec], d: int, methods: List[Method],
                        P: Optional[int] = None, cfg: Optional[FitConfig] = None,
                        progress_callback: Optional[ProgressCallback] = None) -> List[ExperimentResult]:
        """One result per (kernel, method); direct is skipped without a known preimage"""
        results = []
        for kernel in kernels:
            for method in methods:
                if method == Method.DIRECT and not kernel.has_known_f:
                    logger.info("Skipping direct method for %s (no closed-form preimage)", kernel.label)
                    continue
                method_cfg = self.method_config(method, cfg)
                try:
                    results.append(self.run(kernel, d, method, P, method_cfg, progress_callback))
                except UnsupportedKernelError as exc:
                    logger.warning("Skipping %s %s: %s", kernel.label, method.value, exc)
        return results

    def tau_sweep(self, kernel: KernelSpec, d: int, method: Method, taus: List[float],
                  P: Optional[int] = None, cfg: Optional[FitConfig] = None,
                  progress_callback: Optional[ProgressCallback] = None) -> List[ExperimentResult]:
        """Relative error as a function of the regularization parameter"""
        results = []
        for tau in taus:
            method_cfg = self.method_config(method, cfg).model_copy(update={"tau": tau})
            results.append(self.run(kernel, d, method, P, method_cfg, progress_callback))
        return results

    @staticmethod
    def method_config(method: Method, cfg: Optional[FitConfig]) -> FitConfig:
        if not method.is_fit:
            return cfg if cfg is not None else FitConfig()
        base = {} if cfg is None else cfg.model_dump(exclude={"tau", "range_norm", "domain_norm"})
        return FitConfig.for_method(method, **base)
