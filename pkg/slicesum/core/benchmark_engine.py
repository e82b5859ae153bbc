"""Runtime benchmark of sliced versus brute-force summation"""

import logging
import statistics
import time
from typing import Callable, List, Optional

import numpy as np
import psutil

from ..models.coefficients import CosineCoefficients
from ..models.config import BenchConfig, DirectionMode
from ..models.result import BenchmarkPoint, BenchmarkResult, TimingStats
from ..utils.threads import resolve_workers
from .experiment_engine import gaussian_problem
from .fastsum import brute_force_sum, sample_directions, sliced_sum
from .kernels import kernel_function

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[int, int, int], None]


def timing_stats(samples: List[float]) -> TimingStats:
    """Mean, median, extremes and index-based p95 of wall times"""
    ordered = sorted(samples)
    p95_idx = int(len(ordered) * 0.95)
    return TimingStats(
        mean=statistics.mean(ordered),
        median=statistics.median(ordered),
        min=ordered[0],
        max=ordered[-1],
        p95=ordered[p95_idx] if p95_idx < len(ordered) else ordered[-1],
    )


def growth_ratios(values: List[float]) -> List[float]:
    return [later / earlier for earlier, later in zip(values, values[1:])]


def find_crossover(sizes: List[int], fast: List[float], brute: List[float]) -> Optional[float]:
    """Smallest N where the sliced sum beats brute force, interpolated in log-log

    Returns None if brute force is faster at every size; returns the first
    size if the sliced sum already wins there.
    """
    gaps = [np.log(f) - np.log(b) for f, b in zip(fast, brute)]
    if gaps[0] <= 0:
        return float(sizes[0])
    for i in range(1, len(sizes)):
        if gaps[i] <= 0:
            x0, x1 = np.log(sizes[i - 1]), np.log(sizes[i])
            fraction = gaps[i - 1] / (gaps[i - 1] - gaps[i])
            return float(np.exp(x0 + fraction * (x1 - x0)))
    return None


class BenchmarkEngine:
    """Times sliced_sum against brute_force_sum over growing N = M"""

    def __init__(self, config: BenchConfig):
        self.config = config
        self.workers = resolve_workers(config.workers)

    def _coefficients(self) -> CosineCoefficients:
        # timing does not depend on coefficient values
        rng = np.random.default_rng(self.config.seed)
        a = rng.standard_normal(self.config.K) / (1.0 + np.arange(self.config.K)) ** 2
        return CosineCoefficients.custom(a, self.config.d)

    def _time(self, func: Callable[[], np.ndarray]) -> List[float]:
        samples = []
        for _ in range(self.config.repeats):
            start = time.perf_counter()
            func()
            samples.append(time.perf_counter() - start)
        return samples

    def run(self, progress_callback: Optional[ProgressCallback] = None) -> BenchmarkResult:
        """
        Execute the benchmark

        Args:
            progress_callback: Optional callback (N, current, total)

        Returns:
            BenchmarkResult with timings, growth ratios and crossover
        """
        cfg = self.config
        coeffs = self._coefficients()
        directions = sample_directions(cfg.d, cfg.P, DirectionMode.ORTHOGONAL, seed=cfg.seed)
        F = kernel_function(cfg.kernel)
        process = psutil.Process()
        result = BenchmarkResult(
            d=cfg.d, K=cfg.K, P=cfg.P, seed=cfg.seed, accelerated=cfg.accelerated, workers=self.workers
        )

        for idx, n in enumerate(cfg.sizes, 1):
            if progress_callback:
                progress_callback(n, idx, len(cfg.sizes))
            pc = gaussian_problem(cfg.d, n, n, cfg.seed, 0)
            # warm-up fills the gridder and thread-pool caches
            sliced_sum(pc, coeffs, directions, accelerated=cfg.accelerated, workers=self.workers)
            fast = self._time(lambda: sliced_sum(pc, coeffs, directions,
                                                 accelerated=cfg.accelerated, workers=self.workers))
            brute = self._time(lambda: brute_force_sum(pc, F))
            rss_mb = process.memory_info().rss / (1024 * 1024)
            result.points.append(BenchmarkPoint(
                N=n,
                fastsum=timing_stats(fast),
                brute_force=timing_stats(brute),
                rss_mb=rss_mb,
            ))
            logger.info("N=%d: sliced %.3fs, brute force %.3fs", n,
                        result.points[-1].fastsum.median, result.points[-1].brute_force.median)

        fast_medians = [p.fastsum.median for p in result.points]
        brute_medians = [p.brute_force.median for p in result.points]
        result.fastsum_growth = growth_ratios(fast_medians)
        result.brute_force_growth = growth_ratios(brute_medians)
        result.crossover_n = find_crossover(cfg.sizes, fast_medians, brute_medians)
        return result
