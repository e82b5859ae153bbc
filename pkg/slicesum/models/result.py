"""Result models"""

from dataclasses import dataclass
from datetime import datetime
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field

from ..errors import NumericalError
from .config import Method
from .kernel import KernelSpec


@dataclass(frozen=True, eq=False)
class ErrorReport:
    """Forward error and variance of a coefficient vector on a grid"""
    grid: np.ndarray
    forward_abs: np.ndarray
    forward_max: float
    forward_l2: float
    variance: np.ndarray
    decomposition_residual: float

    def __post_init__(self):
        for name in ("grid", "forward_abs", "variance"):
            values = getattr(self, name)
            if not np.all(np.isfinite(values)):
                bad = int(np.argmin(np.isfinite(values)))
                raise NumericalError(f"Non-finite {name} at grid point {bad} (s={self.grid[bad]:.6g})")
        for name in ("forward_max", "forward_l2", "decomposition_residual"):
            if not np.isfinite(getattr(self, name)):
                raise NumericalError(f"Non-finite {name}")


@dataclass(frozen=True, eq=False)
class MseEstimate:
    """Monte Carlo mean square error per point with its standard error"""
    x_norms: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    P: int
    trials: int
    seed: int


class SumResult(BaseModel):
    """Outcome of a sliced summation run"""
    N: int
    M: int
    d: int
    P: int
    mode: str
    seed: int
    accelerated: bool
    scale: float
    fastsum_seconds: float
    brute_force_seconds: Optional[float] = None
    relative_error: Optional[float] = None


class ExperimentResult(BaseModel):
    """Averaged relative error of one (kernel, method) kernel-sum experiment"""
    kernel: KernelSpec
    method: Method
    d: int
    tau: Optional[float] = None
    P: int
    N: int
    M: int
    repetitions: int
    seed: int
    errors: List[float] = Field(default_factory=list)
    mean_error: float
    std_error: float
    forward_max: Optional[float] = None
    fit_seconds: float = 0.0
    sum_seconds: float = 0.0
    timestamp: datetime = Field(default_factory=datetime.now)


class TimingStats(BaseModel):
    """Timing statistics over repeated runs"""
    mean: float
    median: float
    min: float
    max: float
    p95: float


class BenchmarkPoint(BaseModel):
    """Timings for one problem size N = M"""
    N: int
    fastsum: TimingStats
    brute_force: TimingStats
    rss_mb: float


class BenchmarkResult(BaseModel):
    """Runtime benchmark of sliced versus brute-force summation"""
    d: int
    K: int
    P: int
    seed: int
    accelerated: bool
    workers: int
    points: List[BenchmarkPoint] = Field(default_factory=list)
    fastsum_growth: List[float] = Field(default_factory=list)
    brute_force_growth: List[float] = Field(default_factory=list)
    crossover_n: Optional[float] = None
    start_time: datetime = Field(default_factory=datetime.now)
