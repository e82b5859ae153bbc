"""Immutable numerical containers passed between the core modules"""

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from ..errors import ArgumentError


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss-Legendre nodes and weights on [0, 1]"""
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "nodes", _frozen(self.nodes))
        object.__setattr__(self, "weights", _frozen(self.weights))
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ArgumentError("nodes and weights must be 1D arrays of equal length")

    @property
    def L(self) -> int:
        return self.nodes.size

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


@dataclass(frozen=True, eq=False)
class DisplayMatrix:
    """Matrix of the slicing operator in the cosine basis, S[j, k] = <g_j, S_d[g_k]>"""
    S: np.ndarray
    d: int
    L: int

    def __post_init__(self):
        object.__setattr__(self, "S", _frozen(self.S))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.S.shape


@dataclass(frozen=True, eq=False)
class DirectionSet:
    """P unit directions in R^d"""
    xi: np.ndarray
    mode: str
    seed: Union[int, Tuple[int, ...]]

    def __post_init__(self):
        object.__setattr__(self, "xi", _frozen(self.xi))

    @property
    def P(self) -> int:
        return self.xi.shape[0]

    @property
    def d(self) -> int:
        return self.xi.shape[1]


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Sources X with weights w and targets Y, divided by `scale`"""
    X: np.ndarray
    Y: np.ndarray
    w: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        for name in ("X", "Y", "w"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        if self.X.ndim != 2 or self.Y.ndim != 2 or self.X.shape[1] != self.Y.shape[1]:
            raise ArgumentError(
                f"X and Y must be 2D with equal column counts, got {self.X.shape} and {self.Y.shape}"
            )
        if self.w.shape != (self.X.shape[0],):
            raise ArgumentError(f"Expected {self.X.shape[0]} weights, got {self.w.size}")
        if not self.scale > 0:
            raise ArgumentError(f"scale must be positive, got {self.scale}")

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def N(self) -> int:
        return self.X.shape[0]

    @property
    def M(self) -> int:
        return self.Y.shape[0]


@dataclass(frozen=True, eq=False)
class RidgeProblem:
    """min_a ||A a - b||^2 + tau^2 ||D a||^2 with diagonal D"""
    A: np.ndarray
    b: np.ndarray
    tau: float
    D: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.asarray(self.b, dtype=float).ravel()
        D = np.asarray(self.D, dtype=float).ravel()
        if A.shape[0] != b.size:
            raise ArgumentError(f"A has {A.shape[0]} rows but b has {b.size} entries")
        if D.size != A.shape[1]:
            raise ArgumentError(f"D has {D.size} entries but A has {A.shape[1]} columns")
        if not self.tau >= 0:
            raise ArgumentError(f"tau must be non-negative, got {self.tau}")
        if np.any(D < 1):
            raise ArgumentError("regularizer diagonal entries must be >= 1")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "D", D)

    @property
    def K(self) -> int:
        return self.A.shape[1]

    def objective(self, a: np.ndarray) -> float:
        r = self.A @ a - self.b
        return float(r @ r + self.tau ** 2 * np.sum((self.D * a) ** 2))


@dataclass(frozen=True, eq=False)
class RidgeSolution:
    a: np.ndarray
    degenerate: bool = False
    rank: Optional[int] = None
    normal_residual: float = 0.0


@dataclass(frozen=True)
class RecursionTable:
    """Integer table a[m][k], 0 <= k <= m <= n, of the odd-dimension inverse"""
    d: int
    rows: Tuple[Tuple[int, ...], ...] = field(repr=False)

    @property
    def n(self) -> int:
        return (self.d - 1) // 2

    def __getitem__(self, index: Tuple[int, int]) -> int:
        m, k = index
        if not 0 <= k <= m:
            return 0
        return self.rows[m][k]

    def row_sum(self, m: int) -> int:
        return sum(self.rows[m])
