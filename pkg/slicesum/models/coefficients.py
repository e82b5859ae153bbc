"""Cosine coefficient models and their on-disk format"""

from dataclasses import dataclass, replace
from datetime import datetime
from typing import List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ..errors import ArgumentError, NumericalError
from .config import Method, Norm
from .kernel import KernelSpec

FORMAT_VERSION = 1


class CoefficientMetadata(BaseModel):
    """How a coefficient vector was obtained"""
    method: Method
    tau: float = Field(default=0.0, ge=0)
    domain_norm: Norm = Norm.L2
    range_norm: Norm = Norm.L2
    kernel: Optional[KernelSpec] = Field(default=None, description="None for custom F")
    scale: float = Field(default=1.0, gt=0)
    L: Optional[int] = None
    J: Optional[int] = None


@dataclass(frozen=True, eq=False)
class CosineCoefficients:
    """f_a(t) = a_0 + sqrt(2) * sum_k a_k cos(pi k t) on [0, 1]"""
    a: np.ndarray
    d: int
    meta: CoefficientMetadata

    def __post_init__(self):
        a = np.array(self.a, dtype=float).ravel()
        if a.size < 1:
            raise ArgumentError("at least one coefficient is required")
        if not np.all(np.isfinite(a)):
            raise NumericalError(f"Non-finite coefficient at index {int(np.argmin(np.isfinite(a)))}")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @property
    def K(self) -> int:
        return self.a.size

    @property
    def scale(self) -> float:
        return self.meta.scale

    def l2_norm(self) -> float:
        return float(np.linalg.norm(self.a))

    def h1_norm(self) -> float:
        k = np.arange(self.K)
        return float(np.sqrt(np.sum((1.0 + (np.pi * k) ** 2) * self.a ** 2)))

    def with_scale(self, scale: float) -> "CosineCoefficients":
        return replace(self, meta=self.meta.model_copy(update={"scale": scale}))

    @classmethod
    def custom(cls, a, d: int, method: Method = Method.DIRECT) -> "CosineCoefficients":
        """Coefficients not tied to a fit, e.g. hand-built test vectors"""
        return cls(a=a, d=d, meta=CoefficientMetadata(method=method))


class CoefficientFile(BaseModel):
    """Versioned JSON document holding one coefficient vector"""
    format_version: int = Field(default=FORMAT_VERSION)
    d: int = Field(..., ge=3)
    K: int = Field(..., ge=1)
    method: Method
    tau: float = Field(default=0.0, ge=0)
    L: Optional[int] = None
    J: Optional[int] = None
    domain_norm: Norm = Norm.L2
    range_norm: Norm = Norm.L2
    kernel: Union[KernelSpec, Literal["custom"]] = "custom"
    scale: float = Field(default=1.0, gt=0)
    coefficients: List[float]
    created_at: datetime = Field(default_factory=datetime.now)

    class Config:
        json_schema_extra = {
            "example": {
                "format_version": 1,
                "d": 100,
                "K": 256,
                "method": "S-L2-H1",
                "tau": 1e-6,
                "L": 1024,
                "J": None,
                "kernel": {"name": "gauss", "c": 1.0},
                "scale": 1.0,
                "coefficients": [0.5, 0.1],
            }
        }

    @model_validator(mode="after")
    def _check_length(self) -> "CoefficientFile":
        if len(self.coefficients) != self.K:
            raise ValueError(f"K={self.K} but {len(self.coefficients)} coefficients given")
        if self.format_version != FORMAT_VERSION:
            raise ValueError(f"Unsupported format_version {self.format_version}")
        return self

    @classmethod
    def from_coefficients(cls, coeffs: CosineCoefficients) -> "CoefficientFile":
        meta = coeffs.meta
        return cls(
            d=coeffs.d,
            K=coeffs.K,
            method=meta.method,
            tau=meta.tau,
            L=meta.L,
            J=meta.J,
            domain_norm=meta.domain_norm,
            range_norm=meta.range_norm,
            kernel=meta.kernel if meta.kernel is not None else "custom",
            scale=meta.scale,
            coefficients=[float(x) for x in coeffs.a],
        )

    def to_coefficients(self) -> CosineCoefficients:
        meta = CoefficientMetadata(
            method=self.method,
            tau=self.tau,
            domain_norm=self.domain_norm,
            range_norm=self.range_norm,
            kernel=None if self.kernel == "custom" else self.kernel,
            scale=self.scale,
            L=self.L,
            J=self.J,
        )
        return CosineCoefficients(a=np.asarray(self.coefficients, dtype=float), d=self.d, meta=meta)
