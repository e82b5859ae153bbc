"""Configuration models"""

from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional

import yaml
from pydantic import BaseModel, Field, model_validator

from .kernel import KernelSpec


class Norm(str, Enum):
    """Function-space norms used for domain and range"""
    L2 = "L2"
    H1 = "H1"


class Method(str, Enum):
    """Coefficient recovery methods"""
    S_L2_H1 = "S-L2-H1"
    F_L2_H1 = "F-L2-H1"
    F_H1_H1 = "F-H1-H1"
    S_L2_L2 = "S-L2-L2"
    F_L2_L2 = "F-L2-L2"
    F_H1_L2 = "F-H1-L2"
    DIRECT = "direct"
    ANALYTIC = "analytic"

    @classmethod
    def parse(cls, value: str) -> "Method":
        """Case-insensitive lookup ("s-l2-h1" -> S_L2_H1)"""
        for member in cls:
            if member.value.lower() == value.strip().lower():
                return member
        raise ValueError(f"Unknown method '{value}'")

    @property
    def is_fit(self) -> bool:
        return self in METHOD_NORMS

    @property
    def is_spatial(self) -> bool:
        return self in (Method.S_L2_H1, Method.S_L2_L2)

    @classmethod
    def for_norms(cls, spatial: bool, range_norm: "Norm", domain_norm: "Norm") -> "Method":
        """Fit method label of a (range, domain) norm pair"""
        key = (Norm(range_norm), Norm(domain_norm))
        for method, norms in METHOD_NORMS.items():
            if method.is_spatial == spatial and norms == key:
                return method
        raise ValueError(f"No fit method with range {key[0].value} and domain {key[1].value}")


class DirectionMode(str, Enum):
    """Direction sampling schemes"""
    IID = "iid"
    ORTHOGONAL = "orthogonal"


# Methods of the default comparison
FIT_METHODS = (Method.S_L2_H1, Method.F_L2_H1, Method.F_H1_H1)

DEFAULT_TAU: Dict[Method, float] = {
    Method.S_L2_H1: 1e-6,
    Method.F_L2_H1: 1e-7,
    Method.F_H1_H1: 1e-4,
    Method.S_L2_L2: 1e-6,
    Method.F_L2_L2: 1e-7,
    Method.F_H1_L2: 1e-4,
}

# (range_norm, domain_norm) per fit method
METHOD_NORMS: Dict[Method, tuple] = {
    Method.S_L2_H1: (Norm.L2, Norm.H1),
    Method.F_L2_H1: (Norm.L2, Norm.H1),
    Method.F_H1_H1: (Norm.H1, Norm.H1),
    Method.S_L2_L2: (Norm.L2, Norm.L2),
    Method.F_L2_L2: (Norm.L2, Norm.L2),
    Method.F_H1_L2: (Norm.H1, Norm.L2),
}


class FitConfig(BaseModel):
    """Discretization and regularization of a coefficient fit"""
    K: int = Field(default=256, ge=1, description="Domain cosine coefficients")
    J: int = Field(default=1024, ge=1, description="Range cosine coefficients")
    L: int = Field(default=1024, ge=1, le=65536, description="Quadrature nodes")
    tau: float = Field(default=1e-6, description="Tikhonov parameter")
    range_norm: Norm = Field(default=Norm.L2, description="Norm of the residual")
    domain_norm: Norm = Field(default=Norm.H1, description="Norm of the regularizer")
    oversample: int = Field(default=4, ge=2, description="Cosine analysis oversampling")
    extrapolate: bool = Field(default=True, description="Richardson-extrapolate cosine analysis")

    class Config:
        json_schema_extra = {
            "example": {
                "K": 256,
                "J": 1024,
                "L": 1024,
                "tau": 1e-6,
                "range_norm": "L2",
                "domain_norm": "H1",
            }
        }

    @classmethod
    def for_method(cls, method: Method, **overrides) -> "FitConfig":
        """Defaults of a fit method; `tau=None` selects the method's default"""
        if not method.is_fit:
            raise ValueError(f"Method '{method.value}' is not a fit method")
        range_norm, domain_norm = METHOD_NORMS[method]
        if overrides.get("tau") is None:
            overrides["tau"] = DEFAULT_TAU[method]
        return cls(range_norm=range_norm, domain_norm=domain_norm, **overrides)


class SumConfig(BaseModel):
    """Settings of a sliced kernel summation"""
    P: int = Field(default=100, ge=1, description="Number of slicing directions")
    mode: DirectionMode = Field(default=DirectionMode.ORTHOGONAL, description="Direction sampling")
    seed: int = Field(default=0, ge=0, description="Direction seed")
    accelerated: bool = Field(default=False, description="Use the gridded NFFT path")
    workers: Optional[int] = Field(default=None, ge=1, description="Worker threads")
    oracle: bool = Field(default=False, description="Also compute the brute-force sum")
    normalize_data: bool = Field(default=False, description="Divide by the data radius instead of the fitted scale")


class BenchConfig(BaseModel):
    """Runtime benchmark of sliced versus brute-force summation"""
    d: int = Field(default=50, ge=3)
    K: int = Field(default=256, ge=1)
    P: int = Field(default=50, ge=1)
    sizes: List[int] = Field(default_factory=lambda: [1000, 2000, 4000, 8000])
    repeats: int = Field(default=3, ge=1)
    seed: int = Field(default=0, ge=0)
    accelerated: bool = Field(default=True)
    workers: Optional[int] = Field(default=None, ge=1)
    kernel: KernelSpec = Field(default_factory=lambda: KernelSpec(name="gauss", c=1.0))


class ReportKind(str, Enum):
    """Report types"""
    METHOD_COMPARISON = "method_comparison"
    TAU_SWEEP = "tau_sweep"
    FORWARD_ERROR = "forward_error"
    BENCHMARK = "benchmark"


class ReportConfig(BaseModel):
    """Experiment description driving the report command"""
    name: str = Field(..., description="Report name")
    kind: ReportKind = Field(..., description="Report type")
    kernels: List[KernelSpec] = Field(default_factory=list, description="Kernel set")
    dim: int = Field(default=100, ge=3, description="Dimension")
    methods: List[Method] = Field(
        default_factory=lambda: [Method.S_L2_H1, Method.F_L2_H1, Method.F_H1_H1, Method.DIRECT]
    )
    taus: List[float] = Field(default_factory=list, description="Tau grid for sweeps")
    fit: FitConfig = Field(default_factory=FitConfig)
    P: Optional[int] = Field(default=None, ge=1, description="Directions (defaults to dim)")
    N: int = Field(default=2000, ge=1)
    M: int = Field(default=2000, ge=1)
    repetitions: int = Field(default=10, ge=1)
    seed: int = Field(default=0, ge=0)
    accelerated: bool = Field(default=False)
    bench: Optional[BenchConfig] = None
    output_dir: str = Field(default="reports")

    @model_validator(mode="after")
    def _check_kind(self) -> "ReportConfig":
        if self.kind == ReportKind.TAU_SWEEP and not self.taus:
            raise ValueError("tau_sweep report needs a non-empty 'taus' grid")
        if self.kind != ReportKind.BENCHMARK and not self.kernels:
            raise ValueError(f"{self.kind.value} report needs at least one kernel")
        return self

    @property
    def directions(self) -> int:
        return self.P if self.P is not None else self.dim

    @classmethod
    def from_yaml(cls, path: Path) -> "ReportConfig":
        """Load a report description from a YAML file"""
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Report config '{path}' not found")
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
        data.setdefault("name", path.stem)
        return cls.model_validate(data)
