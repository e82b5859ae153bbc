"""Kernel models"""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class KernelName(str, Enum):
    """Radial basis functions of the kernel catalog"""
    GAUSS = "gauss"
    LAPLACE = "laplace"
    IMQ = "imq"
    MQ = "mq"
    TPS = "tps"
    LOG = "log"
    BUMP = "bump"


KNOWN_PREIMAGE = frozenset({
    KernelName.GAUSS,
    KernelName.LAPLACE,
    KernelName.IMQ,
    KernelName.TPS,
    KernelName.LOG,
})


class KernelSpec(BaseModel):
    """A named radial kernel F with its shape parameter"""
    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={"example": {"name": "gauss", "c": 1.0}},
    )

    name: KernelName = Field(..., description="Kernel name")
    c: float = Field(default=1.0, gt=0, description="Shape parameter")

    @property
    def has_known_f(self) -> bool:
        """Whether the catalog holds a closed-form slicing function"""
        return self.name in KNOWN_PREIMAGE

    @property
    def label(self) -> str:
        return f"{self.name.value}(c={self.c:g})"
