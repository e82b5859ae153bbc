"""Coefficient file management"""

import logging
from pathlib import Path
from typing import List, Optional

import orjson
from pydantic import ValidationError

from ..errors import InputDataError
from ..models.coefficients import CoefficientFile, CosineCoefficients

logger = logging.getLogger(__name__)


class CoefficientStore:
    """Saves, loads and lists coefficient files below a root directory"""

    def __init__(self, root: str = "coefficients"):
        self.root = Path(root)

    def list_files(self) -> List[str]:
        """List stored coefficient files, relative to the root"""
        if not self.root.exists():
            return []
        return sorted(str(path.relative_to(self.root)) for path in self.root.rglob("*.json"))

    def resolve(self, name: str) -> Path:
        path = Path(name)
        if path.is_absolute() or path.exists():
            return path
        candidate = self.root / path
        return candidate if candidate.suffix else candidate.with_suffix(".json")

    def save(self, coeffs: CosineCoefficients, name: Optional[str] = None) -> Path:
        """Write coefficients as JSON; the name defaults to kernel, d and method"""
        if name is None:
            kernel = coeffs.meta.kernel
            label = f"{kernel.name.value}_c{kernel.c:g}" if kernel is not None else "custom"
            name = f"{label}_d{coeffs.d}_{coeffs.meta.method.value}.json"
        path = self.resolve(name)
        return save_coefficients(coeffs, path)

    def load(self, name: str) -> CosineCoefficients:
        return load_coefficients(self.resolve(name))


def save_coefficients(coeffs: CosineCoefficients, path: Path) -> Path:
    """Write a coefficient file; doubles are stored in shortest round-trip form"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = CoefficientFile.from_coefficients(coeffs)
    with open(path, "wb") as f:
        f.write(orjson.dumps(document.model_dump(mode="json"), option=orjson.OPT_INDENT_2))
    logger.info("Saved %d coefficients to %s", coeffs.K, path)
    return path


def load_coefficients(path: Path) -> CosineCoefficients:
    """Read and validate a coefficient file"""
    path = Path(path)
    if not path.exists():
        raise InputDataError(f"Coefficient file '{path}' not found")
    try:
        with open(path, "rb") as f:
            data = orjson.loads(f.read())
        document = CoefficientFile.model_validate(data)
    except orjson.JSONDecodeError as exc:
        raise InputDataError(f"{path}: invalid JSON ({exc})") from None
    except ValidationError as exc:
        raise InputDataError(f"{path}: invalid coefficient file ({exc.error_count()} errors)\n{exc}") from None
    return document.to_coefficients()
