"""Header-less CSV input/output for point sets, weights and sums"""

import csv
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ..errors import InputDataError


def read_matrix(path: Path, columns: Optional[int] = None) -> np.ndarray:
    """Read one point per row; every row must hold `columns` finite values"""
    path = Path(path)
    if not path.exists():
        raise InputDataError(f"Data file '{path}' not found")
    rows = []
    with open(path, "r", newline="", encoding="utf-8") as f:
        for line_no, row in enumerate(csv.reader(f), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                values = [float(cell) for cell in row]
            except ValueError:
                raise InputDataError(f"{path.name} line {line_no}: not a number") from None
            if not np.all(np.isfinite(values)):
                raise InputDataError(f"{path.name} line {line_no}: non-finite value")
            if columns is None:
                columns = len(values)
            elif len(values) != columns:
                raise InputDataError(
                    f"{path.name} line {line_no}: expected {columns} values, got {len(values)}"
                )
            rows.append(values)
    if not rows:
        raise InputDataError(f"{path.name}: no data rows")
    return np.asarray(rows, dtype=float)


def read_vector(path: Path) -> np.ndarray:
    """Read one value per row"""
    return read_matrix(path, columns=1)[:, 0]


def write_matrix(path: Path, values: np.ndarray, header: Optional[Sequence[str]] = None) -> Path:
    """Write rows with 17 significant digits"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        if header:
            writer.writerow(header)
        for row in values:
            writer.writerow([f"{x:.17g}" for x in row])
    return path
