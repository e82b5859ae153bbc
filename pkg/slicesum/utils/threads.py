"""Worker-count resolution and ordered parallel map"""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

import psutil

from ..errors import ArgumentError

THREADS_ENV = "SLICESUM_THREADS"

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(workers: Optional[int] = None) -> int:
    """Explicit value, else $SLICESUM_THREADS, else physical CPU count"""
    if workers is not None:
        if workers < 1:
            raise ArgumentError(f"workers must be >= 1, got {workers}")
        return int(workers)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ArgumentError(f"{THREADS_ENV}='{env}' is not an integer") from None
        if value < 1:
            raise ArgumentError(f"{THREADS_ENV} must be >= 1, got {value}")
        return value
    return psutil.cpu_count(logical=False) or 1


def ordered_map(func: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """Apply `func` to every item; results come back in input order"""
    items = list(items)
    n_workers = min(resolve_workers(workers), max(len(items), 1))
    if n_workers == 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(func, items))
