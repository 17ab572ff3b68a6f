"""Deterministic bounded-pool mapping.

Work items are independent and results are combined in submission
order, so the output is identical for any worker count; threads only
help because the numpy kernels release the GIL.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "FINESCALE_THREADS"


def resolve_threads(threads: int | None) -> int:
    """None -> FINESCALE_THREADS env or 1; 0 -> all available cores."""
    if threads is None:
        threads = int(os.environ.get(ENV_THREADS, "1"))
    if threads == 0:
        return os.cpu_count() or 1
    if threads < 0:
        raise ValueError("threads must be >= 0")
    return threads


def parallel_map(fn, items, threads: int | None = 1) -> list:
    """list(map(fn, items)) preserving order, on a bounded pool."""
    n = resolve_threads(threads)
    items = list(items)
    if n <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
