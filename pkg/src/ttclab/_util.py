"""Small shared helpers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

__all__ = ["ordered_parallel_map", "resolve_threads"]


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        return os.cpu_count() or 1
    return max(1, int(threads))


def ordered_parallel_map(fn, items, threads: int | None = 1) -> list:
    """Map fn over items, preserving input order regardless of scheduling.

    The per-item work must be pure; with threads > 1 the heavy LAPACK calls
    run concurrently (they release the GIL) while results are still collected
    in index order, so output is deterministic.
    """
    items = list(items)
    workers = resolve_threads(threads)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
