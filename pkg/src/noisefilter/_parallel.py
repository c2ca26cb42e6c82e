"""Thread-pool helpers shared by forest training and kNN prediction.

Work items are independent and seeded, and results are assembled in input
order, so outputs are bitwise identical for any worker count.
"""

import os
from concurrent.futures import ThreadPoolExecutor


def resolve_n_jobs(n_jobs: int | None) -> int:
    if n_jobs is None:
        return max(1, os.cpu_count() or 1)
    n_jobs = int(n_jobs)
    if n_jobs < 1:
        raise ValueError("n_jobs must be at least 1")
    return n_jobs


def ordered_map(fn, items, n_jobs: int | None) -> list:
    """Map `fn` over `items`, preserving order; threads when n_jobs > 1."""
    items = list(items)
    workers = min(resolve_n_jobs(n_jobs), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
