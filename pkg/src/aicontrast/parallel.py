"""Ordered parallel map for parameter sweeps."""
from concurrent.futures import ProcessPoolExecutor


def ordered_map(fn, items, workers=1):
    """``list(map(fn, items))``, optionally spread over worker processes.

    Results always come back in input order. ``fn`` must be picklable when
    ``workers > 1``.
    """
    items = list(items)
    if workers is None or workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
