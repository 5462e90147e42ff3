"""Thread-pool helper honouring ``MI_ELLIPSE_THREADS``."""
import os
from concurrent.futures import ThreadPoolExecutor


def worker_count():
    raw = os.environ.get("MI_ELLIPSE_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


def parallel_map(func, items):
    """Ordered map; results come back in input order so reductions stay deterministic."""
    items = list(items)
    n = min(worker_count(), len(items))
    if n <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, items))
