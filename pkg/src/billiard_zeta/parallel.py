"""Deterministic process-pool map."""
from concurrent.futures import ProcessPoolExecutor
import os


def resolve_jobs(jobs=None):
    env = os.environ.get("BILLIARD_ZETA_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    if jobs is None:
        return 1
    return max(1, int(jobs))


def pmap(fn, items, jobs=None, chunksize=8):
    """``list(map(fn, items))`` with results in input order."""
    items = list(items)
    n = resolve_jobs(jobs)
    if n == 1 or len(items) < 2 * n:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items, chunksize=chunksize))
