import multiprocessing as mp

import psutil

from ... import logger


def get_n_jobs(n_jobs=None):
    """
    Resolve the worker count.

    Parameters
    ----------
    n_jobs : int | None
        The requested number of workers. None uses all logical cores.

    Returns
    -------
    int : The number of workers, at least 1.
    """
    if n_jobs is None:
        n_jobs = psutil.cpu_count(logical=True) or mp.cpu_count()
    n_jobs = int(n_jobs)
    if n_jobs < 1:
        logger.error(f'The number of workers must be positive, got {n_jobs}.')
        raise ValueError
    return n_jobs


def run_jobs(func, jobs, n_jobs=None):
    """
    Apply func to every argument tuple, in a pool when more than one worker
    is requested.

    Results come back in the order of `jobs` whatever the scheduling, so any
    fold over them is deterministic.

    Parameters
    ----------
    func : callable
        A picklable top-level function.
    jobs : list of tuple
        The positional arguments of each call.
    n_jobs : int | None
        The number of workers. None uses all logical cores.

    Returns
    -------
    list : The results, one per job.
    """
    jobs = list(jobs)
    n_jobs = min(get_n_jobs(n_jobs), max(len(jobs), 1))

    if n_jobs == 1:
        return [func(*args) for args in jobs]

    logger.debug(f'Running {len(jobs)} jobs on {n_jobs} workers')
    pool = mp.Pool(n_jobs)
    results = []
    for args in jobs:
        results.append(pool.apply_async(func, args))
    pool.close()
    pool.join()

    return [r.get() for r in results]
