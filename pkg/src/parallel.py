"""
Worker-pool helpers shared by the sampling estimators and the oracle.
"""

import logging
from multiprocessing import Pool
from typing import Callable, List, Sequence, Tuple, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def chunk_ranges(total: int, parts: int) -> List[Tuple[int, int]]:
    """Split [0, total) into at most ``parts`` contiguous, nearly equal half-open ranges."""
    if total <= 0:
        return []
    parts = max(1, min(parts, total))
    size, extra = divmod(total, parts)
    ranges = []
    start = 0
    for i in range(parts):
        stop = start + size + (1 if i < extra else 0)
        ranges.append((start, stop))
        start = stop
    return ranges


def map_chunks(worker: Callable[[T], R], tasks: Sequence[T], workers: int) -> List[R]:
    """
    Apply ``worker`` to every task, in a process pool when workers > 1.

    Results come back in task order either way.
    """
    if workers <= 1 or len(tasks) <= 1:
        return [worker(task) for task in tasks]
    logger.debug(f"Dispatching {len(tasks)} tasks to {workers} worker processes")
    with Pool(processes=min(workers, len(tasks))) as pool:
        return pool.map(worker, tasks)
