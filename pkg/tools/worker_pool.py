"""
Worker Pool
Parallel per-record transforms with results delivered in input order
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import islice
from typing import Callable, Iterable, Iterator, TypeVar

from config import config
from tools.input_validator import InputValidator

logger = logging.getLogger("worker_pool")

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], jobs: int = None,
                chunk_size: int = 256) -> Iterator[R]:
    """Map ``fn`` over ``items`` on ``jobs`` threads, yielding in input order.

    Items are consumed in chunks so an unbounded stream never sits in memory.
    With one job everything runs on the calling thread.
    """
    jobs = InputValidator.validate_jobs(jobs if jobs is not None else config.JOBS)
    iterator = iter(items)
    if jobs == 1:
        for item in iterator:
            yield fn(item)
        return

    with ThreadPoolExecutor(max_workers=jobs, thread_name_prefix="polypivot") as executor:
        while True:
            chunk = list(islice(iterator, chunk_size))
            if not chunk:
                break
            # executor.map preserves order and re-raises the first failure
            yield from executor.map(fn, chunk)
