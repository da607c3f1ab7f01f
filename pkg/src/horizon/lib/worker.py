from __future__ import annotations

import multiprocessing
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import TYPE_CHECKING, TypeVar

from horizon.lib import settings
from horizon.lib.log import get_logger

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable

__all__ = [
    "map_ordered",
    "resolve_jobs",
]

logger = get_logger()

T = TypeVar("T")
R = TypeVar("R")


def resolve_jobs(jobs: int | None = None) -> int:
    """Number of worker processes to use.

    Args:
        jobs: Explicit request, `None` or `0` for the configured default.

    Returns:
        A positive process count.
    """
    if not jobs:
        jobs = settings.worker.CONCURRENCY
    return max(1, jobs)


def _context() -> multiprocessing.context.BaseContext:
    if sys.platform == "darwin":  # pragma: no cover
        return multiprocessing.get_context("fork")
    return multiprocessing.get_context()


def map_ordered(fn: Callable[[T], R], items: Iterable[T], jobs: int | None = None) -> list[R]:
    """Apply `fn` to every item, results in input order.

    Grid points are independent, so they are farmed out to a process pool.
    With a single job everything runs inline in this process, which keeps
    memo caches warm and makes tracebacks readable.

    Args:
        fn: A picklable, module level callable.
        items: Work units.
        jobs: Process count, see `resolve_jobs()`.

    Returns:
        `[fn(item) for item in items]`
    """
    work = list(items)
    workers = min(resolve_jobs(jobs), max(len(work), 1))
    if workers == 1:
        return [fn(item) for item in work]
    logger.debug("Starting process pool", workers=workers, units=len(work))
    with ProcessPoolExecutor(max_workers=workers, mp_context=_context()) as pool:
        return list(pool.map(fn, work))
