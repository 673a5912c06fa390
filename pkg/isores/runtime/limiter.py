from __future__ import annotations

import asyncio
import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import TypeVar

from ..config.settings import get_settings

logger = logging.getLogger("isores")

T = TypeVar("T")


@dataclass
class WorkerLimiterOptions:
    max_workers: int | None = None


class WorkerLimiter:
    """Cap on concurrently running CPU tasks.

    ``acquire()`` blocks the caller while ``max_workers`` tasks hold a slot.
    The default cap comes from ``ISORES_THREADS``. Each task runs in a
    worker thread via :func:`asyncio.to_thread`; numpy and scipy release
    the GIL inside their kernels.
    """

    def __init__(self, options: WorkerLimiterOptions | None = None) -> None:
        opts = options or WorkerLimiterOptions()
        self._max_workers = opts.max_workers or get_settings().threads
        self._semaphore = asyncio.Semaphore(self._max_workers)
        self._active = 0

    @property
    def max_workers(self) -> int:
        return self._max_workers

    @property
    def current_usage(self) -> int:
        return self._active

    async def run(self, fn: Callable[[], T]) -> T:
        async with self._semaphore:
            self._active += 1
            try:
                return await asyncio.to_thread(fn)
            finally:
                self._active -= 1


async def gather_limited(fns: Sequence[Callable[[], T]], workers: int | None = None) -> list[T | BaseException]:
    """Run *fns* with at most *workers* in flight; results (or raised exceptions) in submission order."""
    limiter = WorkerLimiter(WorkerLimiterOptions(max_workers=workers))
    logger.debug("Running %d tasks on %d workers", len(fns), limiter.max_workers)
    results = await asyncio.gather(*(limiter.run(fn) for fn in fns), return_exceptions=True)
    return list(results)


def map_concurrently(fns: Sequence[Callable[[], T]], workers: int | None = None) -> list[T]:
    """Synchronous wrapper over :func:`gather_limited` that re-raises the first failure."""
    results = asyncio.run(gather_limited(fns, workers))
    for r in results:
        if isinstance(r, BaseException):
            raise r
    return [r for r in results if not isinstance(r, BaseException)]


def map_settled(fns: Sequence[Callable[[], T]], workers: int | None = None) -> list[T | BaseException]:
    """Like :func:`map_concurrently` but keeps per-task exceptions in place."""
    return asyncio.run(gather_limited(fns, workers))
