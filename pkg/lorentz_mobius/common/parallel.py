import logging
import os
from collections.abc import Callable, Iterable, Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from common.conf import setting

log = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def worker_count() -> int:
    raw = setting("LORENTZ_MOBIUS_THREADS", None)
    if raw in (None, ""):
        return os.cpu_count() or 1
    try:
        return max(1, int(raw))
    except (TypeError, ValueError):
        log.warning("Ignoring invalid LORENTZ_MOBIUS_THREADS=%r", raw)
        return os.cpu_count() or 1


def _chunks(items: Sequence[T], size: int) -> Iterator[Sequence[T]]:
    for index in range(0, len(items), size):
        yield items[index : index + size]


def parallel_map(
    fn: Callable[[T], R], items: Iterable[T], *, workers: int | None = None
) -> list[R]:
    """Ordered map over a thread pool; numpy kernels release the GIL."""
    items = list(items)
    workers = workers or worker_count()
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def row_chunks(n_rows: int, *, workers: int | None = None) -> list[range]:
    workers = workers or worker_count()
    size = max(1, -(-n_rows // workers))
    return [range(chunk[0], chunk[-1] + 1) for chunk in _chunks(range(n_rows), size)]
