import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable
from typing import List
from typing import Optional
from typing import TypeVar

from compas_fpp.exceptions import ParameterError

LOG = logging.getLogger(__name__)

WORKERS_ENV = "COMPAS_FPP_WORKERS"

T = TypeVar("T")


def default_workers() -> int:
    """Number of worker threads, read from ``COMPAS_FPP_WORKERS`` (default 1)."""
    value = os.environ.get(WORKERS_ENV, "").strip()
    if not value:
        return 1
    try:
        workers = int(value)
    except ValueError:
        raise ParameterError("{} must be a positive integer: {!r}".format(WORKERS_ENV, value))
    if workers < 1:
        raise ParameterError("{} must be a positive integer: {!r}".format(WORKERS_ENV, value))
    return workers


def map_replicas(func: Callable[[int], T], count: int, workers: Optional[int] = None) -> List[T]:
    """Evaluate ``func(index)`` for ``index`` in ``range(count)``.

    Results come back in index order whatever the number of workers,
    so merging them is never scheduler dependent.
    """
    if workers is None:
        workers = default_workers()
    if workers <= 1 or count <= 1:
        return [func(index) for index in range(count)]
    LOG.debug("fanning out %d jobs over %d workers", count, workers)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, range(count)))
