"""
Bounded worker pool for parameter sweeps
"""
import os
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

WORKERS_ENV = "GRANIT_WORKERS"

logger = logging.getLogger(__name__)


def default_workers() -> int:
    """Worker count from GRANIT_WORKERS, else the CPU count"""
    value = os.environ.get(WORKERS_ENV)
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            logger.warning(f"Ignoring non-integer {WORKERS_ENV}={value!r}")
    return os.cpu_count() or 1


def run_cells(
    func: Callable[[T], R],
    cells: Sequence[T],
    workers: Optional[int] = None
) -> List[R]:
    """
    Evaluate independent sweep cells in parallel

    The integration kernels release the GIL, so a thread pool gives real
    parallelism without pickling. Results come back in input order whatever
    the schedule.

    Args:
        func: Pure function of one cell
        cells: Cell descriptions
        workers: Pool size (None -> default_workers())

    Returns:
        List of results aligned with cells
    """
    if workers is None:
        workers = default_workers()
    workers = max(1, min(workers, len(cells)))
    logger.debug(f"Running {len(cells)} cells on {workers} workers")

    if workers == 1:
        return [func(cell) for cell in cells]

    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, cells))
