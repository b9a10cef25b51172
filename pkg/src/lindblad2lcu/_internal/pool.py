"""Deterministic fan-out of sweep points to worker processes."""

from __future__ import annotations

import logging
from multiprocessing import Pool
from typing import Callable
from typing import TYPE_CHECKING
from typing import TypeVar

import numpy as np

if TYPE_CHECKING:
    from typing import Sequence

_LOG = logging.getLogger(__name__)

_T = TypeVar("_T")
_R = TypeVar("_R")


class Error(Exception):
    """The top-level class for errors produced by this module."""


class InvalidJobsError(Error, ValueError):
    """A worker count below 1 was requested."""


def run_map(func: Callable[[_T], _R], items: Sequence[_T], *, jobs: int) -> list[_R]:
    """[func(x) for x in items], on up to jobs worker processes.

    Results are returned in the order of items regardless of which worker
    finishes first. func and items must be picklable when jobs > 1.

    Raises:
        InvalidJobsError: If jobs < 1.
    """
    if jobs < 1:
        msg = f"need at least one job, got {jobs}"
        raise InvalidJobsError(msg)
    processes = min(jobs, len(items))
    if processes <= 1:
        return [func(item) for item in items]
    _LOG.debug("mapping %d points over %d processes", len(items), processes)
    with Pool(processes=processes) as pool:
        return pool.map(func, items)


def spawn_seeds(seed: int, count: int) -> list[np.random.SeedSequence]:
    """Independent child seeds, one per sweep point.

    A point's stream depends only on the root seed and its index, so reports
    do not depend on the number of jobs.
    """
    return np.random.SeedSequence(seed).spawn(count)


def rng_for(seed: np.random.SeedSequence) -> np.random.Generator:
    return np.random.default_rng(seed)
