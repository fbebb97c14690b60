"""Deterministic tie-breaking and small parallel helpers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")

# values closer than this (relative to the largest magnitude) count as ties
TIE_RTOL = 1e-12
# argmax over computed objective values tolerates this much rounding noise
ARGMAX_RTOL = 1e-10

THREADS_ENV = "SSVD_THREADS"


def top_indices(values: np.ndarray, count: int, rtol: float = TIE_RTOL) -> np.ndarray:
    """Sorted indices of the `count` largest entries, ties to the smallest index.

    Entries within `rtol * max|values|` of each other are treated as equal so
    that rounding noise cannot reorder exact ties.
    """
    v = np.asarray(values, dtype=float).ravel()
    if count >= v.size:
        return np.arange(v.size)
    if count <= 0:
        return np.zeros(0, dtype=int)
    order = np.argsort(-v, kind="stable")
    scale = float(np.max(np.abs(v))) if v.size else 0.0
    tol = rtol * scale
    out: list[int] = []
    pos = 0
    while len(out) < count:
        anchor = v[order[pos]]
        end = pos
        while end < v.size and anchor - v[order[end]] <= tol:
            end += 1
        group = np.sort(order[pos:end])
        out.extend(int(i) for i in group[: count - len(out)])
        pos = end
    return np.sort(np.array(out, dtype=int))


def first_argmax(values: Sequence[float], rtol: float = ARGMAX_RTOL) -> int:
    """Index of the first value within `rtol` (relative) of the maximum."""
    v = np.asarray(values, dtype=float)
    best = float(v.max())
    tol = rtol * abs(best)
    return int(np.flatnonzero(v >= best - tol)[0])


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def pmap(fn: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> list[R]:
    """Order-preserving map; uses a thread pool when threads > 1."""
    items = list(items)
    n = default_threads() if threads is None else threads
    if n <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
