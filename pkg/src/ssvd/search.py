"""Greedy construction and swap-based local search for SSVD and SPCA."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ._util import first_argmax, pmap
from .errors import ValidationError
from .linalg import kyfan
from .model import Selection, SolveReport, SpcaInstance, SsvdInstance, check_selection, make_report, submatrix


@dataclass(frozen=True)
class LocalSearchConfig:
    delta: float = 1e-6
    max_sweeps: int = 1000

    def __post_init__(self):
        # delta = 0 gives plain strict improvement without the termination bound
        if not self.delta >= 0:
            raise ValidationError(f"delta must be nonnegative, got {self.delta}")
        if self.max_sweeps < 1:
            raise ValidationError(f"max_sweeps must be positive, got {self.max_sweeps}")


def _kf(A, rows, cols, k):
    return kyfan(submatrix(A, rows, cols), k)


def greedy_ssvd(inst: SsvdInstance, threads: int | None = None) -> SolveReport:
    """Grow rows and columns one at a time from the largest entry."""
    t0 = time.perf_counter()
    A, s1, s2, k = inst.A, inst.s1, inst.s2, inst.k
    m, n = A.shape
    flat = int(first_argmax(np.abs(A).ravel(), rtol=0.0))
    S1, S2 = [flat // n], [flat % n]
    trace = [_kf(A, S1, S2, k)]

    def add_row(rank):
        cand = [i for i in range(m) if i not in S1]
        vals = pmap(lambda i: _kf(A, S1 + [i], S2, rank), cand, threads)
        S1.append(cand[first_argmax(vals)])

    def add_col(rank):
        cand = [j for j in range(n) if j not in S2]
        vals = pmap(lambda j: _kf(A, S1, S2 + [j], rank), cand, threads)
        S2.append(cand[first_argmax(vals)])

    for ell in range(2, max(s1, s2) + 1):
        if ell <= min(s1, s2):
            add_row(min(ell, k))
            add_col(min(ell, k))
        elif s1 <= s2:
            add_col(k)
        else:
            add_row(k)
        trace.append(_kf(A, S1, S2, k))
    sel = Selection(S1, S2)
    return make_report(inst, "greedy", sel, t0, iterations=len(trace), trace=trace)


def _swap_scan(current, universe, value_of, cur_val, delta):
    """One first-improvement pass of swaps (i, j) with i in current, j outside.

    Returns (new set, new value, accepted values).
    """
    current = list(current)
    accepted = []
    for i in sorted(current):
        if i not in current:
            continue
        outside = [j for j in range(universe) if j not in current]
        for j in outside:
            trial = [j if x == i else x for x in current]
            val = value_of(trial)
            if val > (1.0 + delta) * cur_val:
                current, cur_val = trial, val
                accepted.append(val)
                break
    return current, cur_val, accepted


def local_search_ssvd(
    inst: SsvdInstance,
    cfg: LocalSearchConfig | None = None,
    warm: Selection | None = None,
) -> SolveReport:
    """Row swaps then column swaps until a full sweep accepts nothing."""
    t0 = time.perf_counter()
    cfg = cfg or LocalSearchConfig()
    A, k = inst.A, inst.k
    m, n = A.shape
    if warm is None:
        warm = greedy_ssvd(inst).selection
    check_selection(inst, warm)
    S1, S2 = list(warm.rows), list(warm.cols)
    cur = _kf(A, S1, S2, k)
    trace = [cur]
    swaps = 0
    status = "sweep_limit"
    for _ in range(cfg.max_sweeps):
        S1, cur, acc1 = _swap_scan(S1, m, lambda R: _kf(A, R, S2, k), cur, cfg.delta)
        S2, cur, acc2 = _swap_scan(S2, n, lambda C: _kf(A, S1, C, k), cur, cfg.delta)
        trace.extend(acc1 + acc2)
        swaps += len(acc1) + len(acc2)
        if not acc1 and not acc2:
            status = "ok"
            break
    sel = Selection(S1, S2)
    return make_report(inst, "local-search", sel, t0, iterations=swaps, trace=trace, status=status)


def greedy_spca(inst: SpcaInstance, threads: int | None = None) -> SolveReport:
    """Grow a principal index set from empty, one index per step."""
    t0 = time.perf_counter()
    A, s, k = inst.A, inst.s, inst.k
    n = inst.n
    S: list[int] = []
    trace = []
    for ell in range(1, s + 1):
        cand = [i for i in range(n) if i not in S]
        rank = min(ell, k)
        vals = pmap(lambda i: _kf(A, S + [i], S + [i], rank), cand, threads)
        S.append(cand[first_argmax(vals)])
        trace.append(_kf(A, S, S, k))
    sel = Selection.principal(S)
    return make_report(inst, "spca-greedy", sel, t0, iterations=s, trace=trace)


def local_search_spca(
    inst: SpcaInstance,
    cfg: LocalSearchConfig | None = None,
    warm: Selection | None = None,
) -> SolveReport:
    """Single-set swap search started from the greedy solution."""
    t0 = time.perf_counter()
    cfg = cfg or LocalSearchConfig()
    A, k = inst.A, inst.k
    if warm is None:
        warm = greedy_spca(inst).selection
    check_selection(inst, warm)
    S = list(warm.rows)
    cur = _kf(A, S, S, k)
    trace = [cur]
    swaps = 0
    status = "sweep_limit"
    for _ in range(cfg.max_sweeps):
        S, cur, acc = _swap_scan(S, inst.n, lambda T: _kf(A, T, T, k), cur, cfg.delta)
        trace.extend(acc)
        swaps += len(acc)
        if not acc:
            status = "ok"
            break
    sel = Selection.principal(S)
    return make_report(inst, "spca-local-search", sel, t0, iterations=swaps, trace=trace, status=status)
