"""Exact solvers: enumeration oracles, the Frobenius-mass subproblem, branch-and-cut."""

from __future__ import annotations

import heapq
import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from ._util import top_indices
from .errors import CapExceededError, ValidationError
from .linalg import augment, kyfan, kyfan_psd
from .model import Selection, SolveReport, SpcaInstance, SsvdInstance, make_report

ENUM_CAP = 2_000_000
_BATCH = 4096


@dataclass(frozen=True)
class BnBConfig:
    time_limit: float | None = None
    node_cap: int | None = None
    warm_start: bool = True
    opt_rtol: float = 1e-8
    cut_tol: float = 1e-9


# ------------------------------------------------------------ enumeration


def _combos(n: int, r: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(n), r)), dtype=int).reshape(-1, r)


def _batched_kyfan(stack: np.ndarray, k: int) -> np.ndarray:
    sv = np.linalg.svd(stack, compute_uv=False)
    top = sv[:, :1]
    sv = np.where(sv < 1e-12 * top, 0.0, sv)
    return sv[:, :k].sum(axis=1)


def brute_force_ssvd(inst: SsvdInstance, cap: int = ENUM_CAP) -> SolveReport:
    """Enumerate every (s1, s2)-sized pair; ties keep the lexicographically first."""
    t0 = time.perf_counter()
    A, s1, s2, k = inst.A, inst.s1, inst.s2, inst.k
    m, n = A.shape
    total = math.comb(m, s1) * math.comb(n, s2)
    if total > cap:
        raise CapExceededError(f"{total} subset pairs exceed the enumeration cap {cap}")
    cols = _combos(n, s2)
    best, best_sel = -1.0, None
    for R in itertools.combinations(range(m), s1):
        sub = A[list(R), :]
        for lo in range(0, len(cols), _BATCH):
            C = cols[lo : lo + _BATCH]
            vals = _batched_kyfan(sub[:, C].transpose(1, 0, 2), k)
            i = int(np.argmax(vals))
            if vals[i] > best + 1e-12 * max(1.0, best):
                best, best_sel = float(vals[i]), Selection(R, C[i])
    return make_report(inst, "brute-force", best_sel, t0, iterations=total,
                       upper_bound=None, status="optimal")


def brute_force_spca(inst: SpcaInstance, cap: int = ENUM_CAP) -> SolveReport:
    t0 = time.perf_counter()
    A, s, k = inst.A, inst.s, inst.k
    total = math.comb(inst.n, s)
    if total > cap:
        raise CapExceededError(f"{total} subsets exceed the enumeration cap {cap}")
    best, best_sel = -1.0, None
    for lo_combo in _chunks(itertools.combinations(range(inst.n), s), _BATCH):
        C = np.array(lo_combo, dtype=int)
        stack = A[C[:, :, None], C[:, None, :]]
        w = np.linalg.eigvalsh(stack)[:, ::-1]
        vals = np.maximum(w, 0.0)[:, :k].sum(axis=1)
        i = int(np.argmax(vals))
        if vals[i] > best + 1e-12 * max(1.0, best):
            best, best_sel = float(vals[i]), Selection.principal(C[i])
    return make_report(inst, "spca-brute-force", best_sel, t0, iterations=total, status="optimal")


def _chunks(it, size):
    while True:
        chunk = list(itertools.islice(it, size))
        if not chunk:
            return
        yield chunk


# ------------------------------------------------------- Frobenius subproblem


@dataclass(frozen=True)
class FrobeniusResult:
    selection: Selection
    value: float
    optimal: bool
    nodes: int


def _top_sum(x: np.ndarray, r: int) -> float:
    if r <= 0:
        return 0.0
    if r >= x.size:
        return float(x.sum())
    return float(np.partition(x, x.size - r)[x.size - r :].sum())


def frobenius_exact(A, s1: int, s2: int, node_cap: int | None = None) -> FrobeniusResult:
    """Maximize the squared mass sum_{i in S1, j in S2} A_ij^2 exactly.

    Depth-first branch-and-bound over row inclusion in index order (include
    first), so among tied optima the lexicographically first row set wins.
    A node's bound adds, per column, the fixed rows' mass plus the largest
    remaining-budget free entries, then keeps the s2 best columns.
    """
    A = np.asarray(A, dtype=float)
    m, n = A.shape
    if not (1 <= s1 <= m and 1 <= s2 <= n):
        raise ValidationError(f"budgets ({s1}, {s2}) invalid for shape {A.shape}")
    if math.comb(n, s2) < math.comb(m, s1):
        res = frobenius_exact(A.T, s2, s1, node_cap)
        sel = Selection(res.selection.cols, res.selection.rows)
        return FrobeniusResult(sel, res.value, res.optimal, res.nodes)
    sq = A * A
    # suffix[d, r, j]: sum of the r largest sq[i, j] over rows i >= d
    suffix = np.zeros((m + 1, s1 + 1, n))
    for d in range(m - 1, -1, -1):
        srt = -np.sort(-sq[d:], axis=0)
        cs = np.cumsum(srt, axis=0)
        for r in range(1, s1 + 1):
            suffix[d, r] = cs[min(r, m - d) - 1]
    tol = 1e-12 * max(1.0, float(sq.sum()))
    best_val, best_rows = -1.0, None
    nodes = 0
    optimal = True
    # stack entries: (next row index, chosen rows, column sums of chosen rows)
    stack = [(0, (), np.zeros(n))]
    while stack:
        if node_cap is not None and nodes >= node_cap:
            optimal = False
            break
        d, rows, colsum = stack.pop()
        nodes += 1
        r = s1 - len(rows)
        if r == 0 or m - d <= r:
            if r > 0:
                rows = rows + tuple(range(d, m))
                colsum = colsum + sq[d:].sum(axis=0)
            val = _top_sum(colsum, s2)
            if val > best_val + tol:
                best_val, best_rows = val, rows
            continue
        bound = _top_sum(colsum + suffix[d, r], s2)
        if bound <= best_val + tol:
            continue
        # push exclude first so include is explored first
        stack.append((d + 1, rows, colsum))
        stack.append((d + 1, rows + (d,), colsum + sq[d]))
    if best_rows is None:
        best_rows = tuple(range(s1))
    colsum = sq[list(best_rows)].sum(axis=0)
    cols = top_indices(colsum, s2)
    val = float(colsum[cols].sum())
    return FrobeniusResult(Selection(best_rows, cols), val, optimal, nodes)


def frobenius_enumerate(A, s1: int, s2: int) -> float:
    """Exhaustive squared-mass optimum (oracle for frobenius_exact)."""
    sq = np.asarray(A, float) ** 2
    best = 0.0
    for R in itertools.combinations(range(sq.shape[0]), s1):
        colsum = sq[list(R)].sum(axis=0)
        for C in itertools.combinations(range(sq.shape[1]), s2):
            best = max(best, float(colsum[list(C)].sum()))
    return best


# ------------------------------------------------------------ branch-and-cut


@dataclass
class CutPool:
    """Closed-form cuts w <= const + sum_{i not in S} diag_i z_i, deduplicated by anchor."""

    size: int
    anchors: np.ndarray = field(init=False)
    consts: np.ndarray = field(init=False)
    count: int = field(init=False, default=0)
    index: dict = field(init=False, default_factory=dict)

    def __post_init__(self):
        self.anchors = np.zeros((16, self.size), dtype=bool)
        self.consts = np.zeros(16)

    def add(self, anchor: np.ndarray, const: float) -> bool:
        key = anchor.tobytes()
        if key in self.index:
            return False
        if self.count == len(self.consts):
            self.anchors = np.vstack([self.anchors, np.zeros_like(self.anchors)])
            self.consts = np.concatenate([self.consts, np.zeros_like(self.consts)])
        self.anchors[self.count] = anchor
        self.consts[self.count] = const
        self.index[key] = self.count
        self.count += 1
        return True

    def cuts(self):
        return [(np.flatnonzero(self.anchors[c]), float(self.consts[c])) for c in range(self.count)]


class _Master:
    """Max w subject to pooled cuts, per-group cardinality budgets, binary z."""

    def __init__(self, size, groups, budgets, diag):
        self.size = size
        self.groups = [np.asarray(g, dtype=int) for g in groups]
        self.budgets = list(budgets)
        self.diag = np.asarray(diag, dtype=float)
        self.group_of = np.zeros(size, dtype=int)
        for gi, g in enumerate(self.groups):
            self.group_of[g] = gi

    def value(self, one: np.ndarray) -> float:
        raise NotImplementedError

    def local_bound(self, one: np.ndarray, free: np.ndarray, cutoff: float) -> float:
        return math.inf


class _SpcaMaster(_Master):
    def __init__(self, A: np.ndarray, s: int, k: int):
        n = A.shape[0]
        super().__init__(n, [np.arange(n)], [s], np.diag(A).copy())
        self.A, self.s, self.k = A, s, k

    def value(self, one):
        idx = np.flatnonzero(one)
        return kyfan_psd(self.A[np.ix_(idx, idx)], self.k)

    def local_bound(self, one, free, cutoff):
        A, k = self.A, self.k
        F = np.flatnonzero(one)
        P = np.flatnonzero(free)
        r = self.s - F.size
        # cut anchored at the fixed set
        b = kyfan_psd(A[np.ix_(F, F)], k) + _top_sum(self.diag[P], r)
        if b <= cutoff:
            return b
        # cut anchored at everything not fixed to zero
        U = np.flatnonzero(one | free)
        return min(b, kyfan_psd(A[np.ix_(U, U)], k))


class _SsvdMaster(_Master):
    """Master over the augmented matrix; bounds are computed on the rectangle."""

    def __init__(self, A: np.ndarray, s1: int, s2: int, k: int):
        m, n = A.shape
        self.Abar, self.shift = augment(A)
        super().__init__(m + n, [np.arange(m), np.arange(m, m + n)], [s1, s2],
                         np.full(m + n, self.shift))
        self.A, self.m, self.n, self.k = A, m, n, k
        self.sq = A * A

    def value(self, one):
        idx = np.flatnonzero(one)
        return kyfan_psd(self.Abar[np.ix_(idx, idx)], self.k)

    def local_bound(self, one, free, cutoff):
        A, sq, m, k = self.A, self.sq, self.m, self.k
        base = k * self.shift
        Fr, Fc = np.flatnonzero(one[:m]), np.flatnonzero(one[m:])
        Pr, Pc = np.flatnonzero(free[:m]), np.flatnonzero(free[m:])
        rr, rc = self.budgets[0] - Fr.size, self.budgets[1] - Fc.size
        Ur, Uc = np.union1d(Fr, Pr), np.union1d(Fc, Pc)
        # budget-aware squared row/column norms
        rsq = sq[:, Fc].sum(axis=1) + _row_top(sq[:, Pc], rc)
        csq = sq[Fr, :].sum(axis=0) + _row_top(sq[Pr, :].T, rr)
        frob = min(rsq[Fr].sum() + _top_sum(rsq[Pr], rr), csq[Fc].sum() + _top_sum(csq[Pc], rc))
        best = base + math.sqrt(k * max(frob, 0.0))
        if best <= cutoff:
            return best
        rho, gam = np.sqrt(rsq), np.sqrt(csq)
        gam_f = np.sqrt(sq[Fr, :].sum(axis=0))
        candidates = (
            lambda: kyfan(A[np.ix_(Fr, Fc)], k) + _top_sum(rho[Pr], rr) + _top_sum(gam_f[Pc], rc),
            lambda: kyfan(A[np.ix_(Fr, Uc)], k) + _top_sum(rho[Pr], rr),
            lambda: kyfan(A[np.ix_(Ur, Fc)], k) + _top_sum(gam[Pc], rc),
            lambda: kyfan(A[np.ix_(Ur, Uc)], k),
        )
        for fn in candidates:
            best = min(best, base + fn())
            if best <= cutoff:
                break
        return best


def _row_top(M: np.ndarray, r: int) -> np.ndarray:
    """Per-row sum of the r largest entries."""
    if r <= 0 or M.shape[1] == 0:
        return np.zeros(M.shape[0])
    if r >= M.shape[1]:
        return M.sum(axis=1)
    return np.partition(M, M.shape[1] - r, axis=1)[:, M.shape[1] - r :].sum(axis=1)


@dataclass
class _Outcome:
    support: np.ndarray
    value: float
    upper_bound: float
    status: str
    nodes: int
    cuts: int
    leaves: int
    pool: CutPool


def _normalize(master: _Master, one: np.ndarray, zero: np.ndarray) -> None:
    """Close a group when its budget is full; take every free index when they all fit.

    Taking all free indices is safe because the master value never decreases
    when an index is added.
    """
    for g, b in zip(master.groups, master.budgets):
        cnt = int(one[g].sum())
        fr = g[~(one[g] | zero[g])]
        if fr.size == 0:
            continue
        if cnt >= b:
            zero[fr] = True
        elif cnt + fr.size <= b:
            one[fr] = True


def _pool_bound(master: _Master, pool: CutPool, one: np.ndarray, free: np.ndarray) -> float:
    """Min over cuts of the cut's best completion under the node's budgets."""
    P = pool.anchors[: pool.count]
    d = master.diag
    total = pool.consts[: pool.count] + (~P[:, one]) @ d[one]
    for g, b in zip(master.groups, master.budgets):
        r = b - int(one[g].sum())
        fr = g[free[g]]
        if r <= 0 or fr.size == 0:
            continue
        order = fr[np.argsort(-d[fr], kind="stable")]
        M = ~P[:, order]
        take = M & (np.cumsum(M, axis=1) <= r)
        total = total + take @ d[order]
    return float(total.min())


def _branch_and_cut(master: _Master, warm: np.ndarray | None, cfg: BnBConfig) -> _Outcome:
    t0 = time.perf_counter()
    N = master.size
    pool = CutPool(N)
    pool.add(np.zeros(N, dtype=bool), master.value(np.zeros(N, dtype=bool)))
    cuts = 0
    leaves = 0
    nodes = 0
    inc_val, inc_sup = -math.inf, None

    def cutoff():
        if inc_sup is None:
            return -math.inf
        return inc_val + cfg.opt_rtol * max(1.0, abs(inc_val))

    def evaluate_leaf(one):
        nonlocal cuts, leaves, inc_val, inc_sup
        leaves += 1
        val = master.value(one)
        if _pool_bound(master, pool, one, np.zeros(N, dtype=bool)) > val + cfg.cut_tol:
            if pool.add(one.copy(), val):
                cuts += 1
        if val > inc_val:
            inc_val, inc_sup = val, one.copy()
        return val

    if warm is not None:
        evaluate_leaf(warm)

    heap: list = []
    counter = itertools.count()

    def push(one, zero, parent_bound, depth):
        nonlocal nodes
        _normalize(master, one, zero)
        free = ~(one | zero)
        nodes += 1
        if not free.any():
            evaluate_leaf(one)
            return
        cut = cutoff()
        b = min(parent_bound, _pool_bound(master, pool, one, free))
        if b > cut:
            b = min(b, master.local_bound(one, free, cut))
        if b > cut:
            heapq.heappush(heap, (-b, depth, next(counter), one, zero))

    push(np.zeros(N, dtype=bool), np.zeros(N, dtype=bool), math.inf, 0)
    status = "optimal"
    open_bound = -math.inf
    while heap:
        negb, depth, _, one, zero = heap[0]
        if -negb <= cutoff():
            break
        if cfg.time_limit is not None and time.perf_counter() - t0 > cfg.time_limit:
            status = "time_limit"
            break
        if cfg.node_cap is not None and nodes >= cfg.node_cap:
            status = "node_limit"
            break
        heapq.heappop(heap)
        free = ~(one | zero)
        b = min(-negb, _pool_bound(master, pool, one, free))
        if b <= cutoff():
            continue
        cand = np.flatnonzero(free)
        i = int(cand[np.argmax(master.diag[cand])])  # first max: smallest index on ties
        one1, zero1 = one.copy(), zero.copy()
        one1[i] = True
        push(one1, zero1, b, depth + 1)
        one0, zero0 = one.copy(), zero.copy()
        zero0[i] = True
        push(one0, zero0, b, depth + 1)
    if inc_sup is None:
        # stopped before any leaf: report the first feasible support as incumbent
        first = np.zeros(N, dtype=bool)
        for g, b in zip(master.groups, master.budgets):
            first[g[:b]] = True
        evaluate_leaf(first)
    if status != "optimal" and heap:
        open_bound = max(-h[0] for h in heap)
    ub = inc_val if status == "optimal" else max(inc_val, open_bound)
    return _Outcome(inc_sup, inc_val, ub, status, nodes, cuts, leaves, pool)


def spca_branch_and_cut(inst: SpcaInstance, cfg: BnBConfig | None = None) -> SolveReport:
    """Exact SPCA by delayed closed-form cuts over binary support variables."""
    from .search import local_search_spca

    t0 = time.perf_counter()
    cfg = cfg or BnBConfig()
    master = _SpcaMaster(inst.A, inst.s, inst.k)
    warm = None
    if cfg.warm_start:
        sel = local_search_spca(inst).selection
        warm = np.zeros(master.size, dtype=bool)
        warm[list(sel.rows)] = True
    out = _branch_and_cut(master, warm, cfg)
    sel = Selection.principal(np.flatnonzero(out.support))
    return make_report(inst, "spca-branch-and-cut", sel, t0, upper_bound=out.upper_bound,
                       nodes=out.nodes, cuts=out.cuts, iterations=out.leaves, status=out.status)


def ssvd_branch_and_cut(inst: SsvdInstance, cfg: BnBConfig | None = None) -> SolveReport:
    """Exact SSVD through the shifted symmetric embedding of A."""
    from .search import local_search_ssvd

    t0 = time.perf_counter()
    cfg = cfg or BnBConfig()
    m = inst.A.shape[0]
    master = _SsvdMaster(inst.A, inst.s1, inst.s2, inst.k)
    warm = None
    if cfg.warm_start:
        sel = local_search_ssvd(inst).selection
        warm = np.zeros(master.size, dtype=bool)
        warm[list(sel.rows)] = True
        warm[[m + j for j in sel.cols]] = True
    out = _branch_and_cut(master, warm, cfg)
    idx = np.flatnonzero(out.support)
    sel = Selection(idx[idx < m], idx[idx >= m] - m)
    shift = inst.k * master.shift
    return make_report(inst, "branch-and-cut", sel, t0, upper_bound=out.upper_bound - shift,
                       nodes=out.nodes, cuts=out.cuts, iterations=out.leaves, status=out.status)
