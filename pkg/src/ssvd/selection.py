"""One-shot selection heuristics: Frobenius mass, row/column scans, top singular vectors."""

from __future__ import annotations

import time
from typing import Callable

import numpy as np

from ._util import first_argmax, pmap, top_indices
from .errors import ValidationError
from .linalg import kyfan, truncated_svd
from .model import Selection, SolveReport, SpcaInstance, SsvdInstance, make_report, submatrix

FrobeniusSolver = Callable[..., object]


def _default_frobenius():
    from .exact import frobenius_exact

    return frobenius_exact


def select_frobenius(inst: SsvdInstance, exact: FrobeniusSolver | None = None) -> SolveReport:
    """Pick the submatrix of largest Frobenius mass and report its Ky Fan norm."""
    t0 = time.perf_counter()
    solver = exact or _default_frobenius()
    res = solver(inst.A, inst.s1, inst.s2)
    status = "ok" if res.optimal else "node_limit"
    return make_report(inst, "frobenius", res.selection, t0, nodes=res.nodes, status=status)


def rowcol_candidates(A: np.ndarray, s1: int, s2: int, rows: bool = True) -> list[Selection]:
    """Candidate pairs from every column scan, then (optionally) every row scan."""
    absA = np.abs(A)
    m, n = A.shape
    out = []
    for j in range(n):
        S1 = top_indices(absA[:, j], s1)
        S2 = top_indices(np.linalg.norm(A[S1, :], axis=0), s2)
        out.append(Selection(S1, S2))
    if rows:
        for i in range(m):
            T2 = top_indices(absA[i, :], s2)
            T1 = top_indices(np.linalg.norm(A[:, T2], axis=1), s1)
            out.append(Selection(T1, T2))
    return out


def _best(A: np.ndarray, k: int, cands: list[Selection], threads: int | None):
    vals = pmap(lambda c: kyfan(submatrix(A, c.rows, c.cols), k), cands, threads)
    idx = first_argmax(vals)
    return cands[idx], vals


def select_rowcol(inst: SsvdInstance, threads: int | None = None) -> SolveReport:
    """Scan all m + n single-row/column seeds and keep the best candidate."""
    t0 = time.perf_counter()
    cands = rowcol_candidates(inst.A, inst.s1, inst.s2)
    sel, vals = _best(inst.A, inst.k, cands, threads)
    return make_report(inst, "rowcol", sel, t0, iterations=len(cands))


def _check_pair(A: np.ndarray, u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    u = np.asarray(u, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    if u.shape != (A.shape[0],) or v.shape != (A.shape[1],):
        raise ValidationError("top pair has the wrong dimensions")
    return u, v


def spectral_candidates(A: np.ndarray, s1: int, s2: int, u: np.ndarray, v: np.ndarray):
    S1 = top_indices(np.abs(u), s1)
    S2 = top_indices(np.abs(u[S1] @ A[S1, :]), s2)
    T2 = top_indices(np.abs(v), s2)
    T1 = top_indices(np.abs(A[:, T2] @ v[T2]), s1)
    return Selection(S1, S2), Selection(T1, T2)


def select_spectral(inst: SsvdInstance, top_pair=None) -> SolveReport:
    """Trim the top singular pair to the budgets; keep the better of two candidates.

    `top_pair` may supply (u1, v1) explicitly; by default the kernel's pair is used.
    """
    t0 = time.perf_counter()
    A = inst.A
    if top_pair is None:
        res = truncated_svd(A, 1)
        u, v = res.left_vectors[:, 0], res.right_vectors[:, 0]
    else:
        u, v = _check_pair(A, *top_pair)
    cands = list(spectral_candidates(A, inst.s1, inst.s2, u, v))
    sel, _ = _best(A, inst.k, cands, 1)
    return make_report(inst, "spectral", sel, t0, iterations=2)


def _better_principal(inst: SpcaInstance, sel: Selection) -> Selection:
    a = kyfan(submatrix(inst.A, sel.rows, sel.rows), inst.k)
    b = kyfan(submatrix(inst.A, sel.cols, sel.cols), inst.k)
    S = sel.rows if first_argmax([a, b]) == 0 else sel.cols
    return Selection.principal(S)


def top_eigenvector(A: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(A)
    return V[:, -1]


def spca_select(
    inst: SpcaInstance,
    variant: str,
    exact: FrobeniusSolver | None = None,
    top_vector=None,
    threads: int | None = None,
) -> SolveReport:
    """Selection heuristics for SPCA: run the rectangular variant, keep the better side."""
    t0 = time.perf_counter()
    A, s, k = inst.A, inst.s, inst.k
    nodes = 0
    status = "ok"
    if variant == "frobenius":
        res = (exact or _default_frobenius())(A, s, s)
        pair, nodes = res.selection, res.nodes
        status = "ok" if res.optimal else "node_limit"
        iters = 1
    elif variant == "rowcol":
        cands = rowcol_candidates(A, s, s, rows=False)
        pair, _ = _best(A, k, cands, threads)
        iters = len(cands)
    elif variant == "spectral":
        u = top_eigenvector(A) if top_vector is None else np.asarray(top_vector, float).ravel()
        if u.shape != (A.shape[0],):
            raise ValidationError("top eigenvector has the wrong dimension")
        S1 = top_indices(np.abs(u), s)
        S2 = top_indices(np.abs(u[S1] @ A[S1, :]), s)
        pair = Selection(S1, S2)
        iters = 1
    else:
        raise ValidationError(f"unknown SPCA selection variant {variant!r}")
    sel = _better_principal(inst, pair)
    return make_report(inst, f"spca-{variant}", sel, t0, nodes=nodes, iterations=iters, status=status)
