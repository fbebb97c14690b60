import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ssvd.cli.generators import DESK_PARAMS, generate
from ssvd.exact import brute_force_ssvd
from ssvd.linalg import kyfan
from ssvd.model import SpcaInstance, SsvdInstance, submatrix
from ssvd.ratios import ssvd_ratio
from ssvd.selection import (
    rowcol_candidates,
    select_frobenius,
    select_rowcol,
    select_spectral,
    spca_select,
    top_eigenvector,
)

from conftest import gaussian, psd


def _desk(kind):
    return generate(kind, DESK_PARAMS[kind])


def test_example1_frobenius_is_tight():
    g = _desk("example1")
    rep = select_frobenius(SsvdInstance(g.A, 3, 4, 3))
    assert rep.selection.rows == (0, 1, 2) and rep.selection.cols == (0, 1, 2, 3)
    assert rep.objective == pytest.approx(math.sqrt(12), rel=1e-12)
    assert rep.objective / g.known_optimum == pytest.approx(1 / math.sqrt(3), rel=1e-9)


def test_frobenius_diagonal_picks_largest():
    A = np.diag([1.0, -5.0, 3.0])
    rep = select_frobenius(SsvdInstance(A, 1, 1, 1))
    assert rep.selection.rows == (1,) and rep.objective == 5


def test_example2_rowcol_is_tight():
    g = _desk("example2")
    assert g.A.shape == (24, 24)
    rep = select_rowcol(SsvdInstance(g.A, 4, 4, 2))
    assert rep.objective == pytest.approx(2.0, rel=1e-12)
    assert g.known_optimum == pytest.approx(math.sqrt(32))
    assert rep.iterations == 48


def test_rowcol_single_entry():
    A = np.zeros((4, 5))
    A[2, 3] = -7
    rep = select_rowcol(SsvdInstance(A, 1, 1, 1))
    assert (rep.selection.rows, rep.selection.cols) == ((2,), (3,))


def test_rowcol_candidate_completeness():
    A = gaussian(6, 7, 5)
    inst = SsvdInstance(A, 3, 3, 2)
    cands = rowcol_candidates(A, 3, 3)
    assert len(cands) == 6 + 7
    best = max(kyfan(submatrix(A, c.rows, c.cols), 2) for c in cands)
    assert select_rowcol(inst).objective == pytest.approx(best, rel=1e-12)
    assert all(len(c.rows) == 3 and len(c.cols) == 3 for c in cands)


def test_example3_spectral_with_stated_pair():
    g = _desk("example3")
    inst = SsvdInstance(g.A, 4, 4, 2)
    rep = select_spectral(inst, top_pair=g.top_pair)
    assert rep.objective == pytest.approx(4.0, rel=1e-12)
    assert rep.objective / g.known_optimum == pytest.approx(0.25, rel=1e-9)
    # any top pair keeps the guarantee
    assert select_spectral(inst).objective >= 0.25 * g.known_optimum - 1e-9


def test_spectral_rank_one_support_recovery():
    u = np.array([0, 3.0, 0, -1, 0])
    v = np.array([2.0, 0, 0, 1, 0, 0])
    A = np.outer(u, v)
    rep = select_spectral(SsvdInstance(A, 2, 2, 1))
    assert rep.selection.rows == (1, 3) and rep.selection.cols == (0, 3)
    assert rep.objective == pytest.approx(kyfan(A, 1))


@given(st.integers(0, 10_000))
def test_spectral_sign_invariance(seed):
    A = gaussian(6, 5, seed)
    inst = SsvdInstance(A, 3, 3, 2)
    U, s, Vt = np.linalg.svd(A)
    a = select_spectral(inst, top_pair=(U[:, 0], Vt[0]))
    b = select_spectral(inst, top_pair=(-U[:, 0], -Vt[0]))
    assert a.selection == b.selection


@pytest.mark.parametrize("algo, fn", [
    ("frobenius", select_frobenius),
    ("rowcol", select_rowcol),
    ("spectral", select_spectral),
])
@pytest.mark.parametrize("seed", range(6))
def test_ratio_guarantee_against_brute_force(algo, fn, seed):
    rng = np.random.default_rng(seed)
    m, n = rng.integers(3, 9, 2)
    s1, s2 = rng.integers(1, min(m, 4) + 1), rng.integers(1, min(n, 4) + 1)
    k = int(rng.integers(1, min(s1, s2, 3) + 1))
    inst = SsvdInstance(rng.standard_normal((m, n)), int(s1), int(s2), k)
    opt = brute_force_ssvd(inst).objective
    val = fn(inst).objective
    assert val >= ssvd_ratio(algo, m, n, s1, s2, k) * opt - 1e-9
    assert val <= opt + 1e-9


def test_spca_examples():
    g5 = _desk("example5")
    assert spca_select(SpcaInstance(g5.A, 3, 3), "frobenius").objective == pytest.approx(3)
    assert g5.known_optimum == pytest.approx(3 * math.sqrt(3))
    g6 = _desk("example6")
    assert spca_select(SpcaInstance(g6.A, 3, 3), "rowcol").objective == pytest.approx(1)
    g7 = _desk("example7")
    rep = spca_select(SpcaInstance(g7.A, 2, 1), "spectral", top_vector=g7.top_pair[0])
    assert rep.objective == pytest.approx(2)
    assert g7.known_optimum == 4


def test_spca_select_rejects_unknown_variant():
    with pytest.raises(ValueError):
        spca_select(SpcaInstance(np.eye(3), 2, 1), "nope")


def test_spca_selection_is_principal():
    A = psd(7, 3)
    for v in ("frobenius", "rowcol", "spectral"):
        sel = spca_select(SpcaInstance(A, 3, 2), v).selection
        assert sel.rows == sel.cols and len(sel.rows) == 3


def test_top_eigenvector():
    A = np.diag([1.0, 4.0, 2.0])
    assert abs(top_eigenvector(A)[1]) == pytest.approx(1)


@given(st.integers(0, 100_000), st.integers(2, 7), st.data())
def test_principal_dominance(seed, n, data):
    # an off-diagonal block never beats the better of its two principal blocks
    B = psd(n, seed)
    size = data.draw(st.integers(1, n))
    k = data.draw(st.integers(1, size))
    S1 = data.draw(st.lists(st.integers(0, n - 1), min_size=size, max_size=size, unique=True))
    S2 = data.draw(st.lists(st.integers(0, n - 1), min_size=size, max_size=size, unique=True))
    off = kyfan(submatrix(B, S1, S2), k)
    best = max(kyfan(submatrix(B, S1, S1), k), kyfan(submatrix(B, S2, S2), k))
    assert off <= best + 1e-9 * max(1.0, best)


def test_threads_do_not_change_results():
    inst = SsvdInstance(gaussian(8, 9, 1), 4, 4, 2)
    a = select_rowcol(inst, threads=1)
    b = select_rowcol(inst, threads=4)
    assert a.selection == b.selection and a.objective == b.objective
