import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ssvd._util import default_threads, first_argmax, pmap, top_indices
from ssvd.cli.generators import DESK_PARAMS, GENERATORS, generate
from ssvd.errors import ValidationError
from ssvd.errors import CapExceededError
from ssvd.exact import brute_force_spca, brute_force_ssvd, ssvd_branch_and_cut
from ssvd.linalg import kyfan, psd_check
from ssvd.model import SpcaInstance, SsvdInstance, objective, Selection


@pytest.mark.parametrize("kind", sorted(DESK_PARAMS))
def test_known_optimum_is_correct(kind):
    g = generate(kind, DESK_PARAMS[kind])
    b = g.budgets
    rows, cols = g.known_selection
    if g.spca:
        inst = SpcaInstance(g.A, b["s"], b["k"])
        oracle = brute_force_spca(inst).objective
    else:
        inst = SsvdInstance(g.A, b["s1"], b["s2"], b["k"])
        try:
            oracle = brute_force_ssvd(inst).objective
        except CapExceededError:  # example2 is 24 x 24
            oracle = ssvd_branch_and_cut(inst).objective
    assert objective(inst, Selection(rows, cols)) == pytest.approx(g.known_optimum, rel=1e-9)
    assert oracle == pytest.approx(g.known_optimum, rel=1e-9)


def test_example1_shape_and_sidecar():
    g = generate("example1", {"k": 3, "s1": 3, "s2": 4})
    assert g.A.shape == (6, 8)
    side = g.sidecar()
    assert side["known_optimum"] == pytest.approx(6)
    assert side["known_selection"]["rows"] == [4, 5, 6]


@pytest.mark.parametrize("kind, params, fragment", [
    ("example1", {"k": 2, "s1": 3, "s2": 4}, "k = s1"),
    ("example2", {"k": 3, "c": 1, "t": 1}, "min(s1, s2) >= k"),
    ("example3", {"k": 4, "t1": 2, "t2": 2}, "k + 1"),
    ("example7", {"k": 2, "t": 1}, "s >= k + 1"),
    ("example8", {"s": 2, "k": 3}, "k <= s"),
    ("example6", {"s": 1}, "s >= 2"),
    ("gaussian", {"m": 0, "n": 2}, "positive"),
    ("example5", {"q": 1}, "bad parameters"),
])
def test_constraint_errors(kind, params, fragment):
    with pytest.raises(ValidationError) as err:
        generate(kind, params)
    assert fragment in str(err.value)


def test_unknown_generator():
    with pytest.raises(ValidationError):
        generate("example9", {})


def test_gaussian_seeded():
    a = generate("gaussian", {"m": 2, "n": 2}, seed=7).A
    b = generate("gaussian", {"m": 2, "n": 2}, seed=7).A
    assert np.array_equal(a, b)
    assert "known_optimum" not in generate("gaussian", {"m": 2, "n": 2}, seed=7).sidecar()


def test_psd_gram():
    g = generate("psd-gram", {"n": 6}, seed=1)
    assert psd_check(g.A)
    g = generate("psd-gram", {"n": 6, "rank": 2}, seed=1)
    assert psd_check(g.A) and np.linalg.matrix_rank(g.A) == 2


def test_example3_top_pair_is_a_top_pair():
    g = generate("example3", DESK_PARAMS["example3"])
    u, v = g.top_pair
    s1 = np.linalg.svd(g.A, compute_uv=False)[0]
    assert np.linalg.norm(u) == pytest.approx(1) and np.linalg.norm(v) == pytest.approx(1)
    assert np.allclose(g.A @ v, s1 * u)
    m, n = g.A.shape
    assert s1 == pytest.approx(math.sqrt(m * n))


def test_example7_top_vector():
    g = generate("example7", DESK_PARAMS["example7"])
    u = g.top_pair[0]
    assert np.allclose(g.A @ u, np.linalg.eigvalsh(g.A)[-1] * u)


@pytest.mark.parametrize("params", [{"k": 2, "c": 1, "t": 2}, {"k": 1, "c": 3, "t": 1}])
def test_example2_optimum_other_sizes(params):
    g = generate("example2", params)
    b = g.budgets
    val = kyfan(g.A[np.ix_(*g.known_selection)], b["k"])
    assert val == pytest.approx(math.sqrt(b["k"] * b["s1"] * b["s2"]))


def test_registry_complete():
    assert set(GENERATORS) == {f"example{i}" for i in range(1, 9)} | {"gaussian", "psd-gram", "hadamard"}
    assert generate("hadamard", {"t": 3}).A.shape == (4, 4)


def test_top_indices_ties_to_smallest_index():
    assert top_indices(np.array([1.0, 3.0, 3.0, 2.0]), 1).tolist() == [1]
    assert top_indices(np.array([1.0, 1.0, 1.0]), 2).tolist() == [0, 1]
    # rounding noise does not reorder an exact tie
    assert top_indices(np.array([1.0, 1.0 + 1e-15, 0.5]), 1).tolist() == [0]
    assert top_indices(np.array([1.0, 2.0]), 5).tolist() == [0, 1]


@given(st.lists(st.floats(-100, 100, allow_nan=False), min_size=1, max_size=20), st.data())
def test_top_indices_property(vals, data):
    v = np.array(vals)
    count = data.draw(st.integers(0, len(vals)))
    idx = top_indices(v, count)
    assert len(idx) == count and list(idx) == sorted(set(idx))
    if 0 < count < len(vals):
        rest = np.setdiff1d(np.arange(len(vals)), idx)
        assert v[idx].min() >= v[rest].max() - 1e-12 * np.abs(v).max()


def test_first_argmax():
    assert first_argmax([1.0, 2.0, 2.0]) == 1
    assert first_argmax([2.0 - 1e-14, 2.0]) == 0
    assert first_argmax([2.0 - 1e-14, 2.0], rtol=0) == 1


def test_threads(monkeypatch):
    monkeypatch.setenv("SSVD_THREADS", "3")
    assert default_threads() == 3
    monkeypatch.setenv("SSVD_THREADS", "x")
    assert default_threads() == 1
    assert pmap(lambda x: x * x, range(10), threads=4) == [x * x for x in range(10)]
