import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ssvd.cli.generators import example1
from ssvd.errors import ValidationError
from ssvd.model import (
    Selection,
    SolveReport,
    SpcaInstance,
    SsvdInstance,
    gap_percent,
    load_matrix,
    load_report,
    objective,
    save_matrix,
    save_report,
)

from conftest import gaussian, psd


def test_instance_validation():
    A = np.eye(4)
    SsvdInstance(A, 4, 4, 4)
    for s1, s2, k in [(0, 2, 1), (5, 2, 1), (2, 5, 1), (2, 2, 3), (2, 2, 0)]:
        with pytest.raises(ValidationError):
            SsvdInstance(A, s1, s2, k)
    with pytest.raises(ValidationError):
        SsvdInstance(np.array([[np.inf]]), 1, 1, 1)
    with pytest.raises(ValidationError):
        SsvdInstance(A, 2.5, 2, 1)


def test_instance_does_not_alias_input():
    A = np.eye(3)
    inst = SsvdInstance(A, 2, 2, 1)
    A[0, 0] = 7
    assert inst.A[0, 0] == 1
    with pytest.raises(ValueError):
        inst.A[0, 0] = 3


def test_spca_instance_requires_psd():
    SpcaInstance(psd(5, 0), 3, 2)
    with pytest.raises(ValidationError):
        SpcaInstance(-np.eye(3), 2, 1)
    with pytest.raises(ValidationError):
        SpcaInstance(np.ones((2, 3)), 2, 1)
    with pytest.raises(ValidationError):
        SpcaInstance(np.eye(3), 2, 3)


def test_objective_examples():
    inst = SsvdInstance(np.eye(4), 2, 2, 2)
    assert objective(inst, Selection((0, 1), (0, 1))) == pytest.approx(2)
    g = example1(3, 3, 4)
    inst = SsvdInstance(g.A, 3, 4, 3)
    assert objective(inst, Selection(*g.known_selection)) == pytest.approx(3 * math.sqrt(4))


def test_objective_matches_direct_svd(rng):
    A = gaussian(6, 7, 4)
    inst = SsvdInstance(A, 3, 4, 2)
    rows = rng.choice(6, 3, replace=False)
    cols = rng.choice(7, 4, replace=False)
    sv = np.linalg.svd(A[np.ix_(sorted(rows), sorted(cols))], compute_uv=False)
    assert objective(inst, Selection(rows, cols)) == pytest.approx(sv[:2].sum(), rel=1e-12)


def test_objective_rejects_infeasible():
    inst = SsvdInstance(np.eye(4), 2, 2, 1)
    with pytest.raises(ValidationError):
        objective(inst, Selection((0, 1, 2), (0,)))
    with pytest.raises(ValidationError):
        objective(inst, Selection((0, 9), (0,)))


def test_full_budgets_reduce_to_truncated_svd():
    A = gaussian(5, 6, 1)
    inst = SsvdInstance(A, 5, 6, 3)
    sv = np.linalg.svd(A, compute_uv=False)
    assert objective(inst, Selection(range(5), range(6))) == pytest.approx(sv[:3].sum())


@given(st.lists(st.integers(0, 50), unique=True, max_size=8),
       st.lists(st.integers(0, 50), unique=True, max_size=8))
def test_one_based_round_trip(rows, cols):
    sel = Selection(rows, cols)
    d = sel.to_one_based()
    assert all(i >= 1 for i in d["rows"] + d["cols"])
    assert Selection.from_one_based(d) == sel


def test_permutation_equivariance(rng):
    A = gaussian(5, 6, 2)
    inst = SsvdInstance(A, 3, 3, 2)
    sel = Selection((0, 2, 4), (1, 3, 5))
    pr, pc = rng.permutation(5), rng.permutation(6)
    B = A[np.ix_(pr, pc)]
    inv_r, inv_c = np.argsort(pr), np.argsort(pc)
    moved = Selection(inv_r[list(sel.rows)], inv_c[list(sel.cols)])
    assert objective(SsvdInstance(B, 3, 3, 2), moved) == pytest.approx(objective(inst, sel))


def test_load_csv(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("1,2\n3,4\n")
    assert load_matrix(p).tolist() == [[1, 2], [3, 4]]


def test_load_matrix_market_coordinate(tmp_path):
    p = tmp_path / "a.mtx"
    p.write_text("%%MatrixMarket matrix coordinate real general\n% note\n2 3 3\n1 1 1.5\n2 3 -2\n1 2 4\n")
    assert load_matrix(p).tolist() == [[1.5, 4, 0], [0, 0, -2]]


def test_load_matrix_market_symmetric(tmp_path):
    p = tmp_path / "s.mtx"
    p.write_text("%%MatrixMarket matrix coordinate real symmetric\n3 3 3\n1 1 2\n2 1 1\n3 3 5\n")
    assert load_matrix(p).tolist() == [[2, 1, 0], [1, 0, 0], [0, 0, 5]]


@pytest.mark.parametrize("text, fragment", [
    ("1,2\n3\n", "line 2"),
    ("1,x\n", "line 1"),
    ("", "no data"),
    ("1,nan\n", ""),
])
def test_csv_errors(tmp_path, text, fragment):
    p = tmp_path / "bad.csv"
    p.write_text(text)
    with pytest.raises(ValidationError) as err:
        load_matrix(p)
    assert fragment in str(err.value)


@pytest.mark.parametrize("text", [
    "2 2 1\n1 1 1\n",
    "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n",
    "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n",
    "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n",
    "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n",
])
def test_matrix_market_errors(tmp_path, text):
    p = tmp_path / "bad.mtx"
    p.write_text(text)
    with pytest.raises(ValidationError):
        load_matrix(p)


def test_missing_file(tmp_path):
    with pytest.raises(ValidationError):
        load_matrix(tmp_path / "nope.csv")


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(st.tuples(st.integers(1, 5), st.integers(1, 5)).flatmap(
    lambda s: arrays(np.float64, s, elements=finite)), st.sampled_from(["a.csv", "a.mtx"]))
def test_matrix_round_trip(tmp_path_factory, A, name):
    p = tmp_path_factory.mktemp("rt") / name
    save_matrix(p, A)
    assert np.array_equal(load_matrix(p), A)


def _report():
    return SolveReport("greedy", 2.5, Selection((0, 3), (1, 2)), nodes=3, iterations=4,
                       wall_seconds=0.01, trace=[1.0, 2.5])


def test_report_json(tmp_path):
    rep = _report()
    p = tmp_path / "r.json"
    save_report(rep, p)
    d = json.loads(p.read_text())
    assert {"algorithm", "objective", "selection", "wall_seconds"} <= set(d)
    assert d["upper_bound"] is None
    assert d["selection"] == {"rows": [1, 4], "cols": [2, 3]}
    assert load_report(p) == rep


def test_report_csv_empty_bound(tmp_path):
    p = tmp_path / "r.csv"
    save_report(_report(), p, "csv")
    header, row = p.read_text().splitlines()
    fields = dict(zip(header.split(","), row.split(",")))
    assert fields["upper_bound"] == ""
    assert fields["rows"] == "1 4"


def test_gap_percent():
    assert gap_percent(None, 1.0) is None
    assert gap_percent(2.0, 2.0) == 0.0
    assert gap_percent(3.0, 2.0) == pytest.approx(50.0)
    assert gap_percent(1.0, 0.0) is None
