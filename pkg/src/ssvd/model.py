"""Instances, selections, solve reports, and file I/O."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import ValidationError
from .linalg import as_matrix, kyfan, psd_check

PSD_TOL = 1e-8


def _frozen(A) -> np.ndarray:
    arr = as_matrix(A, "A")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SsvdInstance:
    A: np.ndarray
    s1: int
    s2: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "A", _frozen(self.A))
        m, n = self.A.shape
        for name, val in (("s1", self.s1), ("s2", self.s2), ("k", self.k)):
            if int(val) != val:
                raise ValidationError(f"{name} must be an integer, got {val!r}")
            object.__setattr__(self, name, int(val))
        if not 1 <= self.s1 <= m:
            raise ValidationError(f"s1={self.s1} outside [1, m={m}]")
        if not 1 <= self.s2 <= n:
            raise ValidationError(f"s2={self.s2} outside [1, n={n}]")
        if not 1 <= self.k <= min(self.s1, self.s2):
            raise ValidationError(f"k={self.k} outside [1, min(s1, s2)={min(self.s1, self.s2)}]")

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape


@dataclass(frozen=True, eq=False)
class SpcaInstance:
    A: np.ndarray
    s: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "A", _frozen(self.A))
        n, n2 = self.A.shape
        if n != n2:
            raise ValidationError(f"SPCA needs a square matrix, got {self.A.shape}")
        if not psd_check(self.A, PSD_TOL):
            raise ValidationError("SPCA matrix is not positive semidefinite")
        for name, val in (("s", self.s), ("k", self.k)):
            if int(val) != val:
                raise ValidationError(f"{name} must be an integer, got {val!r}")
            object.__setattr__(self, name, int(val))
        if not 1 <= self.k <= self.s <= n:
            raise ValidationError(f"need 1 <= k <= s <= n, got k={self.k}, s={self.s}, n={n}")

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def as_ssvd(self) -> SsvdInstance:
        return SsvdInstance(self.A, self.s, self.s, self.k)


def _index_tuple(idx: Iterable[int], bound: int, name: str) -> tuple[int, ...]:
    vals = [int(i) for i in idx]
    if len(set(vals)) != len(vals):
        raise ValidationError(f"{name} has duplicate indices")
    for i in vals:
        if not 0 <= i < bound:
            raise ValidationError(f"{name} index {i} out of range [0, {bound})")
    return tuple(sorted(vals))


@dataclass(frozen=True)
class Selection:
    """Row and column index sets, 0-based and sorted."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(sorted(int(i) for i in self.rows)))
        object.__setattr__(self, "cols", tuple(sorted(int(i) for i in self.cols)))

    @classmethod
    def principal(cls, S: Iterable[int]) -> "Selection":
        S = tuple(S)
        return cls(S, S)

    def to_one_based(self) -> dict:
        return {"rows": [i + 1 for i in self.rows], "cols": [j + 1 for j in self.cols]}

    @classmethod
    def from_one_based(cls, d: dict) -> "Selection":
        return cls(tuple(i - 1 for i in d["rows"]), tuple(j - 1 for j in d["cols"]))


def check_selection(inst: SsvdInstance | SpcaInstance, sel: Selection) -> None:
    m, n = inst.A.shape
    _index_tuple(sel.rows, m, "rows")
    _index_tuple(sel.cols, n, "cols")
    b1, b2 = (inst.s, inst.s) if isinstance(inst, SpcaInstance) else (inst.s1, inst.s2)
    if len(sel.rows) > b1 or len(sel.cols) > b2:
        raise ValidationError(
            f"selection sizes ({len(sel.rows)}, {len(sel.cols)}) exceed budgets ({b1}, {b2})"
        )
    if isinstance(inst, SpcaInstance) and sel.rows != sel.cols:
        raise ValidationError("SPCA selections must use the same rows and columns")


def submatrix(A: np.ndarray, rows, cols) -> np.ndarray:
    return A[np.ix_(np.asarray(rows, dtype=int), np.asarray(cols, dtype=int))]


def objective(inst: SsvdInstance | SpcaInstance, sel: Selection) -> float:
    """Ky Fan k-norm of the selected submatrix; k clamps for small selections."""
    check_selection(inst, sel)
    return kyfan(submatrix(inst.A, sel.rows, sel.cols), inst.k)


@dataclass
class SolveReport:
    algorithm: str
    objective: float
    selection: Selection
    upper_bound: float | None = None
    gap_percent: float | None = None
    nodes: int = 0
    cuts: int = 0
    iterations: int = 0
    wall_seconds: float = 0.0
    status: str = "ok"
    trace: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "objective": self.objective,
            "selection": self.selection.to_one_based(),
            "upper_bound": self.upper_bound,
            "gap_percent": self.gap_percent,
            "nodes": self.nodes,
            "cuts": self.cuts,
            "iterations": self.iterations,
            "wall_seconds": self.wall_seconds,
            "status": self.status,
            "trace": list(self.trace),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SolveReport":
        return cls(
            algorithm=d["algorithm"],
            objective=d["objective"],
            selection=Selection.from_one_based(d["selection"]),
            upper_bound=d.get("upper_bound"),
            gap_percent=d.get("gap_percent"),
            nodes=d.get("nodes", 0),
            cuts=d.get("cuts", 0),
            iterations=d.get("iterations", 0),
            wall_seconds=d.get("wall_seconds", 0.0),
            status=d.get("status", "ok"),
            trace=list(d.get("trace", [])),
        )


def gap_percent(upper_bound: float | None, obj: float) -> float | None:
    """100 (ub - obj) / obj; 0 when the bound is attained, None if undefined."""
    if upper_bound is None:
        return None
    if upper_bound - obj <= 1e-12 * max(1.0, abs(obj)):
        return 0.0
    if obj <= 0:
        return None
    return 100.0 * (upper_bound - obj) / obj


# ---------------------------------------------------------------- matrix I/O


def _infer_format(path: Path) -> str:
    return "matrixmarket" if path.suffix.lower() in {".mtx", ".mm"} else "csv"


def _parse_float(tok: str, lineno: int) -> float:
    try:
        val = float(tok)
    except ValueError:
        raise ValidationError(f"line {lineno}: cannot parse number {tok!r}") from None
    if not math.isfinite(val):
        raise ValidationError(f"line {lineno}: non-finite value {tok!r}")
    return val


def _load_csv(text: str) -> np.ndarray:
    rows: list[list[float]] = []
    width = None
    for lineno, rec in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not rec or all(not c.strip() for c in rec):
            continue
        vals = [_parse_float(c.strip(), lineno) for c in rec]
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise ValidationError(f"line {lineno}: row has {len(vals)} entries, expected {width}")
        rows.append(vals)
    if not rows:
        raise ValidationError("CSV file contains no data")
    return np.array(rows, dtype=float)


def _load_mm(text: str) -> np.ndarray:
    lines = text.splitlines()
    if not lines or not lines[0].lower().startswith("%%matrixmarket"):
        raise ValidationError("line 1: missing %%MatrixMarket header")
    head = lines[0].split()
    if len(head) != 5 or head[1].lower() != "matrix":
        raise ValidationError(f"line 1: malformed header {lines[0]!r}")
    layout, field_, symmetry = (h.lower() for h in head[2:])
    if layout not in {"coordinate", "array"}:
        raise ValidationError(f"line 1: unsupported layout {layout!r}")
    if field_ not in {"real", "integer", "double"}:
        raise ValidationError(f"line 1: unsupported field {field_!r}")
    if symmetry not in {"general", "symmetric"}:
        raise ValidationError(f"line 1: unsupported symmetry {symmetry!r}")
    body = [
        (no, ln.split())
        for no, ln in enumerate(lines[1:], start=2)
        if ln.strip() and not ln.lstrip().startswith("%")
    ]
    if not body:
        raise ValidationError("missing size line")
    size_no, size = body[0]
    try:
        dims = [int(x) for x in size]
    except ValueError:
        raise ValidationError(f"line {size_no}: malformed size line") from None
    entries = body[1:]
    if layout == "coordinate":
        if len(dims) != 3:
            raise ValidationError(f"line {size_no}: coordinate size line needs 3 integers")
        m, n, nnz = dims
        if len(entries) != nnz:
            raise ValidationError(f"expected {nnz} entries, found {len(entries)}")
        A = np.zeros((m, n))
        for no, tok in entries:
            if len(tok) != 3:
                raise ValidationError(f"line {no}: expected 'row col value'")
            try:
                i, j = int(tok[0]) - 1, int(tok[1]) - 1
            except ValueError:
                raise ValidationError(f"line {no}: malformed index") from None
            if not (0 <= i < m and 0 <= j < n):
                raise ValidationError(f"line {no}: index ({i + 1}, {j + 1}) out of range")
            v = _parse_float(tok[2], no)
            A[i, j] = v
            if symmetry == "symmetric":
                A[j, i] = v
        return A
    if len(dims) != 2:
        raise ValidationError(f"line {size_no}: array size line needs 2 integers")
    m, n = dims
    vals = []
    for no, tok in entries:
        if len(tok) != 1:
            raise ValidationError(f"line {no}: expected one value per line")
        vals.append(_parse_float(tok[0], no))
    if symmetry == "symmetric":
        if m != n or len(vals) != n * (n + 1) // 2:
            raise ValidationError("symmetric array needs n(n+1)/2 lower-triangle values")
        A = np.zeros((n, n))
        it = iter(vals)
        for j in range(n):
            for i in range(j, n):
                A[i, j] = A[j, i] = next(it)
        return A
    if len(vals) != m * n:
        raise ValidationError(f"expected {m * n} values, found {len(vals)}")
    return np.array(vals).reshape((n, m)).T  # column-major


def load_matrix(path, format: str | None = None) -> np.ndarray:
    path = Path(path)
    fmt = format or _infer_format(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    if fmt == "csv":
        A = _load_csv(text)
    elif fmt == "matrixmarket":
        A = _load_mm(text)
    else:
        raise ValidationError(f"unknown matrix format {fmt!r}")
    return as_matrix(A)


def save_matrix(path, A, format: str | None = None) -> None:
    path = Path(path)
    A = as_matrix(A)
    fmt = format or _infer_format(path)
    if fmt == "csv":
        text = "\n".join(",".join(repr(float(x)) for x in row) for row in A) + "\n"
    elif fmt == "matrixmarket":
        m, n = A.shape
        out = ["%%MatrixMarket matrix array real general", f"{m} {n}"]
        out.extend(repr(float(x)) for x in A.T.ravel())
        text = "\n".join(out) + "\n"
    else:
        raise ValidationError(f"unknown matrix format {fmt!r}")
    path.write_text(text)


# ---------------------------------------------------------------- report I/O

CSV_FIELDS = (
    "algorithm", "objective", "rows", "cols", "upper_bound", "gap_percent",
    "nodes", "cuts", "iterations", "wall_seconds", "status",
)


def report_csv_row(report: SolveReport) -> dict:
    d = report.to_dict()
    return {
        "algorithm": d["algorithm"],
        "objective": repr(d["objective"]),
        "rows": " ".join(map(str, d["selection"]["rows"])),
        "cols": " ".join(map(str, d["selection"]["cols"])),
        "upper_bound": "" if d["upper_bound"] is None else repr(d["upper_bound"]),
        "gap_percent": "" if d["gap_percent"] is None else repr(d["gap_percent"]),
        "nodes": d["nodes"],
        "cuts": d["cuts"],
        "iterations": d["iterations"],
        "wall_seconds": repr(d["wall_seconds"]),
        "status": d["status"],
    }


def dumps_report(report: SolveReport) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"


def save_report(report: SolveReport, path, format: str = "json") -> None:
    path = Path(path)
    if format == "json":
        path.write_text(dumps_report(report))
    elif format == "csv":
        with path.open("w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
            w.writeheader()
            w.writerow(report_csv_row(report))
    else:
        raise ValidationError(f"unknown report format {format!r}")


def load_report(path) -> SolveReport:
    return SolveReport.from_dict(json.loads(Path(path).read_text()))


def make_report(inst, algorithm: str, sel: Selection, started: float, **kw) -> SolveReport:
    """Build a report whose objective is recomputed from the selection."""
    obj = objective(inst, sel)
    ub = kw.pop("upper_bound", None)
    return SolveReport(
        algorithm=algorithm,
        objective=obj,
        selection=sel,
        upper_bound=ub,
        gap_percent=gap_percent(ub, obj),
        wall_seconds=time.perf_counter() - started,
        **kw,
    )
