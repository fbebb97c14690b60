"""Command implementations: gen, solve, exact, bench, scan."""

from __future__ import annotations

import csv
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import CapExceededError, ValidationError
from ..exact import (
    ENUM_CAP,
    BnBConfig,
    brute_force_spca,
    brute_force_ssvd,
    spca_branch_and_cut,
    ssvd_branch_and_cut,
)
from ..linalg import kyfan, singular_values
from ..model import (
    Selection,
    SolveReport,
    SpcaInstance,
    SsvdInstance,
    dumps_report,
    load_matrix,
    save_matrix,
)
from ..ratios import spca_ratio, ssvd_ratio
from ..search import LocalSearchConfig, greedy_spca, greedy_ssvd, local_search_spca, local_search_ssvd
from ..selection import select_frobenius, select_rowcol, select_spectral, spca_select
from .generators import DESK_PARAMS, generate

log = logging.getLogger("ssvd")

ALGOS = ("frobenius", "rowcol", "spectral", "greedy", "local-search")


# -------------------------------------------------------------------- gen


def sidecar_path(out: Path) -> Path:
    return out.with_suffix(".json")


def cmd_gen(kind: str, params: dict, seed: int | None, out) -> Path:
    out = Path(out)
    g = generate(kind, params, seed)
    save_matrix(out, g.A)
    sidecar_path(out).write_text(json.dumps(g.sidecar(), indent=2, sort_keys=True) + "\n")
    return out


# ------------------------------------------------------------------ solve


def _random_warm(m: int, n: int, s1: int, s2: int, seed: int) -> Selection:
    rng = np.random.default_rng(seed)
    return Selection(rng.choice(m, s1, replace=False), rng.choice(n, s2, replace=False))


def run_algorithm(
    A: np.ndarray,
    s1: int,
    s2: int,
    k: int,
    algo: str,
    spca: bool = False,
    delta: float = 1e-6,
    seed: int | None = None,
    threads: int | None = None,
) -> SolveReport:
    if algo not in ALGOS:
        raise ValidationError(f"unknown algorithm {algo!r}; choose from {ALGOS}")
    if spca:
        if s1 != s2:
            raise ValidationError("--spca needs s1 = s2")
        inst = SpcaInstance(A, s1, k)
        if algo in ("frobenius", "rowcol", "spectral"):
            return spca_select(inst, algo, threads=threads)
        if algo == "greedy":
            return greedy_spca(inst, threads=threads)
        warm = None
        if seed is not None:
            warm = Selection.principal(_random_warm(inst.n, inst.n, s1, s1, seed).rows)
        return local_search_spca(inst, LocalSearchConfig(delta=delta), warm)
    inst = SsvdInstance(A, s1, s2, k)
    if algo == "frobenius":
        return select_frobenius(inst)
    if algo == "rowcol":
        return select_rowcol(inst, threads=threads)
    if algo == "spectral":
        return select_spectral(inst)
    if algo == "greedy":
        return greedy_ssvd(inst, threads=threads)
    warm = None if seed is None else _random_warm(*A.shape, s1, s2, seed)
    return local_search_ssvd(inst, LocalSearchConfig(delta=delta), warm)


def run_oracle(A: np.ndarray, s1: int, s2: int, k: int, spca: bool = False,
               cap: int = ENUM_CAP, cfg: BnBConfig | None = None) -> SolveReport:
    """Brute force when the enumeration fits under the cap, else branch-and-cut."""
    try:
        if spca:
            return brute_force_spca(SpcaInstance(A, s1, k), cap)
        return brute_force_ssvd(SsvdInstance(A, s1, s2, k), cap)
    except CapExceededError:
        if spca:
            return spca_branch_and_cut(SpcaInstance(A, s1, k), cfg)
        return ssvd_branch_and_cut(SsvdInstance(A, s1, s2, k), cfg)


def ratio_bound(algo: str, shape, s1: int, s2: int, k: int, spca: bool) -> float:
    if spca:
        return spca_ratio(algo, shape[0], s1, k)
    return ssvd_ratio(algo, shape[0], shape[1], s1, s2, k)


def summary(report: SolveReport) -> str:
    sel = report.selection.to_one_based()
    parts = [
        f"{report.algorithm}: objective {report.objective:.10g}",
        f"rows {sel['rows']}",
        f"cols {sel['cols']}",
        f"status {report.status}",
    ]
    if report.upper_bound is not None:
        parts.append(f"bound {report.upper_bound:.10g}")
    if report.gap_percent is not None:
        parts.append(f"gap {report.gap_percent:.4g}%")
    if report.nodes or report.cuts:
        parts.append(f"nodes {report.nodes} cuts {report.cuts}")
    return "; ".join(parts)


def write_json(payload: str, dest) -> None:
    if dest in (None, ""):
        return
    if dest == "-":
        print(payload, end="")
    else:
        Path(dest).write_text(payload)


def cmd_solve(input, s1, s2, k, algo, spca=False, delta=1e-6, seed=None, threads=None,
              oracle=False, json_out=None, fmt=None, time_limit=None) -> SolveReport:
    A = load_matrix(input, fmt)
    report = run_algorithm(A, s1, s2, k, algo, spca, delta, seed, threads)
    print(summary(report))
    extra = {}
    if oracle:
        orc = run_oracle(A, s1, s2, k, spca, cfg=BnBConfig(time_limit=time_limit))
        bound = ratio_bound(algo, A.shape, s1, s2, k, spca)
        ratio = report.objective / orc.objective if orc.objective > 0 else 1.0
        print(f"oracle {orc.objective:.10g}; ratio {ratio:.10g}; guaranteed >= {bound:.10g}")
        extra = {"oracle_objective": orc.objective, "ratio": ratio, "ratio_bound": bound}
    payload = report.to_dict()
    payload.update(extra)
    write_json(json.dumps(payload, indent=2) + "\n", json_out)
    return report


def cmd_exact(input, s1, s2, k, spca=False, brute=False, time_limit=None, node_cap=None,
              json_out=None, fmt=None) -> SolveReport:
    A = load_matrix(input, fmt)
    if spca and s1 != s2:
        raise ValidationError("--spca needs s1 = s2")
    cfg = BnBConfig(time_limit=time_limit, node_cap=node_cap)
    if brute:
        report = brute_force_spca(SpcaInstance(A, s1, k)) if spca else brute_force_ssvd(SsvdInstance(A, s1, s2, k))
    elif spca:
        report = spca_branch_and_cut(SpcaInstance(A, s1, k), cfg)
    else:
        report = ssvd_branch_and_cut(SsvdInstance(A, s1, s2, k), cfg)
    print(summary(report))
    write_json(dumps_report(report), json_out)
    return report


# ------------------------------------------------------------------ bench


@dataclass
class BenchSpec:
    generator: str | None = "gaussian"
    params: dict = field(default_factory=lambda: {"m": 8, "n": 10})
    input: str | None = None
    seed: int = 0
    algorithms: list = field(default_factory=lambda: ["exact"])
    s1_grid: list = field(default_factory=list)
    s2_grid: list = field(default_factory=list)
    k_grid: list = field(default_factory=lambda: [3])
    repetitions: int = 1
    spca: bool = False
    oracle: bool = True
    time_limit: float | None = None
    output: str | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "BenchSpec":
        known = set(cls.__dataclass_fields__)
        bad = set(d) - known
        if bad:
            raise ValidationError(f"unknown bench spec keys: {sorted(bad)}")
        return cls(**d)


BENCH_FIELDS = (
    "instance", "rep", "seed", "algorithm", "m", "n", "s1", "s2", "k", "objective",
    "full_kyfan", "ratio_full", "oracle_objective", "ratio_oracle", "ratio_bound",
    "nodes", "cuts", "status", "wall_seconds",
)


def _bench_instances(spec: BenchSpec):
    for rep in range(spec.repetitions):
        if spec.input:
            yield rep, None, Path(spec.input).name, load_matrix(spec.input)
        else:
            seed = spec.seed + rep
            g = generate(spec.generator, spec.params, seed)
            yield rep, seed, f"{spec.generator}-{seed}", g.A


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return x


def _bench_row(**kw) -> dict:
    return {f: _fmt(kw.get(f)) for f in BENCH_FIELDS}


def cmd_bench(spec: BenchSpec) -> list[dict]:
    rows = []
    for rep, seed, name, A in _bench_instances(spec):
        m, n = A.shape
        s1_grid = spec.s1_grid or list(range(1, m + 1))
        s2_grid = spec.s2_grid or list(range(1, n + 1))
        for k in spec.k_grid:
            full = kyfan(A, k)
            for s1 in s1_grid:
                for s2 in s2_grid:
                    if spec.spca and s1 != s2:
                        continue
                    if not (1 <= k <= min(s1, s2) and s1 <= m and s2 <= n):
                        log.info("skip %s s1=%s s2=%s k=%s: need k <= min(s1, s2) within shape",
                                 name, s1, s2, k)
                        continue
                    oracle_val = None
                    if spec.oracle:
                        try:
                            oracle_val = run_oracle(A, s1, s2, k, spec.spca,
                                                    cfg=BnBConfig(time_limit=spec.time_limit)).objective
                        except Exception as exc:  # logged, run continues
                            log.warning("oracle failed on %s (%s, %s, %s): %s", name, s1, s2, k, exc)
                    for algo in spec.algorithms:
                        try:
                            if algo == "exact":
                                cfg = BnBConfig(time_limit=spec.time_limit)
                                rep_ = (spca_branch_and_cut(SpcaInstance(A, s1, k), cfg) if spec.spca
                                        else ssvd_branch_and_cut(SsvdInstance(A, s1, s2, k), cfg))
                            else:
                                rep_ = run_algorithm(A, s1, s2, k, algo, spec.spca)
                        except Exception as exc:
                            log.warning("%s failed on %s (%s, %s, %s): %s", algo, name, s1, s2, k, exc)
                            continue
                        obj = rep_.objective
                        rows.append(_bench_row(
                            instance=name, rep=rep, seed=seed, algorithm=algo, m=m, n=n,
                            s1=s1, s2=s2, k=k, objective=obj, full_kyfan=full,
                            ratio_full=obj / full if full > 0 else 1.0,
                            oracle_objective=oracle_val,
                            ratio_oracle=(obj / oracle_val if oracle_val else None),
                            ratio_bound=ratio_bound(algo, A.shape, s1, s2, k, spec.spca),
                            nodes=rep_.nodes, cuts=rep_.cuts, status=rep_.status,
                            wall_seconds=rep_.wall_seconds,
                        ))
    if spec.output:
        write_csv(rows, spec.output, BENCH_FIELDS)
    return rows


# which algorithms each construction defeats
EXAMPLE_ALGOS = {
    "example1": ["frobenius"],
    "example2": ["rowcol"],
    "example3": ["spectral"],
    "example4": ["greedy", "local-search"],
    "example5": ["frobenius"],
    "example6": ["rowcol"],
    "example7": ["spectral"],
    "example8": ["greedy", "local-search"],
}


def example_rows() -> list[dict]:
    """Run each worst-case construction against the algorithms it defeats."""
    rows = []
    for kind, algos in EXAMPLE_ALGOS.items():
        g = generate(kind, DESK_PARAMS[kind])
        A = g.A
        m, n = A.shape
        b = g.budgets
        spca = g.spca
        s1 = b["s"] if spca else b["s1"]
        s2 = b["s"] if spca else b["s2"]
        k = b["k"]
        for algo in algos:
            if algo == "spectral" and g.top_pair is not None:
                # repeated top singular value: use the pair the worst case is stated for
                if spca:
                    rep_ = spca_select(SpcaInstance(A, s1, k), "spectral", top_vector=g.top_pair[0])
                else:
                    rep_ = select_spectral(SsvdInstance(A, s1, s2, k), top_pair=g.top_pair)
            else:
                rep_ = run_algorithm(A, s1, s2, k, algo, spca)
            full = kyfan(A, k)
            rows.append(_bench_row(
                instance=kind, rep=0, algorithm=algo, m=m, n=n, s1=s1, s2=s2, k=k,
                objective=rep_.objective, full_kyfan=full, ratio_full=rep_.objective / full,
                oracle_objective=g.known_optimum,
                ratio_oracle=rep_.objective / g.known_optimum,
                ratio_bound=ratio_bound(algo, A.shape, s1, s2, k, spca),
                nodes=rep_.nodes, cuts=rep_.cuts, status=rep_.status,
                wall_seconds=rep_.wall_seconds,
            ))
    return rows


def write_csv(rows: list[dict], path, fields) -> None:
    if path == "-":
        w = csv.DictWriter(sys.stdout, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return
    with Path(path).open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


# ------------------------------------------------------------------- scan

SCAN_FIELDS = ("frame", "path", "objective", "nuclear_norm", "rows", "cols")


def cmd_scan(inputs, s1, s2, k, algo, out=None, fmt=None) -> list[dict]:
    rows = []
    shape = None
    for idx, path in enumerate(inputs):
        A = load_matrix(path, fmt)
        if shape is None:
            shape = A.shape
        elif A.shape != shape:
            raise ValidationError(f"frame {idx} ({path}) has shape {A.shape}, expected {shape}")
        rep = run_algorithm(A, s1, s2, k, algo)
        sel = rep.selection.to_one_based()
        rows.append({
            "frame": idx,
            "path": str(path),
            "objective": repr(rep.objective),
            "nuclear_norm": repr(float(singular_values(A).sum())),
            "rows": " ".join(map(str, sel["rows"])),
            "cols": " ".join(map(str, sel["cols"])),
        })
    if out:
        write_csv(rows, out, SCAN_FIELDS)
    return rows


def parse_grid(text: str | None) -> list[int]:
    """'3:8' -> [3..8]; '1,2,4' -> [1, 2, 4]; None -> []."""
    if not text:
        return []
    try:
        if ":" in text:
            lo, hi = text.split(":")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise ValidationError(f"bad grid {text!r}") from None
