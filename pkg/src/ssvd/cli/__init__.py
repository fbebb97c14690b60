"""Command-line interface: ``ssvd gen | solve | exact | bench | scan``.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 time limit
reached (an incumbent is still reported).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .._util import THREADS_ENV
from ..errors import NumericError, SsvdError, ValidationError
from .commands import (
    ALGOS,
    BENCH_FIELDS,
    BenchSpec,
    cmd_bench,
    cmd_exact,
    cmd_gen,
    cmd_scan,
    cmd_solve,
    example_rows,
    parse_grid,
    write_csv,
)
from .generators import GENERATORS

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_TIMEOUT = 0, 2, 3, 4

log = logging.getLogger("ssvd")


def _param(text: str):
    key, sep, val = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key, json.loads(val)
    except json.JSONDecodeError:
        return key, val


def _add_budgets(p, spca_flag=True):
    p.add_argument("--input", "-i", required=True, help="matrix file (.csv or .mtx)")
    p.add_argument("--format", choices=("csv", "matrixmarket"), help="override format inferred from suffix")
    p.add_argument("--s1", type=int, required=True, help="row budget (or s for --spca)")
    p.add_argument("--s2", type=int, help="column budget (defaults to s1)")
    p.add_argument("-k", type=int, required=True, help="Ky Fan order")
    if spca_flag:
        p.add_argument("--spca", action="store_true", help="principal submatrices of a PSD input")
    p.add_argument("--json", dest="json_out", metavar="PATH", help="write the report as JSON ('-' for stdout)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="more logging")
    ap = argparse.ArgumentParser(prog="ssvd", description="Sparse truncated SVD and sparse PCA.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a test instance")
    g.add_argument("generator", choices=sorted(GENERATORS))
    g.add_argument("-p", "--param", action="append", type=_param, default=[], metavar="KEY=VALUE")
    g.add_argument("--seed", type=int)
    g.add_argument("--out", "-o", required=True, help="output matrix (.csv or .mtx); sidecar goes to <stem>.json")

    s = sub.add_parser("solve", parents=[common], help="run a heuristic")
    _add_budgets(s)
    s.add_argument("--algo", choices=ALGOS, default="local-search")
    s.add_argument("--delta", type=float, default=1e-6, help="local-search improvement factor")
    s.add_argument("--seed", type=int, help="random warm start for local search")
    s.add_argument("--threads", type=int, help=f"worker threads (default ${THREADS_ENV} or 1)")
    s.add_argument("--oracle", action="store_true", help="also compute the optimum and the ratio")
    s.add_argument("--time-limit", type=float, help="time limit for the --oracle exact solve")

    e = sub.add_parser("exact", parents=[common], help="solve to optimality")
    _add_budgets(e)
    e.add_argument("--brute", action="store_true", help="enumerate instead of branch-and-cut")
    e.add_argument("--time-limit", type=float)
    e.add_argument("--node-cap", type=int)

    b = sub.add_parser("bench", parents=[common], help="benchmark sweep to long-format CSV")
    b.add_argument("--spec", help="JSON file with BenchSpec fields")
    b.add_argument("--generator", choices=sorted(GENERATORS))
    b.add_argument("-p", "--param", action="append", type=_param, default=[], metavar="KEY=VALUE")
    b.add_argument("--input", help="benchmark a fixed matrix file instead of a generator")
    b.add_argument("--seed", type=int)
    b.add_argument("-k", dest="k_grid", help="k grid, e.g. 3 or 1:3 or 1,2")
    b.add_argument("--s1", dest="s1_grid", help="row budget grid")
    b.add_argument("--s2", dest="s2_grid", help="column budget grid")
    b.add_argument("--algos", help="comma-separated algorithms (add 'exact' for branch-and-cut)")
    b.add_argument("--reps", type=int)
    b.add_argument("--spca", action="store_true", default=None)
    b.add_argument("--no-oracle", dest="oracle", action="store_false", default=None)
    b.add_argument("--time-limit", type=float)
    b.add_argument("--examples", action="store_true", help="run the worst-case constructions")
    b.add_argument("--out", "-o", default="-", help="CSV output (default stdout)")

    c = sub.add_parser("scan", parents=[common], help="per-frame SSVD over a sequence of matrices")
    c.add_argument("--inputs", nargs="+", required=True)
    c.add_argument("--format", choices=("csv", "matrixmarket"))
    c.add_argument("--s1", type=int, required=True)
    c.add_argument("--s2", type=int)
    c.add_argument("-k", type=int, required=True)
    c.add_argument("--algo", choices=ALGOS, default="local-search")
    c.add_argument("--out", "-o", default="-")
    return ap


def _bench_spec(args) -> BenchSpec:
    data = {}
    if args.spec:
        try:
            data = json.loads(Path(args.spec).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read bench spec {args.spec}: {exc}") from None
    overrides = {
        "generator": args.generator,
        "input": args.input,
        "seed": args.seed,
        "repetitions": args.reps,
        "spca": args.spca,
        "oracle": args.oracle,
        "time_limit": args.time_limit,
    }
    if args.param:
        overrides["params"] = dict(args.param)
    if args.algos:
        overrides["algorithms"] = [a.strip() for a in args.algos.split(",") if a.strip()]
    for key in ("k_grid", "s1_grid", "s2_grid"):
        text = getattr(args, key)
        if text:
            overrides[key] = parse_grid(text)
    data.update({k: v for k, v in overrides.items() if v is not None})
    spec = BenchSpec.from_dict(data)
    bad = [a for a in spec.algorithms if a not in ALGOS + ("exact",)]
    if bad:
        raise ValidationError(f"unknown algorithms {bad}")
    return spec


def _run(args) -> int:
    if args.command == "gen":
        cmd_gen(args.generator, dict(args.param), args.seed, args.out)
        return EXIT_OK
    if args.command in ("solve", "exact"):
        s2 = args.s1 if args.s2 is None else args.s2
        if args.command == "solve":
            cmd_solve(args.input, args.s1, s2, args.k, args.algo, args.spca, args.delta, args.seed,
                      args.threads, args.oracle, args.json_out, args.format, args.time_limit)
            return EXIT_OK
        rep = cmd_exact(args.input, args.s1, s2, args.k, args.spca, args.brute, args.time_limit,
                        args.node_cap, args.json_out, args.format)
        return EXIT_TIMEOUT if rep.status == "time_limit" else EXIT_OK
    if args.command == "bench":
        if args.examples:
            write_csv(example_rows(), args.out, BENCH_FIELDS)
            return EXIT_OK
        spec = _bench_spec(args)
        spec.output = args.out
        cmd_bench(spec)
        return EXIT_OK
    if args.command == "scan":
        s2 = args.s1 if args.s2 is None else args.s2
        cmd_scan(args.inputs, args.s1, s2, args.k, args.algo, args.out, args.format)
        return EXIT_OK
    raise ValidationError(f"unknown command {args.command}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(message)s", stream=sys.stderr)
    if getattr(args, "threads", None) is not None and args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return _run(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericError, ArithmeticError, SsvdError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_INPUT", "EXIT_NUMERIC", "EXIT_TIMEOUT"]
