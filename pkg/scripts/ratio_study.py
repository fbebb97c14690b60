#!/usr/bin/env python3
"""Average and worst observed ratio alg / optimum on random instances.

Shows how far the heuristics sit above their worst-case guarantees on typical
Gaussian (SSVD) and Gram (SPCA) inputs.
"""

import argparse
from collections import defaultdict

import numpy as np

from ssvd.cli.commands import ALGOS, ratio_bound, run_algorithm, run_oracle


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=30)
    ap.add_argument("--m", type=int, default=8)
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--s", type=int, default=4)
    ap.add_argument("-k", type=int, default=2)
    ap.add_argument("--spca", action="store_true")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    ratios = defaultdict(list)
    for _ in range(args.instances):
        if args.spca:
            X = rng.standard_normal((args.n, args.n))
            A = X.T @ X
            A = (A + A.T) / 2
        else:
            A = rng.standard_normal((args.m, args.n))
        opt = run_oracle(A, args.s, args.s, args.k, args.spca).objective
        for algo in ALGOS:
            val = run_algorithm(A, args.s, args.s, args.k, algo, args.spca).objective
            ratios[algo].append(val / opt)

    print(f"{'algorithm':13s} {'mean':>8s} {'worst':>8s} {'proven':>8s}")
    for algo in ALGOS:
        r = np.array(ratios[algo])
        proven = ratio_bound(algo, A.shape, args.s, args.s, args.k, args.spca)
        print(f"{algo:13s} {r.mean():8.4f} {r.min():8.4f} {proven:8.4f}")


if __name__ == "__main__":
    main()
