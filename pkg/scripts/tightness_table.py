#!/usr/bin/env python3
"""Measured ratio vs proven ratio on the worst-case constructions (Examples 1-8)."""

import sys

from ssvd.cli.commands import example_rows


def main():
    rows = example_rows()
    print(f"{'instance':10s} {'algorithm':13s} {'value':>10s} {'optimum':>10s} {'measured':>10s} {'proven':>10s}")
    worst = 0.0
    for r in rows:
        measured, proven = float(r["ratio_oracle"]), float(r["ratio_bound"])
        worst = max(worst, abs(measured - proven) / proven)
        print(f"{r['instance']:10s} {r['algorithm']:13s} {float(r['objective']):10.6f} "
              f"{float(r['oracle_objective']):10.6f} {measured:10.6f} {proven:10.6f}")
    print(f"\nlargest relative deviation from the proven ratio: {worst:.2e}")
    return 0 if worst <= 1e-9 else 1


if __name__ == "__main__":
    sys.exit(main())
