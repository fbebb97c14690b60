"""Proven approximation ratios, keyed by algorithm name."""

from __future__ import annotations

import math


def ssvd_ratio(algo: str, m: int, n: int, s1: int, s2: int, k: int) -> float:
    if algo == "frobenius":
        return 1.0 / math.sqrt(min(s1, s2))
    if algo == "rowcol":
        return 1.0 / math.sqrt(k * min(s1, s2))
    if algo == "spectral":
        return math.sqrt(s1 * s2) / (k * math.sqrt(m * n))
    if algo in ("greedy", "local-search"):
        return 1.0 / math.sqrt(k * s1 * s2)
    if algo in ("exact", "brute-force", "branch-and-cut"):
        return 1.0
    raise KeyError(algo)


def spca_ratio(algo: str, n: int, s: int, k: int) -> float:
    if algo == "frobenius":
        return 1.0 / math.sqrt(s)
    if algo == "rowcol":
        return 1.0 / math.sqrt(k * s)
    if algo == "spectral":
        return s / (k * n)
    if algo in ("greedy", "local-search"):
        return k / s
    if algo in ("exact", "brute-force", "branch-and-cut"):
        return 1.0
    raise KeyError(algo)
