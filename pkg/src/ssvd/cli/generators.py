"""Instance generators: worst-case constructions, Gaussian and PSD Gram matrices.

Each generator returns a `Generated` record holding the matrix, the budgets it
was built for, and (for the constructions) the known optimum and an optimal
selection.  Some constructions are laid out with rows/columns permuted so that
the fixed smallest-index tie-breaking of the heuristics lands on the adversarial
choices the worst-case argument relies on; a permutation leaves the optimum
unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError
from ..linalg import hadamard, hadamard_of_order


@dataclass
class Generated:
    kind: str
    A: np.ndarray
    params: dict
    seed: int | None = None
    budgets: dict = field(default_factory=dict)
    known_optimum: float | None = None
    known_selection: tuple | None = None  # (rows, cols), 0-based
    spca: bool = False
    # a valid top singular pair (u, v) for constructions whose top singular
    # value is repeated; the worst case is stated for this pair
    top_pair: tuple | None = None

    def sidecar(self) -> dict:
        d = {"generator": self.kind, "params": self.params, "seed": self.seed}
        if self.budgets:
            d["budgets"] = self.budgets
        if self.known_optimum is not None:
            d["known_optimum"] = self.known_optimum
        if self.known_selection is not None:
            rows, cols = self.known_selection
            d["known_selection"] = {
                "rows": [int(i) + 1 for i in rows],
                "cols": [int(j) + 1 for j in cols],
            }
        return d


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValidationError(f"invalid parameters: {msg}")


def _pow2(x: int) -> bool:
    return x >= 1 and not (x & (x - 1))


def _block_indicator(rows: int, blocks: int) -> np.ndarray:
    """rows x blocks matrix whose column i is the indicator of the i-th equal block."""
    P = np.zeros((rows, blocks))
    size = rows // blocks
    for i in range(blocks):
        P[i * size : (i + 1) * size, i] = 1.0
    return P


def _a3(s1: int, s2: int, k: int) -> np.ndarray:
    P = _block_indicator(s1, k)
    H = hadamard_of_order(s2)
    return P @ H[:, :k].T


def example1(k: int, s1: int, s2: int) -> Generated:
    """[[1, 0], [0, D]] with D a scaled partial identity; Frobenius mass ties."""
    _require(k == s1, "need k = s1")
    _require(s1 < s2, "need s1 < s2")
    m, n = 2 * s1, 2 * s2
    A = np.zeros((m, n))
    A[:s1, :s2] = 1.0
    c = s1 * math.sqrt(s2) / k
    for i in range(k):
        A[s1 + i, s2 + i] = c
    rows = tuple(range(s1, 2 * s1))
    cols = tuple(range(s2, 2 * s2))
    return Generated("example1", A, {"k": k, "s1": s1, "s2": s2},
                     budgets={"s1": s1, "s2": s2, "k": k},
                     known_optimum=s1 * math.sqrt(s2), known_selection=(rows, cols))


def example2(k: int, c: int, t: int) -> Generated:
    """Block construction defeating the row/column scan.

    Row blocks are laid out (zero rows, A2 rows, A1/A3 rows) and column blocks
    (zero columns, A1 columns, A2/A3 columns).
    """
    _require(k >= 1 and c >= 1 and t >= 1, "k, c, t must be positive")
    s1, s2 = c * k, 2**t
    _require(min(s1, s2) >= k, "need min(s1, s2) >= k")
    m, n = (2 + s2) * s1, (2 + s1) * s2
    A = np.zeros((m, n))
    r0, r2, r1 = 0, s1, s1 + s1 * s2  # row block offsets
    c0, c1, c2 = 0, s2, s2 + s1 * s2  # column block offsets
    for i in range(s1):  # A1: row i has ones in column block i
        A[r1 + i, c1 + i * s2 : c1 + (i + 1) * s2] = 1.0
    for j in range(s2):  # A2: column j has ones in row block j
        A[r2 + j * s1 : r2 + (j + 1) * s1, c2 + j] = 1.0
    A[r1 : r1 + s1, c2 : c2 + s2] = _a3(s1, s2, k)
    rows = tuple(range(r1, r1 + s1))
    cols = tuple(range(c2, c2 + s2))
    return Generated("example2", A, {"k": k, "c": c, "t": t},
                     budgets={"s1": s1, "s2": s2, "k": k},
                     known_optimum=math.sqrt(k * s1 * s2), known_selection=(rows, cols))


def example3(k: int, t1: int, t2: int) -> Generated:
    """Orthogonal rank-one sum whose nonzero singular values all coincide."""
    s1, s2 = 2**t1, 2**t2
    _require(k >= 1, "k must be positive")
    _require(min(s1, s2) >= k + 1, "need min(s1, s2) >= k + 1")
    m, n = 2 * s1, 2 * s2
    H, F = hadamard_of_order(s1), hadamard_of_order(s2)
    scale = math.sqrt(m * n / (s1 * s2))
    A = np.zeros((m, n))
    for i in range(k):
        u = np.concatenate([np.zeros(s1), H[:, i]])
        v = np.concatenate([np.zeros(s2), F[:, i]])
        A += scale * np.outer(u, v)
    u = np.concatenate([np.ones(s1), H[:, k]])
    v = np.concatenate([np.ones(s2), F[:, k]])
    A += np.outer(u, v)
    rows = tuple(range(s1, m))
    cols = tuple(range(s2, n))
    return Generated("example3", A, {"k": k, "t1": t1, "t2": t2},
                     budgets={"s1": s1, "s2": s2, "k": k},
                     known_optimum=k * math.sqrt(m * n), known_selection=(rows, cols),
                     top_pair=(u / math.sqrt(m), v / math.sqrt(n)))


def example4(k: int, c: int, t: int) -> Generated:
    """An isolated unit entry that traps greedy away from the A3 block."""
    _require(k >= 1 and c >= 1 and t >= 1, "k, c, t must be positive")
    s1, s2 = c * k, 2**t
    _require(min(s1, s2) >= k, "need min(s1, s2) >= k")
    m, n = 2 * s1, 2 * s2
    A = np.zeros((m, n))
    A[0, 0] = 1.0
    A[s1:, s2:] = _a3(s1, s2, k)
    rows = tuple(range(s1, m))
    cols = tuple(range(s2, n))
    return Generated("example4", A, {"k": k, "c": c, "t": t},
                     budgets={"s1": s1, "s2": s2, "k": k},
                     known_optimum=math.sqrt(k * s1 * s2), known_selection=(rows, cols))


def example5(s: int) -> Generated:
    """blockdiag(1_{s,s}, sqrt(s) I_s) with k = s."""
    _require(s >= 1, "s must be positive")
    n = 2 * s
    A = np.zeros((n, n))
    A[:s, :s] = 1.0
    A[np.arange(s, n), np.arange(s, n)] = math.sqrt(s)
    S = tuple(range(s, n))
    return Generated("example5", A, {"s": s}, budgets={"s": s, "k": s},
                     known_optimum=s * math.sqrt(s), known_selection=(S, S), spca=True)


def example6(s: int) -> Generated:
    """e_1 e_1^T plus the identity on the last s coordinates, k = s.

    Indices are symmetrically permuted so the s - 1 zero coordinates come first,
    followed by the isolated one and then the identity block.
    """
    _require(s >= 2, "need s >= 2")
    n = 2 * s
    d = np.zeros(n)
    d[s - 1 :] = 1.0
    S = tuple(range(s, n))
    return Generated("example6", np.diag(d), {"s": s}, budgets={"s": s, "k": s},
                     known_optimum=float(s), known_selection=(S, S), spca=True)


def example7(k: int, t: int) -> Generated:
    """PSD orthogonal rank-one sum whose nonzero eigenvalues all equal n."""
    s = 2**t
    _require(k >= 1, "k must be positive")
    _require(s >= k + 1, "need s >= k + 1")
    n = 2 * s
    H = hadamard_of_order(s)
    A = np.zeros((n, n))
    for i in range(k):
        u = np.concatenate([np.zeros(s), H[:, i]])
        A += (n / s) * np.outer(u, u)
    u = np.concatenate([np.ones(s), H[:, k]])
    A += np.outer(u, u)
    S = tuple(range(s, n))
    top = u / math.sqrt(n)
    return Generated("example7", A, {"k": k, "t": t}, budgets={"s": s, "k": k},
                     known_optimum=float(k * n), known_selection=(S, S), spca=True,
                     top_pair=(top, top))


def example8(s: int, k: int) -> Generated:
    """blockdiag(I_s, 1_{s,s}); greedy and swaps stay on the identity block."""
    _require(1 <= k <= s, "need 1 <= k <= s")
    n = 2 * s
    A = np.zeros((n, n))
    A[np.arange(s), np.arange(s)] = 1.0
    A[s:, s:] = 1.0
    S = tuple(range(s, n))
    return Generated("example8", A, {"s": s, "k": k}, budgets={"s": s, "k": k},
                     known_optimum=float(s), known_selection=(S, S), spca=True)


def gaussian(m: int, n: int, seed: int = 0) -> Generated:
    _require(m >= 1 and n >= 1, "m, n must be positive")
    rng = np.random.default_rng(seed)
    return Generated("gaussian", rng.standard_normal((m, n)), {"m": m, "n": n}, seed=seed)


def psd_gram(n: int, rank: int | None = None, seed: int = 0) -> Generated:
    _require(n >= 1, "n must be positive")
    r = n if rank is None else rank
    _require(r >= 1, "rank must be positive")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((r, n))
    G = X.T @ X
    G = (G + G.T) / 2
    return Generated("psd-gram", G, {"n": n, "rank": r}, seed=seed, spca=True)


def hadamard_matrix(t: int) -> Generated:
    return Generated("hadamard", hadamard(t), {"t": t})


GENERATORS = {
    "example1": example1,
    "example2": example2,
    "example3": example3,
    "example4": example4,
    "example5": example5,
    "example6": example6,
    "example7": example7,
    "example8": example8,
    "gaussian": gaussian,
    "psd-gram": psd_gram,
    "hadamard": hadamard_matrix,
}

# desk-scale parameters used by tests and the bench
DESK_PARAMS = {
    "example1": {"k": 3, "s1": 3, "s2": 4},
    "example2": {"k": 2, "c": 2, "t": 2},
    "example3": {"k": 2, "t1": 2, "t2": 2},
    "example4": {"k": 2, "c": 2, "t": 2},
    "example5": {"s": 3},
    "example6": {"s": 3},
    "example7": {"k": 1, "t": 1},
    "example8": {"s": 3, "k": 2},
}


def generate(kind: str, params: dict | None = None, seed: int | None = None) -> Generated:
    if kind not in GENERATORS:
        raise ValidationError(f"unknown generator {kind!r}; choose from {sorted(GENERATORS)}")
    params = dict(params or {})
    fn = GENERATORS[kind]
    if kind in {"gaussian", "psd-gram"}:
        params.setdefault("seed", 0 if seed is None else seed)
    try:
        g = fn(**params)
    except TypeError as exc:
        raise ValidationError(f"bad parameters for {kind}: {exc}") from None
    if seed is not None:
        g.seed = seed
    return g
