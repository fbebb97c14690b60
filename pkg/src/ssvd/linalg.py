"""Dense kernels: truncated SVD, Ky Fan norms, Hadamard matrices, augmentation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ValidationError

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
# singular values below this fraction of the largest are set to exactly zero
CLAMP_RTOL = 1e-12
MAX_HADAMARD_ORDER = 1 << 14


@dataclass(frozen=True)
class SpectralResult:
    singular_values: np.ndarray  # (k,) nonincreasing
    left_vectors: np.ndarray  # (m, k) orthonormal columns
    right_vectors: np.ndarray  # (n, k) orthonormal columns


def as_matrix(B, name: str = "matrix") -> np.ndarray:
    """Validate and return a finite 2-d float64 array (copy)."""
    arr = np.array(B, dtype=float, copy=True)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValidationError(f"{name} must be a nonempty 2-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite entries")
    return arr


def _clamp(sv: np.ndarray) -> np.ndarray:
    sv = np.asarray(sv, dtype=float).copy()
    if sv.size and sv[0] > 0:
        sv[sv < CLAMP_RTOL * sv[0]] = 0.0
    else:
        sv[:] = 0.0
    return sv


def _complete(Q: np.ndarray, dim: int) -> np.ndarray:
    """Extend orthonormal columns Q (dim x r) to a dim x dim orthonormal basis."""
    r = Q.shape[1]
    if r == dim:
        return Q
    M = np.hstack([Q, np.eye(dim)])
    full, _ = np.linalg.qr(M)
    full = full[:, :dim]
    full[:, :r] = Q
    # re-orthogonalize the completion against Q for safety
    rest = full[:, r:] - Q @ (Q.T @ full[:, r:])
    rest, _ = np.linalg.qr(rest)
    return np.hstack([Q, rest[:, : dim - r]])


def jacobi_svd(B, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Full thin SVD by one-sided (Hestenes) Jacobi rotations.

    Returns (U, s, Vt) with s nonincreasing, like numpy's thin SVD.  Raises
    NumericError if a sweep still rotates after `max_sweeps` sweeps.
    """
    A = as_matrix(B)
    transposed = A.shape[0] < A.shape[1]
    if transposed:
        A = A.T
    m, n = A.shape
    W = A.copy()
    V = np.eye(n)
    # columns whose squared norm falls below this are numerically zero
    floor = (np.finfo(float).eps * np.linalg.norm(A)) ** 2
    converged = False
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                wp, wq = W[:, p], W[:, q]
                alpha = wp @ wp
                beta = wq @ wq
                gamma = wp @ wq
                if alpha <= floor or beta <= floor or abs(gamma) <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                W[:, [p, q]] = np.column_stack([c * wp - s * wq, s * wp + c * wq])
                V[:, [p, q]] = np.column_stack(
                    [c * V[:, p] - s * V[:, q], s * V[:, p] + c * V[:, q]]
                )
        if not rotated:
            converged = True
            break
    if not converged:
        raise NumericError(f"Jacobi SVD did not converge in {max_sweeps} sweeps")
    sv = np.linalg.norm(W, axis=0)
    order = np.argsort(-sv, kind="stable")
    sv, W, V = sv[order], W[:, order], V[:, order]
    sv = _clamp(sv)
    r = int(np.count_nonzero(sv))
    U = np.zeros((m, n))
    U[:, :r] = W[:, :r] / sv[:r]
    U = _complete(U[:, :r], m)[:, :n]
    if transposed:
        return V, sv, U.T
    return U, sv, V.T


def _svd(A: np.ndarray, method: str):
    if method == "lapack":
        try:
            U, s, Vt = np.linalg.svd(A, full_matrices=False)
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"SVD failed: {exc}") from exc
        return U, _clamp(s), Vt
    if method == "jacobi":
        return jacobi_svd(A)
    raise ValidationError(f"unknown SVD method {method!r}")


def truncated_svd(B, k: int, method: str = "lapack") -> SpectralResult:
    """Top-k singular triplets of B.

    The full thin SVD is computed (LAPACK Golub-Kahan by default, or the
    one-sided Jacobi kernel) and truncated.
    """
    A = as_matrix(B)
    if not 1 <= k <= min(A.shape):
        raise ValidationError(f"k={k} outside [1, {min(A.shape)}]")
    U, s, Vt = _svd(A, method)
    return SpectralResult(s[:k].copy(), U[:, :k].copy(), Vt[:k].T.copy())


def singular_values(B) -> np.ndarray:
    """All singular values, nonincreasing, small ones clamped to zero."""
    A = np.asarray(B, dtype=float)
    if A.size == 0:
        return np.zeros(0)
    try:
        s = np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD failed: {exc}") from exc
    return _clamp(s)


def kyfan(B, k: int) -> float:
    """Ky Fan k-norm with k clamped to the matrix size; 0 for empty input."""
    s = singular_values(B)
    return float(s[: max(0, k)].sum())


def ky_fan_norm(B, k: int) -> float:
    """Sum of the k largest singular values of B."""
    A = as_matrix(B)
    if not 1 <= k <= min(A.shape):
        raise ValidationError(f"k={k} outside [1, {min(A.shape)}]")
    return kyfan(A, k)


def kyfan_psd(B, k: int) -> float:
    """Ky Fan k-norm of a symmetric PSD matrix via its eigenvalues."""
    B = np.asarray(B, dtype=float)
    if B.size == 0:
        return 0.0
    w = np.linalg.eigvalsh(B)[::-1]
    w = np.maximum(w, 0.0)
    return float(w[: max(0, k)].sum())


def hadamard(t: int, max_order: int = MAX_HADAMARD_ORDER) -> np.ndarray:
    """Sylvester Hadamard matrix H(t): H(1) = [1], H(t+1) = [[H, H], [H, -H]].

    H(t) has order 2**(t-1).
    """
    if int(t) != t or t < 1:
        raise ValidationError(f"hadamard index must be a positive integer, got {t}")
    order = 1 << (int(t) - 1)
    if order > max_order:
        raise ValidationError(f"Hadamard order {order} exceeds limit {max_order}")
    H = np.ones((1, 1))
    for _ in range(int(t) - 1):
        H = np.block([[H, H], [H, -H]])
    return H


def hadamard_of_order(order: int, max_order: int = MAX_HADAMARD_ORDER) -> np.ndarray:
    """Sylvester Hadamard matrix of the given power-of-two order."""
    if order < 1 or order & (order - 1):
        raise ValidationError(f"Hadamard order must be a power of two, got {order}")
    return hadamard(order.bit_length(), max_order)


def augment(A) -> tuple[np.ndarray, float]:
    """Return ([[0, A], [A.T, 0]] + sigma_1(A) I, sigma_1(A))."""
    A = as_matrix(A)
    m, n = A.shape
    shift = float(singular_values(A)[0])
    out = np.zeros((m + n, m + n))
    out[:m, m:] = A
    out[m:, :m] = A.T
    out[np.diag_indices(m + n)] += shift
    return out, shift


def psd_check(B, tol: float = 1e-8) -> bool:
    """True iff B is symmetric within tol and lambda_min >= -tol * max(1, lambda_max)."""
    A = as_matrix(B)
    if A.shape[0] != A.shape[1]:
        raise ValidationError(f"psd_check needs a square matrix, got {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A))))
    if np.max(np.abs(A - A.T)) > tol * scale:
        return False
    w = np.linalg.eigvalsh((A + A.T) / 2)
    return bool(w[0] >= -tol * max(1.0, float(w[-1])))
