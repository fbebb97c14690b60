"""Sparse truncated SVD and sparse PCA: heuristics with ratio guarantees and exact solvers."""

from .errors import CapExceededError, NumericError, SsvdError, ValidationError
from .exact import (
    BnBConfig,
    brute_force_spca,
    brute_force_ssvd,
    frobenius_exact,
    spca_branch_and_cut,
    ssvd_branch_and_cut,
)
from .linalg import augment, hadamard, ky_fan_norm, psd_check, truncated_svd
from .model import (
    Selection,
    SolveReport,
    SpcaInstance,
    SsvdInstance,
    load_matrix,
    objective,
    save_matrix,
    save_report,
)
from .search import LocalSearchConfig, greedy_spca, greedy_ssvd, local_search_spca, local_search_ssvd
from .selection import select_frobenius, select_rowcol, select_spectral, spca_select

__all__ = [
    "BnBConfig", "CapExceededError", "LocalSearchConfig", "NumericError", "Selection",
    "SolveReport", "SpcaInstance", "SsvdError", "SsvdInstance", "ValidationError",
    "augment", "brute_force_spca", "brute_force_ssvd", "frobenius_exact", "greedy_spca",
    "greedy_ssvd", "hadamard", "ky_fan_norm", "load_matrix", "local_search_spca",
    "local_search_ssvd", "objective", "psd_check", "save_matrix", "save_report",
    "select_frobenius", "select_rowcol", "select_spectral", "spca_branch_and_cut",
    "spca_select", "ssvd_branch_and_cut", "truncated_svd",
]
