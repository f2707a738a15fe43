"""Small dense factorizations used for validation and masked determinants."""
from __future__ import annotations

import numpy as np


def lu_determinant(a) -> float:
    """Determinant by LU factorization with partial pivoting.

    The sign flips once per row interchange. A 0x0 matrix has determinant 1.
    """
    lu = np.array(a, dtype=float, copy=True)
    if lu.ndim != 2 or lu.shape[0] != lu.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {lu.shape}")
    n = lu.shape[0]
    det = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if lu[p, k] == 0.0:
            return 0.0
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            det = -det
        pivot = lu[k, k]
        det *= pivot
        if k + 1 < n:
            factors = lu[k + 1:, k] / pivot
            lu[k + 1:, k + 1:] -= np.outer(factors, lu[k, k + 1:])
    return float(det)


def cholesky_pivots(a) -> np.ndarray:
    """Squared Cholesky pivots d_j of a symmetric matrix.

    Factorization stops at the first pivot that is not safely positive
    (at most n * eps * a_jj, i.e. zero up to rounding); that pivot is returned
    as the last element. A matrix passes iff n pivots come back and the last
    one exceeds its threshold.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    low = np.zeros_like(a)
    pivots = []
    for j in range(n):
        d = a[j, j] - low[j, :j] @ low[j, :j]
        pivots.append(d)
        if not d > _pivot_floor(a, j):
            break
        low[j, j] = np.sqrt(d)
        if j + 1 < n:
            low[j + 1:, j] = (a[j + 1:, j] - low[j + 1:, :j] @ low[j, :j]) / low[j, j]
    return np.array(pivots)


def _pivot_floor(a: np.ndarray, j: int) -> float:
    return a.shape[0] * np.finfo(float).eps * abs(a[j, j])


def is_positive_definite(a) -> bool:
    a = np.asarray(a, dtype=float)
    pivots = cholesky_pivots(a)
    return len(pivots) == a.shape[0] and pivots[-1] > _pivot_floor(a, len(pivots) - 1)
