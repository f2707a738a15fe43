"""Compile det(Sigma_SS) * det(Sigma_TT) into a multilinear spin polynomial.

The masking matrix K keeps Sigma_ij only when i and j fall on the same side of
the partition, with k_ij = (s_i s_j + 1) / 2. The determinant of the masked
matrix equals the product of the two block determinants, and expanding it with
the Leibniz formula gives a polynomial in the spins.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import IndexOutOfRange, ProblemTooLarge
from .linalg import lu_determinant
from .model import (
    CovarianceMatrix,
    Monomial,
    SensorSelection,
    SpinPolynomial,
    as_spins,
)

EXPANSION_LIMIT = 10
DROP_RTOL = 1e-12


def masking_value(s: Sequence[int], i: int, j: int) -> int:
    """k_ij for spins ``s`` (0-based indices): 1 on the same side, else 0."""
    spins = as_spins(s)
    n = len(spins)
    for idx in (i, j):
        if not 0 <= idx < n:
            raise IndexOutOfRange(f"index {idx} outside 0..{n - 1}")
    return (spins[i] * spins[j] + 1) // 2


def masking_matrix(sel: SensorSelection) -> np.ndarray:
    side = np.array(sel.spins())
    return ((np.outer(side, side) + 1) // 2).astype(np.int8)


def masked_matrix(cov: CovarianceMatrix, sel: SensorSelection) -> np.ndarray:
    if sel.n != cov.n:
        raise IndexOutOfRange(f"selection over {sel.n} sensors, covariance over {cov.n}")
    return cov.entries * masking_matrix(sel)


def masked_determinant(cov: CovarianceMatrix, sel: SensorSelection) -> float:
    """det of the masked covariance, computed numerically by LU."""
    return lu_determinant(masked_matrix(cov, sel))


def reduce_monomial(indices: Iterable[int]) -> Monomial:
    """Drop every pair of repeated spins (s_i**2 = 1); keep odd-count indices."""
    odd: set[int] = set()
    for i in indices:
        odd ^= {i}
    return tuple(sorted(odd))


def _mask_to_monomial(mask: int) -> Monomial:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def expand_objective(cov: CovarianceMatrix, limit: int = EXPANSION_LIMIT) -> SpinPolynomial:
    """Leibniz expansion of the masked determinant as a spin polynomial.

    Permutations are generated by in-place swaps so the parity flips with
    every nontrivial swap, and a prefix whose running product is zero is
    pruned. A position j with image p_j != j contributes the factor
    (1 + s_j s_{p_j}) / 2; fixed points contribute 1. Products of spin pairs
    are tracked as XOR bitmasks, which applies s**2 = 1 for free, and the
    coefficient of every monomial is accumulated in a dense 2**n table.
    """
    n = cov.n
    if n > limit:
        raise ProblemTooLarge(f"expansion enumerates {n}! permutations; limit is n <= {limit}")
    sigma = cov.entries
    acc = np.zeros(1 << n)
    perm = list(range(n))

    def walk(row: int, sign: float, coef: float, monos: np.ndarray) -> None:
        if row == n:
            np.add.at(acc, monos, sign * coef)
            return
        for i in range(row, n):
            perm[row], perm[i] = perm[i], perm[row]
            col = perm[row]
            entry = sigma[row, col]
            if entry != 0.0:
                flipped = sign if i == row else -sign
                if col == row:
                    walk(row + 1, flipped, coef * entry, monos)
                else:
                    pair = (1 << row) | (1 << col)
                    walk(row + 1, flipped, coef * entry * 0.5, np.concatenate((monos, monos ^ pair)))
            perm[row], perm[i] = perm[i], perm[row]

    walk(0, 1.0, 1.0, np.zeros(1, dtype=np.int64))

    cutoff = DROP_RTOL * float(np.max(np.abs(acc), initial=0.0))
    terms = {_mask_to_monomial(m): float(c) for m, c in enumerate(acc) if abs(c) > cutoff}
    return SpinPolynomial(n, terms)
