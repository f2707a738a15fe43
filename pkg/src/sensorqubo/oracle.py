"""Ground-truth computations that never touch the Leibniz expansion.

Block determinants here come from ``numpy.linalg`` on explicit submatrices,
so they give a second, independent route to every value the expansion and
masked-LU paths produce.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable

import numpy as np

from .errors import InvalidCardinality, ProblemTooLarge
from .model import CovarianceMatrix, SensorSelection, SpinAssignment, SpinPolynomial

BRUTE_FORCE_LIMIT = 24
INTERPOLATION_LIMIT = 20
TIE_RTOL = 1e-12

_ENTROPY_PER_DIM = 0.5 * (1.0 + math.log(2.0 * math.pi))


def block_determinant(cov: CovarianceMatrix, indices: Iterable[int]) -> float:
    idx = sorted(indices)
    if not idx:
        return 1.0
    return float(np.linalg.det(cov.submatrix(idx)))


def entropy(cov: CovarianceMatrix, subset: Iterable[int] | None = None) -> float:
    """Differential entropy in nats of the Gaussian marginal over ``subset``.

    ``subset=None`` means all sensors; an empty subset has entropy 0.
    """
    idx = range(cov.n) if subset is None else sorted(subset)
    idx = list(idx)
    if not idx:
        return 0.0
    _, logdet = np.linalg.slogdet(cov.submatrix(idx))
    return 0.5 * float(logdet) + len(idx) * _ENTROPY_PER_DIM


def subset_objective(cov: CovarianceMatrix, sel: SensorSelection) -> float:
    """det(Sigma_SS) * det(Sigma_TT), with det of an empty block equal to 1."""
    return block_determinant(cov, sel.selected) * block_determinant(cov, sel.unselected)


def mutual_information(cov: CovarianceMatrix, sel: SensorSelection) -> float:
    """I(S; T) in nats."""
    if not sel.selected or not sel.unselected:
        return 0.0
    _, ld_s = np.linalg.slogdet(cov.submatrix(sel.selected))
    _, ld_t = np.linalg.slogdet(cov.submatrix(sel.unselected))
    _, ld_x = np.linalg.slogdet(cov.entries)
    return 0.5 * float(ld_s + ld_t - ld_x)


@dataclass(frozen=True)
class BruteForceResult:
    value: float
    maximizers: tuple[SensorSelection, ...]
    k: int | None = None

    def partitions(self) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
        return {sel.partition() for sel in self.maximizers}


def _batched_dets(cov: CovarianceMatrix, blocks: np.ndarray) -> np.ndarray:
    if blocks.shape[1] == 0:
        return np.ones(blocks.shape[0])
    sub = cov.entries[blocks[:, :, None], blocks[:, None, :]]
    return np.linalg.det(sub)


def brute_force_optimum(cov: CovarianceMatrix, k: int | None = None,
                        chunk: int = 1 << 16) -> BruteForceResult:
    """Every maximizer of det(Sigma_SS) det(Sigma_TT) by full enumeration.

    Without ``k`` the maximizers are reported as partitions: of each
    complementary pair only the selection returned by
    :meth:`SensorSelection.partition` (larger block first) is kept. With ``k``
    only subsets of exactly that size are scanned and reported as-is.
    """
    n = cov.n
    if n > BRUTE_FORCE_LIMIT:
        raise ProblemTooLarge(f"brute force over 2**{n} subsets; limit is n <= {BRUTE_FORCE_LIMIT}")
    if k is not None and not 0 <= k <= n:
        raise InvalidCardinality(f"k={k} outside 0..{n}")

    sizes = range(n + 1) if k is None else [k]
    everyone = set(range(n))
    best = -math.inf
    candidates: list[tuple[float, tuple[int, ...]]] = []
    for size in sizes:
        it = combinations(range(n), size)
        while batch := [c for _, c in zip(range(chunk), it)]:
            sel = np.array(batch, dtype=int).reshape(len(batch), size)
            rest = np.array([sorted(everyone.difference(c)) for c in batch], dtype=int)
            rest = rest.reshape(len(batch), n - size)
            values = _batched_dets(cov, sel) * _batched_dets(cov, rest)
            best = max(best, float(values.max()))
            floor = best - TIE_RTOL * max(1.0, abs(best))
            candidates = [vc for vc in candidates if vc[0] >= floor]
            candidates.extend((float(values[i]), batch[i]) for i in np.flatnonzero(values >= floor))

    selections = [SensorSelection(n, frozenset(c)) for _, c in candidates]
    if k is None:
        canon = {s.partition()[0] for s in selections}
        selections = [SensorSelection(n, frozenset(b)) for b in canon]
    selections.sort(key=lambda s: (-len(s.selected), sorted(s.selected)))
    return BruteForceResult(best, tuple(selections), k)


def all_spin_assignments(n: int) -> np.ndarray:
    """All 2**n spin vectors, row b has s_i = -1 exactly where bit i of b is set."""
    b = np.arange(1 << n)[:, None]
    return 1 - 2 * ((b >> np.arange(n)) & 1)


def walsh_hadamard(values: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform along a length-2**n axis."""
    h = np.array(values, dtype=float, copy=True)
    size = h.shape[0]
    step = 1
    while step < size:
        h = h.reshape(-1, 2, step)
        h = np.stack((h[:, 0] + h[:, 1], h[:, 0] - h[:, 1]), axis=1)
        step *= 2
    return h.reshape(size)


def interpolate_polynomial(evaluator: Callable[[SpinAssignment], float], n: int,
                           rtol: float = TIE_RTOL) -> SpinPolynomial:
    """The unique multilinear spin polynomial agreeing with ``evaluator``.

    Coefficient of monomial M is 2**-n * sum_s f(s) prod_{i in M} s_i, i.e. a
    Walsh-Hadamard transform of the value table. Coefficients smaller than
    ``rtol`` times the largest one are treated as rounding residue.
    """
    if n > INTERPOLATION_LIMIT:
        raise ProblemTooLarge(f"interpolation evaluates 2**{n} points; limit is n <= {INTERPOLATION_LIMIT}")
    table = np.array([evaluator(tuple(int(v) for v in s)) for s in all_spin_assignments(n)],
                     dtype=float)
    coeffs = walsh_hadamard(table) / (1 << n)
    cutoff = rtol * float(np.max(np.abs(coeffs), initial=0.0))
    terms = {}
    for mask in np.flatnonzero(np.abs(coeffs) > cutoff):
        mono = tuple(i for i in range(n) if (int(mask) >> i) & 1)
        terms[mono] = float(coeffs[mask])
    return SpinPolynomial(n, terms)
