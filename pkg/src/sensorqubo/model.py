"""Domain types shared across the pipeline.

Sensor indices are 0-based everywhere inside the package; anything rendered
for people (reports, CLI output, exported sensor numbers) is 1-based so that
sensor ``0`` prints as ``S1``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    AsymmetricMatrix,
    DimensionMismatch,
    EmptyMatrix,
    IndexOutOfRange,
    InvalidCovariance,
    NotPositiveDefinite,
    ValidationError,
)
from .linalg import cholesky_pivots, is_positive_definite

SYMMETRY_RTOL = 1e-8

Monomial = tuple[int, ...]
SpinAssignment = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """A validated symmetric positive-definite covariance over n sensors.

    Build instances with :func:`validate_covariance`; the constructor itself
    does not check anything.
    """

    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def submatrix(self, indices: Iterable[int]) -> np.ndarray:
        idx = np.asarray(sorted(indices), dtype=int)
        return self.entries[np.ix_(idx, idx)]

    def __eq__(self, other):
        if not isinstance(other, CovarianceMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    __hash__ = None


def validate_covariance(raw) -> CovarianceMatrix:
    """Check a raw matrix and return it as a :class:`CovarianceMatrix`.

    Entries that disagree with their transpose by at most
    ``1e-8 * max(1, |value|)`` are averaged; anything larger raises
    :class:`AsymmetricMatrix`. Positive definiteness is decided by Cholesky
    pivots.
    """
    try:
        a = np.array(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidCovariance(f"covariance is not a numeric matrix: {exc}") from exc
    if a.size == 0:
        raise EmptyMatrix("covariance matrix has no entries")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidCovariance(f"covariance must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidCovariance("covariance contains non-finite entries")

    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(a.T)))
    gap = np.abs(a - a.T)
    if np.any(gap > SYMMETRY_RTOL * scale):
        i, j = np.unravel_index(np.argmax(gap / scale), a.shape)
        raise AsymmetricMatrix(
            f"entries ({i + 1},{j + 1})={a[i, j]!r} and ({j + 1},{i + 1})={a[j, i]!r} differ"
        )
    a = (a + a.T) / 2.0

    if np.any(np.diag(a) <= 0.0):
        raise NotPositiveDefinite("covariance has a nonpositive variance on the diagonal")
    if not is_positive_definite(a):
        pivots = cholesky_pivots(a)
        raise NotPositiveDefinite(
            f"Cholesky pivot {len(pivots)} is {pivots[-1]!r}; matrix is not positive definite"
        )
    a.setflags(write=False)
    return CovarianceMatrix(a)


def as_spins(values: Iterable[int], n: int | None = None) -> SpinAssignment:
    """Validate a +/-1 sequence and return it as a tuple of ints."""
    spins = tuple(int(v) for v in values)
    if any(v not in (-1, 1) for v in spins):
        raise ValidationError(f"spin values must be +1 or -1, got {spins}")
    if n is not None and len(spins) != n:
        raise DimensionMismatch(f"expected {n} spins, got {len(spins)}")
    return spins


@dataclass(frozen=True)
class SensorSelection:
    """The chosen subset S of n candidates; T is the complement."""

    n: int
    selected: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "selected", frozenset(int(i) for i in self.selected))
        bad = [i for i in self.selected if not 0 <= i < self.n]
        if bad:
            raise IndexOutOfRange(f"sensor indices {sorted(bad)} outside 0..{self.n - 1}")

    @classmethod
    def from_labels(cls, n: int, labels: Iterable[int]) -> SensorSelection:
        """Build from 1-based sensor numbers."""
        return cls(n, frozenset(int(i) - 1 for i in labels))

    @property
    def unselected(self) -> frozenset[int]:
        return frozenset(range(self.n)) - self.selected

    def complement(self) -> SensorSelection:
        return SensorSelection(self.n, self.unselected)

    def spins(self) -> SpinAssignment:
        return tuple(1 if i in self.selected else -1 for i in range(self.n))

    def bits(self) -> tuple[int, ...]:
        return tuple(1 if i in self.selected else 0 for i in range(self.n))

    def partition(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """The unordered partition {S, T} in a canonical order.

        The larger block comes first; equal sizes are ordered by smallest member.
        """
        blocks = sorted(
            (tuple(sorted(self.selected)), tuple(sorted(self.unselected))),
            key=lambda b: (-len(b), b),
        )
        return blocks[0], blocks[1]

    def labels(self) -> list[int]:
        return [i + 1 for i in sorted(self.selected)]

    def __str__(self) -> str:
        return "{" + ",".join(f"S{i}" for i in self.labels()) + "}"


def selection_from_spins(s: Sequence[int]) -> SensorSelection:
    spins = as_spins(s)
    return SensorSelection(len(spins), frozenset(i for i, v in enumerate(spins) if v == 1))


def _check_index(i: int, n: int) -> int:
    i = int(i)
    if not 0 <= i < n:
        raise IndexOutOfRange(f"variable index {i} outside 0..{n - 1}")
    return i


def _reduce_spin(indices: Iterable[int]) -> Monomial:
    counts = Counter(indices)
    return tuple(sorted(i for i, c in counts.items() if c % 2))


def _reduce_bool(indices: Iterable[int]) -> Monomial:
    return tuple(sorted(set(indices)))


def _collect(terms, n: int, reduce) -> dict[Monomial, float]:
    items = terms.items() if isinstance(terms, Mapping) else terms
    out: dict[Monomial, float] = {}
    for mono, coef in items:
        key = reduce(_check_index(i, n) for i in mono)
        out[key] = out.get(key, 0.0) + float(coef)
    return {k: v for k, v in sorted(out.items(), key=lambda kv: (len(kv[0]), kv[0])) if v != 0.0}


@dataclass(frozen=True)
class SpinPolynomial:
    """Multilinear polynomial in spins s_i in {-1, +1}.

    ``terms`` maps sorted index tuples to coefficients; ``()`` is the constant.
    Repeated indices are reduced with s_i**2 = 1 and exact zeros are dropped.
    """

    n: int
    terms: dict[Monomial, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", _collect(self.terms, self.n, _reduce_spin))

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    @property
    def constant(self) -> float:
        return self.terms.get((), 0.0)

    def __add__(self, other: SpinPolynomial) -> SpinPolynomial:
        if self.n != other.n:
            raise DimensionMismatch(f"cannot add polynomials over {self.n} and {other.n} spins")
        return SpinPolynomial(self.n, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> SpinPolynomial:
        return SpinPolynomial(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: SpinPolynomial) -> SpinPolynomial:
        return self + (-other)

    def __mul__(self, scalar: float) -> SpinPolynomial:
        return SpinPolynomial(self.n, {m: c * scalar for m, c in self.terms.items()})

    __rmul__ = __mul__


def evaluate_polynomial(p: SpinPolynomial, s: Sequence[int]) -> float:
    """Value of ``p`` at the spin assignment ``s``."""
    spins = as_spins(s)
    if len(spins) != p.n:
        raise DimensionMismatch(f"polynomial has {p.n} variables, assignment has {len(spins)}")
    total = 0.0
    for mono, coef in p.terms.items():
        sign = 1
        for i in mono:
            sign *= spins[i]
        total += coef * sign
    return total


@dataclass(frozen=True)
class Variable:
    """A QUBO bit: either a sensor indicator or an auxiliary product y = x_i x_j."""

    kind: str
    sensor: int | None = None
    pair: tuple[int, int] | None = None

    @classmethod
    def original(cls, sensor: int) -> Variable:
        return cls("original", sensor=sensor)

    @classmethod
    def auxiliary(cls, i: int, j: int) -> Variable:
        return cls("auxiliary", pair=(min(i, j), max(i, j)))

    @property
    def is_auxiliary(self) -> bool:
        return self.kind == "auxiliary"


def sensor_variables(n: int) -> tuple[Variable, ...]:
    return tuple(Variable.original(i) for i in range(n))


@dataclass(frozen=True)
class BooleanPolynomial:
    """Multilinear polynomial over bits x_i in {0, 1} (x**2 = x applied).

    ``cardinality`` records ``(k, weight)`` once a fixed-count penalty has been
    folded in, so downstream stages can report it.
    """

    variables: tuple[Variable, ...]
    terms: dict[Monomial, float] = field(default_factory=dict)
    cardinality: tuple[int, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "terms", _collect(self.terms, self.n, _reduce_bool))

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    @property
    def original_indices(self) -> list[int]:
        return [i for i, v in enumerate(self.variables) if not v.is_auxiliary]


def evaluate_boolean(p: BooleanPolynomial, x: Sequence[int]) -> float:
    bits = tuple(int(v) for v in x)
    if len(bits) != p.n:
        raise DimensionMismatch(f"polynomial has {p.n} variables, assignment has {len(bits)}")
    if any(b not in (0, 1) for b in bits):
        raise ValidationError(f"bit values must be 0 or 1, got {bits}")
    return sum(c for mono, c in p.terms.items() if all(bits[i] for i in mono))
