"""From spin polynomial to QUBO: change of variables, cardinality penalty,
and reduction of higher-order terms with auxiliary product bits."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import DimensionMismatch, InvalidCardinality, ValidationError
from .model import (
    BooleanPolynomial,
    Monomial,
    SpinPolynomial,
    Variable,
    sensor_variables,
)


@dataclass(frozen=True)
class Substitution:
    aux: int
    pair: tuple[int, int]
    weight: float


@dataclass(frozen=True)
class QuboModel:
    """Quadratic objective over 0/1 variables, to be minimized.

    ``quadratic`` keys are ``(i, j)`` with ``i < j``. ``substitutions`` lists the
    penalty weight attached to each auxiliary; ``cardinality`` is ``(k, weight)``
    when a fixed-count penalty is included.
    """

    variables: tuple[Variable, ...]
    linear: dict[int, float] = field(default_factory=dict)
    quadratic: dict[tuple[int, int], float] = field(default_factory=dict)
    offset: float = 0.0
    substitutions: tuple[Substitution, ...] = ()
    cardinality: tuple[int, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "substitutions", tuple(self.substitutions))
        n = len(self.variables)
        for (i, j) in self.quadratic:
            if not 0 <= i < j < n:
                raise ValidationError(f"quadratic key {(i, j)} must satisfy 0 <= i < j < {n}")
        for i in self.linear:
            if not 0 <= i < n:
                raise ValidationError(f"linear key {i} outside 0..{n - 1}")
        for idx, var in enumerate(self.variables):
            if var.is_auxiliary and not (var.pair and max(var.pair) < idx):
                raise ValidationError(f"auxiliary {idx} must reference earlier variables, got {var.pair}")
        for sub in self.substitutions:
            if not sub.weight > 0:
                raise ValidationError(f"substitution weight for {sub.aux} must be positive")

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    @property
    def original_indices(self) -> list[int]:
        return [i for i, v in enumerate(self.variables) if not v.is_auxiliary]

    @property
    def auxiliary_indices(self) -> list[int]:
        return [i for i, v in enumerate(self.variables) if v.is_auxiliary]

    def energy(self, x) -> float:
        return float(qubo_energies(self, [x])[0])


def qubo_energies(q: QuboModel, assignments) -> np.ndarray:
    """Energies of a batch of 0/1 assignments (one per row).

    Terms are accumulated elementwise in a fixed order, so a row's energy does
    not depend on what else is in the batch.
    """
    x = np.asarray(assignments, dtype=float)
    if x.ndim != 2 or x.shape[1] != q.num_variables:
        raise DimensionMismatch(f"expected rows of {q.num_variables} bits, got shape {x.shape}")
    e = np.full(x.shape[0], float(q.offset))
    for i, a in q.linear.items():
        e += a * x[:, i]
    for (i, j), b in q.quadratic.items():
        e += b * (x[:, i] * x[:, j])
    return e


def spin_to_boolean(p: SpinPolynomial) -> BooleanPolynomial:
    """Rewrite with s_i = 2 x_i - 1.

    A spin monomial over M expands to sum_{A subset of M} 2**|A| (-1)**(|M|-|A|) x_A.
    """
    terms: dict[Monomial, float] = {}
    for mono, coef in p.terms.items():
        d = len(mono)
        for r in range(d + 1):
            weight = coef * (2 ** r) * (-1) ** (d - r)
            for sub in combinations(mono, r):
                terms[sub] = terms.get(sub, 0.0) + weight
    return BooleanPolynomial(sensor_variables(p.n), terms)


def boolean_to_spin(p: BooleanPolynomial) -> SpinPolynomial:
    """Inverse change of variables, x_i = (1 + s_i) / 2."""
    terms: dict[Monomial, float] = {}
    for mono, coef in p.terms.items():
        weight = coef / (2 ** len(mono))
        for r in range(len(mono) + 1):
            for sub in combinations(mono, r):
                terms[sub] = terms.get(sub, 0.0) + weight
    return SpinPolynomial(p.n, terms)


def default_penalty_weight(p: BooleanPolynomial) -> float:
    """Twice the sum of absolute objective coefficients (1.0 for a zero objective)."""
    total = sum(abs(c) for c in p.terms.values())
    return 2.0 * total if total > 0 else 1.0


def add_cardinality_penalty(p: BooleanPolynomial, k: int, weight: float | None = None) -> BooleanPolynomial:
    """Add weight * (sum_i x_i - k)**2 over the original sensor bits."""
    originals = p.original_indices
    if not 0 <= k <= len(originals):
        raise InvalidCardinality(f"k={k} outside 0..{len(originals)}")
    if p.cardinality is not None:
        raise InvalidCardinality("polynomial already carries a cardinality penalty")
    lam = default_penalty_weight(p) if weight is None else float(weight)
    if not lam > 0:
        raise InvalidCardinality(f"penalty weight must be positive, got {lam}")

    extra: list[tuple[Monomial, float]] = [((), lam * k * k)]
    extra += [((i,), lam * (1 - 2 * k)) for i in originals]
    extra += [((i, j), 2.0 * lam) for i, j in combinations(originals, 2)]
    return BooleanPolynomial(p.variables, list(p.terms.items()) + extra, cardinality=(k, lam))


def _best_pair(terms: dict[Monomial, float]) -> tuple[int, int] | None:
    counts: Counter[tuple[int, int]] = Counter()
    for mono in terms:
        if len(mono) >= 3:
            counts.update(combinations(mono, 2))
    if not counts:
        return None
    return min(counts, key=lambda pair: (-counts[pair], pair))


def quadratize(p: BooleanPolynomial) -> QuboModel:
    """Reduce ``p`` to degree 2 by repeated pair substitution.

    Each round picks the pair (i, j) shared by the most monomials of degree 3
    or more (smallest pair on ties), introduces y standing for x_i x_j, replaces
    {i, j} by {y} in those monomials, and adds the penalty
    M (x_i x_j - 2 x_i y - 2 x_j y + 3 y). The penalty is zero when y = x_i x_j
    and at least M otherwise; M = 1 + sum of |rewritten coefficients| makes any
    wrong y strictly worse than the right one, so minima and minimizers over
    the original bits are preserved.
    """
    variables = list(p.variables)
    terms = dict(p.terms)
    subs: list[Substitution] = []

    def add(mono: Monomial, coef: float) -> None:
        terms[mono] = terms.get(mono, 0.0) + coef

    while (pair := _best_pair(terms)) is not None:
        i, j = pair
        y = len(variables)
        variables.append(Variable.auxiliary(i, j))
        hits = [m for m in terms if len(m) >= 3 and i in m and j in m]
        weight = 1.0 + sum(abs(terms[m]) for m in hits)
        for mono in hits:
            coef = terms.pop(mono)
            add(tuple(sorted([v for v in mono if v not in pair] + [y])), coef)
        add((i, j), weight)
        add((i, y), -2.0 * weight)
        add((j, y), -2.0 * weight)
        add((y,), 3.0 * weight)
        subs.append(Substitution(y, pair, weight))

    linear: dict[int, float] = {}
    quadratic: dict[tuple[int, int], float] = {}
    offset = 0.0
    for mono, coef in sorted(terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
        if coef == 0.0:
            continue
        if len(mono) == 0:
            offset = coef
        elif len(mono) == 1:
            linear[mono[0]] = coef
        else:
            quadratic[mono] = coef
    return QuboModel(tuple(variables), linear, quadratic, offset, tuple(subs), p.cardinality)


def minimization_objective(f: SpinPolynomial) -> BooleanPolynomial:
    """Boolean form of -f; the single place where the objective is negated."""
    return spin_to_boolean(-f)


def build_qubo(f: SpinPolynomial, k: int | None = None, penalty_weight: float | None = None) -> QuboModel:
    """-f in boolean form, optionally constrained to k sensors, reduced to a QUBO."""
    objective = minimization_objective(f)
    if k is not None:
        objective = add_cardinality_penalty(objective, k, penalty_weight)
    return quadratize(objective)


def qubo_to_ising(q: QuboModel) -> tuple[dict[int, float], dict[tuple[int, int], float], float]:
    """Substitute x = (s + 1) / 2; returns fields h, couplings J, and offset."""
    h: dict[int, float] = {}
    J: dict[tuple[int, int], float] = {}
    offset = q.offset
    for i, a in q.linear.items():
        h[i] = h.get(i, 0.0) + a / 2.0
        offset += a / 2.0
    for (i, j), b in q.quadratic.items():
        J[(i, j)] = J.get((i, j), 0.0) + b / 4.0
        h[i] = h.get(i, 0.0) + b / 4.0
        h[j] = h.get(j, 0.0) + b / 4.0
        offset += b / 4.0
    h = {i: v for i, v in sorted(h.items()) if v != 0.0}
    J = {k: v for k, v in sorted(J.items()) if v != 0.0}
    return h, J, offset


def ising_energy(h: dict[int, float], J: dict[tuple[int, int], float], offset: float, s) -> float:
    return (offset + sum(v * s[i] for i, v in h.items())
            + sum(v * s[i] * s[j] for (i, j), v in J.items()))
