"""Ground-state search for QUBO models: exhaustive scan and simulated annealing."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, InconsistentAuxiliary, ProblemTooLarge, ValidationError
from .model import SensorSelection
from .quadratize import QuboModel, qubo_energies

EXHAUSTIVE_LIMIT = 25
TIE_RTOL = 1e-10

Assignment = tuple[int, ...]


@dataclass(frozen=True)
class SolveEntry:
    assignment: Assignment
    energy: float
    multiplicity: int = 1


@dataclass(frozen=True)
class SolveResult:
    """Solver output, sorted by energy and then by assignment encoding.

    The encoding of an assignment is the integer with bit i equal to x_i.
    """

    entries: tuple[SolveEntry, ...]
    solver: dict = field(default_factory=dict)
    seed: int | None = None

    @property
    def best_energy(self) -> float:
        return self.entries[0].energy

    def ground_states(self, rtol: float = TIE_RTOL) -> tuple[SolveEntry, ...]:
        tol = rtol * max(1.0, abs(self.best_energy))
        return tuple(e for e in self.entries if e.energy <= self.best_energy + tol)

    @property
    def total_count(self) -> int:
        return sum(e.multiplicity for e in self.entries)


def encode(assignment: Sequence[int]) -> int:
    return sum(int(b) << i for i, b in enumerate(assignment))


def _sorted_entries(entries) -> tuple[SolveEntry, ...]:
    return tuple(sorted(entries, key=lambda e: (e.energy, encode(e.assignment))))


def _energy_scale(q: QuboModel) -> float:
    return max(1.0, abs(q.offset) + sum(map(abs, q.linear.values())) + sum(map(abs, q.quadratic.values())))


def solve_exhaustive(q: QuboModel, chunk_bits: int = 18) -> SolveResult:
    """Scan all 2**N assignments and return every minimizer.

    Energies within ``TIE_RTOL`` (relative to the model's coefficient scale)
    of the minimum count as ties; rounding makes symmetric ground states differ
    in the last few bits.
    """
    nvar = q.num_variables
    if nvar > EXHAUSTIVE_LIMIT:
        raise ProblemTooLarge(f"exhaustive search over 2**{nvar} assignments; limit is {EXHAUSTIVE_LIMIT} variables")
    tol = TIE_RTOL * _energy_scale(q)
    shifts = np.arange(nvar)
    best = np.inf
    keep: list[tuple[float, int]] = []
    step = 1 << min(chunk_bits, nvar)
    for start in range(0, 1 << nvar, step):
        codes = np.arange(start, start + step, dtype=np.int64)
        bits = (codes[:, None] >> shifts) & 1
        energies = qubo_energies(q, bits)
        best = min(best, float(energies.min()))
        keep = [(e, c) for e, c in keep if e <= best + tol]
        mask = energies <= best + tol
        keep.extend(zip(energies[mask].tolist(), codes[mask].tolist()))
    entries = [SolveEntry(tuple((c >> i) & 1 for i in range(nvar)), e, 1) for e, c in keep]
    return SolveResult(_sorted_entries(entries), {"method": "exhaustive"})


@dataclass(frozen=True)
class AnnealSchedule:
    """Geometric cooling from ``t_initial`` to ``t_final_ratio * t_initial``.

    ``t_initial=None`` picks the largest possible single-flip |dE| bound.
    """

    sweeps: int = 1000
    t_initial: float | None = None
    t_final_ratio: float = 1e-3

    def __post_init__(self):
        if self.sweeps < 1:
            raise ValidationError("sweeps must be >= 1")
        if self.t_initial is not None and not self.t_initial > 0:
            raise ValidationError("t_initial must be positive")
        if not 0 < self.t_final_ratio <= 1:
            raise ValidationError("t_final_ratio must lie in (0, 1]")

    def temperatures(self, q: QuboModel) -> np.ndarray:
        t0 = self.t_initial if self.t_initial is not None else default_initial_temperature(q)
        if self.sweeps == 1:
            return np.array([t0])
        return t0 * self.t_final_ratio ** (np.arange(self.sweeps) / (self.sweeps - 1))


def coupling_matrix(q: QuboModel) -> tuple[np.ndarray, np.ndarray]:
    nvar = q.num_variables
    lin = np.zeros(nvar)
    w = np.zeros((nvar, nvar))
    for i, a in q.linear.items():
        lin[i] += a
    for (i, j), b in q.quadratic.items():
        w[i, j] += b
        w[j, i] += b
    return lin, w


def default_initial_temperature(q: QuboModel) -> float:
    lin, w = coupling_matrix(q)
    if lin.size == 0:
        return 1.0
    bound = float(np.max(np.abs(lin) + np.abs(w).sum(axis=1)))
    return bound if bound > 0 else 1.0


def restart_rng(seed: int, restart: int) -> np.random.Generator:
    """Independent stream for one restart, a function of (seed, restart) only."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(restart,)))


def _anneal_batch(lin: np.ndarray, w: np.ndarray, temps: np.ndarray,
                  rngs: list[np.random.Generator]) -> np.ndarray:
    nvar = lin.size
    x = np.array([rng.integers(0, 2, nvar) for rng in rngs], dtype=float)
    uniforms = np.stack([rng.random((temps.size, nvar)) for rng in rngs])
    field_ = np.tile(lin, (len(rngs), 1))
    for j in range(nvar):
        field_ += x[:, j, None] * w[j]
    for t, temp in enumerate(temps):
        for i in range(nvar):
            step = 1.0 - 2.0 * x[:, i]
            delta = step * field_[:, i]
            accept = (delta <= 0.0) | (uniforms[:, t, i] < np.exp(-np.maximum(delta, 0.0) / temp))
            if accept.any():
                rows = np.flatnonzero(accept)
                x[rows, i] += step[rows]
                field_[rows] += step[rows, None] * w[i]
    return x.astype(np.int64)


def solve_annealing(q: QuboModel, params: AnnealSchedule | None = None, seed: int = 0,
                    restarts: int = 100, batch_size: int = 100) -> SolveResult:
    """Single-bit-flip Metropolis annealing with independent restarts.

    Every restart draws its start state and acceptance uniforms from its own
    stream, so the result does not depend on ``batch_size`` (how many restarts
    are advanced together). Local fields are updated incrementally after each accepted
    flip; the reported energy of each final state is re-evaluated from scratch.
    """
    params = params or AnnealSchedule()
    if restarts < 1 or batch_size < 1:
        raise ValidationError("restarts and batch_size must be >= 1")
    nvar = q.num_variables
    temps = params.temperatures(q)
    descriptor = {
        "method": "anneal",
        "sweeps": params.sweeps,
        "t_initial": float(temps[0]),
        "t_final": float(temps[-1]),
        "restarts": restarts,
    }

    if nvar == 0:
        entry = SolveEntry((), float(q.offset), restarts)
        return SolveResult((entry,), descriptor, seed)

    lin, w = coupling_matrix(q)
    finals = np.concatenate([
        _anneal_batch(lin, w, temps, [restart_rng(seed, r) for r in range(lo, min(lo + batch_size, restarts))])
        for lo in range(0, restarts, batch_size)
    ])
    energies = qubo_energies(q, finals)
    counts: dict[Assignment, list] = {}
    for row, e in zip(finals, energies.tolist()):
        key = tuple(int(b) for b in row)
        if key in counts:
            counts[key][1] += 1
        else:
            counts[key] = [e, 1]
    entries = [SolveEntry(a, e, c) for a, (e, c) in counts.items()]
    return SolveResult(_sorted_entries(entries), descriptor, seed)


@dataclass(frozen=True)
class Projection:
    selection: SensorSelection
    inconsistent_auxiliaries: tuple[int, ...] = ()

    @property
    def consistent(self) -> bool:
        return not self.inconsistent_auxiliaries


def project_solution(assignment: Sequence[int], q: QuboModel, warn: bool = False) -> Projection:
    """Map a QUBO assignment to the sensors it selects.

    Auxiliary bits are dropped after checking y = x_i x_j; violations are
    listed on the result (and optionally warned about), never raised.
    """
    bits = tuple(int(b) for b in assignment)
    if len(bits) != q.num_variables:
        raise DimensionMismatch(f"assignment has {len(bits)} bits, model has {q.num_variables}")
    originals = q.original_indices
    chosen = frozenset(q.variables[i].sensor for i in originals if bits[i])
    bad = tuple(
        idx for idx in q.auxiliary_indices
        if bits[idx] != bits[q.variables[idx].pair[0]] * bits[q.variables[idx].pair[1]]
    )
    if bad and warn:
        warnings.warn(f"auxiliaries {list(bad)} disagree with their defining pairs", InconsistentAuxiliary)
    return Projection(SensorSelection(len(originals), chosen), bad)
