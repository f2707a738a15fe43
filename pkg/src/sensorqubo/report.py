"""Human-facing summaries of solver output and the cardinality sweep."""
from __future__ import annotations

from dataclasses import dataclass, field

from .expansion import expand_objective
from .model import CovarianceMatrix, SensorSelection
from .oracle import mutual_information
from .quadratize import QuboModel, build_qubo
from .solve import AnnealSchedule, SolveResult, project_solution, solve_annealing, solve_exhaustive


def _block_label(block) -> str:
    return "{" + ",".join(f"S{i + 1}" for i in block) + "}"


@dataclass(frozen=True)
class ReportRow:
    blocks: tuple[tuple[int, ...], tuple[int, ...]]
    spin_patterns: tuple[tuple[int, ...], ...]
    energy: float
    mi: float
    count: int
    consistent: bool = True

    @property
    def label(self) -> str:
        return _block_label(self.blocks[0]) + "|" + _block_label(self.blocks[1])

    def to_dict(self) -> dict:
        return {
            "partition": [[i + 1 for i in b] for b in self.blocks],
            "spin_patterns": [list(p) for p in self.spin_patterns],
            "energy": self.energy,
            "mi": self.mi,
            "count": self.count,
            "consistent": self.consistent,
        }


@dataclass(frozen=True)
class PlacementReport:
    rows: tuple[ReportRow, ...]
    n: int
    k: int | None = None
    solver: dict = field(default_factory=dict)
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "solver": self.solver,
            "seed": self.seed,
            "rows": [r.to_dict() for r in self.rows],
        }

    def render(self) -> str:
        head = [
            f"sensors: {self.n}",
            f"select k: {'-' if self.k is None else self.k}",
            "solver: " + " ".join(f"{k}={v}" for k, v in sorted(self.solver.items())),
            f"seed: {'-' if self.seed is None else self.seed}",
            "",
        ]
        table = [("partition", "spin patterns", "energy", "MI [nats]", "count")]
        for r in self.rows:
            patterns = " ".join("[" + ",".join(str(v) for v in p) + "]" for p in r.spin_patterns)
            label = r.label if r.consistent else r.label + " *"
            table.append((label, patterns, f"{r.energy:.10g}", f"{r.mi:.6f}", str(r.count)))
        widths = [max(len(row[c]) for row in table) for c in range(5)]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in table]
        if any(not r.consistent for r in self.rows):
            lines.append("* includes states whose auxiliary bits disagree with their defining pair")
        return "\n".join(head + lines) + "\n"


def report(result: SolveResult, cov: CovarianceMatrix, q: QuboModel) -> PlacementReport:
    """Group solver entries by sensor partition and attach the oracle MI.

    Without a cardinality constraint a selection and its complement describe
    the same partition and share a row. With one they are different answers
    (only one has the right size), so rows are keyed by the selected set.
    """
    constrained = q.cardinality is not None
    groups: dict[tuple, dict] = {}
    for entry in result.entries:
        proj = project_solution(entry.assignment, q)
        sel = proj.selection
        if constrained:
            blocks = (tuple(sorted(sel.selected)), tuple(sorted(sel.unselected)))
        else:
            blocks = sel.partition()
        g = groups.setdefault(blocks, {"sel": sel, "patterns": [], "energy": entry.energy,
                                       "count": 0, "consistent": True})
        if sel.spins() not in g["patterns"]:
            g["patterns"].append(sel.spins())
        g["energy"] = min(g["energy"], entry.energy)
        g["count"] += entry.multiplicity
        g["consistent"] = g["consistent"] and proj.consistent

    rows = [
        ReportRow(blocks, tuple(g["patterns"]), g["energy"], mutual_information(cov, g["sel"]),
                  g["count"], g["consistent"])
        for blocks, g in groups.items()
    ]
    rows.sort(key=lambda r: (r.energy, r.blocks))
    k = q.cardinality[0] if constrained else None
    return PlacementReport(tuple(rows), cov.n, k, dict(result.solver), result.seed)


@dataclass(frozen=True)
class FrontierPoint:
    k: int
    mi: float
    selections: tuple[SensorSelection, ...]
    energy: float


def solve_model(q: QuboModel, method: str = "exhaustive", schedule: AnnealSchedule | None = None,
                seed: int = 0, restarts: int = 100) -> SolveResult:
    if method == "exhaustive":
        return solve_exhaustive(q)
    if method == "anneal":
        return solve_annealing(q, schedule, seed, restarts)
    raise ValueError(f"unknown solver method {method!r}")


def sweep_cardinality(cov: CovarianceMatrix, method: str = "exhaustive",
                      penalty_weight: float | None = None, **solver_kwargs) -> list[FrontierPoint]:
    """Best MI for every sensor count k = 0..n."""
    f = expand_objective(cov)
    frontier = []
    for k in range(cov.n + 1):
        q = build_qubo(f, k, penalty_weight)
        result = solve_model(q, method, **solver_kwargs)
        best = result.ground_states()
        sels = []
        for entry in best:
            sel = project_solution(entry.assignment, q).selection
            if sel not in sels:
                sels.append(sel)
        sels.sort(key=lambda s: sorted(s.selected))
        frontier.append(FrontierPoint(k, mutual_information(cov, sels[0]), tuple(sels), best[0].energy))
    return frontier
