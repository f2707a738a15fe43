"""Reading covariances and samples, and the JSON formats for QUBOs and results."""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import InsufficientSamples, ParseError
from .model import CovarianceMatrix, Variable, validate_covariance
from .quadratize import QuboModel, Substitution
from .solve import SolveEntry, SolveResult


def _read_grid(path: Path) -> list[list[str]]:
    with open(path, newline="") as fh:
        return [row for row in csv.reader(fh) if row and any(cell.strip() for cell in row)]


def _to_floats(row: list[str], lineno: int) -> list[float]:
    try:
        return [float(cell) for cell in row]
    except ValueError as exc:
        raise ParseError(f"line {lineno}: {exc}") from exc


def load_covariance(path, fmt: str | None = None) -> CovarianceMatrix:
    """Read a covariance from CSV (plain n x n grid) or JSON ``{"n", "sigma"}``.

    The format defaults to the file extension.
    """
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".") or "csv").lower()
    if fmt == "csv":
        rows = [_to_floats(r, i + 1) for i, r in enumerate(_read_grid(path))]
        if any(len(r) != len(rows) for r in rows):
            raise ParseError(f"{path}: expected a square grid, got row lengths {[len(r) for r in rows]}")
        return validate_covariance(rows)
    if fmt == "json":
        try:
            doc = json.loads(path.read_text())
            n = doc["n"]
            sigma = doc["sigma"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseError(f"{path}: not a covariance document: {exc}") from exc
        if not isinstance(n, int) or not isinstance(sigma, list) or len(sigma) != n \
                or any(not isinstance(r, list) or len(r) != n for r in sigma):
            raise ParseError(f"{path}: 'sigma' must be an {n}x{n} array")
        return validate_covariance(sigma)
    raise ParseError(f"unknown covariance format {fmt!r}")


def load_samples(path) -> np.ndarray:
    """Observations CSV, one row per observation; a non-numeric first line is a header."""
    rows = _read_grid(Path(path))
    if rows:
        try:
            [float(c) for c in rows[0]]
        except ValueError:
            rows = rows[1:]
    data = [_to_floats(r, i + 1) for i, r in enumerate(rows)]
    if data and any(len(r) != len(data[0]) for r in data):
        raise ParseError(f"{path}: rows have differing column counts")
    return np.array(data, dtype=float)


def estimate_covariance(samples) -> CovarianceMatrix:
    """Unbiased sample covariance (1/(N-1)), validated."""
    x = np.asarray(samples, dtype=float)
    if x.ndim != 2:
        raise ParseError(f"samples must be a 2-D table, got shape {x.shape}")
    if x.shape[0] < 2:
        raise InsufficientSamples(f"need at least 2 observations, got {x.shape[0]}")
    return validate_covariance(np.atleast_2d(np.cov(x, rowvar=False, ddof=1)))


def qubo_to_dict(q: QuboModel) -> dict:
    variables = []
    for idx, var in enumerate(q.variables):
        variables.append({
            "id": idx,
            "kind": var.kind,
            "sensor": None if var.is_auxiliary else var.sensor + 1,
            "pair": list(var.pair) if var.is_auxiliary else None,
        })
    cardinality = None
    if q.cardinality is not None:
        cardinality = {"k": int(q.cardinality[0]), "lambda": float(q.cardinality[1])}
    return {
        "num_variables": q.num_variables,
        "variables": variables,
        "linear": {str(i): float(v) for i, v in sorted(q.linear.items())},
        "quadratic": {f"{i},{j}": float(v) for (i, j), v in sorted(q.quadratic.items())},
        "offset": float(q.offset),
        "penalties": {
            "substitutions": [{"aux": s.aux, "weight": float(s.weight)} for s in q.substitutions],
            "cardinality": cardinality,
        },
    }


def qubo_from_dict(doc: dict) -> QuboModel:
    try:
        variables = []
        for pos, entry in enumerate(doc["variables"]):
            if entry["id"] != pos:
                raise ParseError(f"variable ids must be 0..N-1 in order, got {entry['id']} at {pos}")
            if entry["kind"] == "auxiliary":
                variables.append(Variable.auxiliary(*entry["pair"]))
            elif entry["kind"] == "original":
                variables.append(Variable.original(int(entry["sensor"]) - 1))
            else:
                raise ParseError(f"unknown variable kind {entry['kind']!r}")
        if doc["num_variables"] != len(variables):
            raise ParseError("num_variables disagrees with the registry length")
        linear = {int(k): float(v) for k, v in doc["linear"].items()}
        quadratic = {}
        for key, v in doc["quadratic"].items():
            i, j = (int(t) for t in key.split(","))
            quadratic[(i, j)] = float(v)
        pairs = {idx: var.pair for idx, var in enumerate(variables) if var.is_auxiliary}
        subs = [Substitution(int(s["aux"]), pairs[int(s["aux"])], float(s["weight"]))
                for s in doc["penalties"]["substitutions"]]
        card = doc["penalties"]["cardinality"]
        cardinality = None if card is None else (int(card["k"]), float(card["lambda"]))
        offset = float(doc["offset"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed QUBO document: {exc!r}") from exc
    return QuboModel(
        tuple(variables),
        dict(sorted(linear.items())),
        dict(sorted(quadratic.items())),
        offset,
        tuple(subs),
        cardinality,
    )


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def export_qubo(q: QuboModel, path) -> None:
    Path(path).write_text(dumps(qubo_to_dict(q)))


def import_qubo(path) -> QuboModel:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return qubo_from_dict(doc)


def result_to_dict(result: SolveResult, q: QuboModel) -> dict:
    return {
        "qubo": qubo_to_dict(q),
        "result": {
            "entries": [
                {"assignment": list(e.assignment), "energy": float(e.energy), "multiplicity": e.multiplicity}
                for e in result.entries
            ],
            "solver": result.solver,
            "seed": result.seed,
        },
    }


def result_from_dict(doc: dict) -> tuple[SolveResult, QuboModel]:
    try:
        q = qubo_from_dict(doc["qubo"])
        body = doc["result"]
        entries = tuple(
            SolveEntry(tuple(int(b) for b in e["assignment"]), float(e["energy"]), int(e["multiplicity"]))
            for e in body["entries"]
        )
        return SolveResult(entries, dict(body["solver"]), body["seed"]), q
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed result document: {exc!r}") from exc
