"""Command-line entry point: ``sensorqubo <command> COVARIANCE [options]``."""
from __future__ import annotations

import argparse
import json
import sys

from . import files
from .errors import ProblemTooLarge, ValidationError
from .expansion import expand_objective
from .model import SensorSelection
from .oracle import brute_force_optimum, entropy, mutual_information, subset_objective
from .quadratize import build_qubo
from .report import report, solve_model, sweep_cardinality
from .solve import AnnealSchedule

EXIT_OK, EXIT_INVALID, EXIT_TOO_LARGE = 0, 1, 2


def _sensor_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    return [int(t.lstrip("Ss")) for t in text.split(",")]


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("covariance", help="covariance file (CSV grid or JSON), or samples CSV with --samples")
    p.add_argument("--format", choices=["csv", "json"], help="covariance format (default: file extension)")
    p.add_argument("--samples", action="store_true", help="input holds observations; estimate the covariance")


def _add_problem(p: argparse.ArgumentParser) -> None:
    p.add_argument("--select-k", type=int, default=None, metavar="K", help="require exactly K selected sensors")
    p.add_argument("--penalty-weight", type=float, default=None, help="cardinality penalty weight")


def _add_solver(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", choices=["exhaustive", "anneal"], default="exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--sweeps", type=int, default=1000)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sensorqubo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a covariance matrix")
    _add_input(p)

    p = sub.add_parser("expand", help="print the spin polynomial of det(S_SS) det(S_TT)")
    _add_input(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("qubo", help="build the QUBO for -f and write it as JSON")
    _add_input(p)
    _add_problem(p)
    p.add_argument("-o", "--output", help="output path (default: stdout)")

    p = sub.add_parser("solve", help="solve the QUBO and print a placement report")
    _add_input(p)
    _add_problem(p)
    _add_solver(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--save-result", metavar="PATH", help="also write the raw result and QUBO as JSON")

    p = sub.add_parser("mi", help="mutual information of one selection")
    _add_input(p)
    p.add_argument("--subset", required=True, help="comma-separated 1-based sensors, e.g. 1,2")

    p = sub.add_parser("oracle", help="brute-force optimum over subsets")
    _add_input(p)
    p.add_argument("--select-k", type=int, default=None, metavar="K")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("sweep", help="best MI for every sensor count")
    _add_input(p)
    _add_solver(p)
    p.add_argument("--penalty-weight", type=float, default=None)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("report", help="render a report from a saved solve result")
    _add_input(p)
    p.add_argument("--result", required=True, help="file written by solve --save-result")
    p.add_argument("--json", action="store_true")
    return parser


def _load(args):
    if args.samples:
        return files.estimate_covariance(files.load_samples(args.covariance))
    return files.load_covariance(args.covariance, args.format)


def _solver_kwargs(args) -> dict:
    if args.method == "anneal":
        return {"schedule": AnnealSchedule(sweeps=args.sweeps), "seed": args.seed, "restarts": args.restarts}
    return {}


def _run(args, out) -> None:
    cov = _load(args)

    if args.command == "validate":
        out.write(f"ok: {cov.n} sensors, symmetric positive definite\n")
        return

    if args.command == "expand":
        poly = expand_objective(cov)
        if args.json:
            doc = {"n": poly.n, "terms": [{"monomial": [i + 1 for i in m], "coefficient": c}
                                          for m, c in poly.terms.items()]}
            out.write(files.dumps(doc))
        else:
            for mono, coef in poly.terms.items():
                label = "*".join(f"s{i + 1}" for i in mono) or "1"
                out.write(f"{coef:+.17g}  {label}\n")
        return

    if args.command == "qubo":
        q = build_qubo(expand_objective(cov), args.select_k, args.penalty_weight)
        text = files.dumps(files.qubo_to_dict(q))
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            out.write(text)
        return

    if args.command == "solve":
        q = build_qubo(expand_objective(cov), args.select_k, args.penalty_weight)
        result = solve_model(q, args.method, **_solver_kwargs(args))
        if args.save_result:
            with open(args.save_result, "w") as fh:
                fh.write(files.dumps(files.result_to_dict(result, q)))
        rep = report(result, cov, q)
        out.write(files.dumps(rep.to_dict()) if args.json else rep.render())
        return

    if args.command == "report":
        with open(args.result) as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise files.ParseError(f"{args.result}: {exc}") from exc
        result, q = files.result_from_dict(doc)
        rep = report(result, cov, q)
        out.write(files.dumps(rep.to_dict()) if args.json else rep.render())
        return

    if args.command == "mi":
        sel = SensorSelection.from_labels(cov.n, _sensor_list(args.subset))
        out.write(f"selection: {sel}  complement: {sel.complement()}\n")
        out.write(f"objective det(S_SS)*det(S_TT): {subset_objective(cov, sel):.17g}\n")
        out.write(f"H(S) = {entropy(cov, sel.selected):.17g}\n")
        out.write(f"H(T) = {entropy(cov, sel.unselected):.17g}\n")
        out.write(f"H(X) = {entropy(cov):.17g}\n")
        out.write(f"I(S;T) = {mutual_information(cov, sel):.17g} nats\n")
        return

    if args.command == "oracle":
        res = brute_force_optimum(cov, args.select_k)
        if args.json:
            out.write(files.dumps({"k": res.k, "value": res.value,
                                   "maximizers": [s.labels() for s in res.maximizers]}))
        else:
            out.write(f"max det(S_SS)*det(S_TT) = {res.value:.17g}\n")
            for s in res.maximizers:
                out.write(f"  S = {s}  T = {s.complement()}  MI = {mutual_information(cov, s):.6f}\n")
        return

    if args.command == "sweep":
        frontier = sweep_cardinality(cov, args.method, args.penalty_weight, **_solver_kwargs(args))
        if args.json:
            out.write(files.dumps({"frontier": [
                {"k": p.k, "mi": p.mi, "energy": p.energy, "selections": [s.labels() for s in p.selections]}
                for p in frontier]}))
        else:
            out.write("k  MI [nats]  selections\n")
            for p in frontier:
                out.write(f"{p.k:<2} {p.mi:.6f}  {' '.join(str(s) for s in p.selections)}\n")
        return


def main(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    out = out or sys.stdout
    try:
        _run(args, out)
    except ProblemTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
