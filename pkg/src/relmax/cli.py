"""Command-line front end: ``relmax <command> SPEC [options]``.

Results go to stdout (JSON or CSV); diagnostics go to stderr as a JSON
document ``{code, message, context}``.  Exit codes: 0 success, 1 malformed
input, 2 infeasible query, 3 internal error, 4 an invariant family failed
under ``check``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import schemas
from .beta_alpha import InfeasibleError, alpha_gradient, alpha_witness, rotation_interval, rotation_set
from .checks import run_checks
from .cycles import CapExceeded
from .lp import solve_beta_primal
from .periodic import PeriodicStatus, best_periodic_with_rotation
from .sft import (
    SftError,
    SpecError,
    WeightedDigraph,
    format_rational,
    format_word,
    parse_rational,
    read_problem,
)
from .subaction import calibrated_subaction, contact_locus, verify_alpha_differential

COMMANDS = ("rotation-set", "beta", "alpha", "beta-curve", "alpha-curve", "subaction", "trajectory", "periodic", "check")
THREADS_ENV = "RELMAX_THREADS"

EXIT_OK, EXIT_MALFORMED, EXIT_INFEASIBLE, EXIT_INTERNAL, EXIT_CHECK_FAILED = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: str, message: str, exit_code: int, context: dict | None = None):
        super().__init__(message)
        self.code = code
        self.exit_code = exit_code
        self.context = context or {}

    def document(self) -> dict:
        return {"code": self.code, "message": str(self), "context": self.context}


def _parse_vector(text: str | None, dim: int, name: str, exact: bool = False) -> list | None:
    """``"1/2"`` or ``"1/2,0.25"``; exact values stay Fractions."""
    if text is None:
        return None
    try:
        parts = [parse_rational(p) for p in text.split(",")]
    except ValueError as exc:
        raise CliError("BadParameter", f"--{name}: {exc}", EXIT_MALFORMED, {"value": text}) from exc
    if len(parts) != dim:
        raise CliError(
            "BadParameter", f"--{name} needs {dim} comma-separated components", EXIT_MALFORMED, {"value": text}
        )
    return parts if exact else [float(p) for p in parts]


def _require(value, name: str):
    if value is None:
        raise CliError("MissingParameter", f"--{name} is required for this command", EXIT_MALFORMED)
    return value


def _float_list(v) -> list[float]:
    return [float(x) for x in v]


def cmd_rotation_set(graph: WeightedDigraph, args) -> dict:
    if graph.dim <= 2:
        try:
            return rotation_set(graph, mode="exact").to_json()
        except CapExceeded:
            pass
    return rotation_set(graph, mode="sampled").to_json()


def cmd_beta(graph: WeightedDigraph, args) -> dict:
    h = _require(_parse_vector(args.h, graph.dim, "h"), "h")
    sol = solve_beta_primal(graph, h)
    if not sol.optimal:
        raise CliError("Infeasible", "h lies outside the rotation set", EXIT_INFEASIBLE, {"h": h})
    return {
        "h": h,
        "beta": sol.value,
        "measure": sol.measure.to_json(graph),
        "dual_multipliers": _float_list(sol.dual_multipliers),
    }


def cmd_alpha(graph: WeightedDigraph, args) -> dict:
    c = _require(_parse_vector(args.c, graph.dim, "c"), "c")
    val, witness = alpha_witness(graph, c)
    grad, unique = alpha_gradient(graph, c)
    return {
        "c": c,
        "alpha": val,
        "witness": witness.to_json(graph),
        "gradient": [format_rational(x) for x in grad],
        "unique": unique,
    }


def _grid(lo: Fraction, hi: Fraction, count: int) -> list[Fraction]:
    if count <= 0:
        return []
    if count == 1:
        return [lo]
    return [lo + (hi - lo) * Fraction(i, count - 1) for i in range(count)]


def _bounds(args, default: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    try:
        lo = parse_rational(args.lo) if args.lo is not None else default[0]
        hi = parse_rational(args.hi) if args.hi is not None else default[1]
    except ValueError as exc:
        raise CliError("BadParameter", f"--lo/--hi: {exc}", EXIT_MALFORMED) from exc
    if lo > hi:
        raise CliError("BadParameter", "--lo exceeds --hi", EXIT_MALFORMED, {"lo": str(lo), "hi": str(hi)})
    return lo, hi


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise CliError("BadParameter", f"{THREADS_ENV} must be an integer", EXIT_MALFORMED, {"value": env})
    return 1


def sweep(fn: Callable[[Fraction], float | None], points: Sequence[Fraction], threads: int) -> list[tuple[float, float | None]]:
    """Evaluate ``fn`` over the grid; rows come back in grid order whatever the pool does."""
    if threads <= 1 or len(points) <= 1:
        values = [fn(p) for p in points]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(fn, points))
    return [(float(p), v) for p, v in zip(points, values)]


def _one_dim(graph: WeightedDigraph, command: str) -> None:
    if graph.dim != 1:
        raise CliError("BadParameter", f"{command} sweeps a scalar parameter; the constraint has dim {graph.dim}", EXIT_MALFORMED)


def cmd_beta_curve(graph: WeightedDigraph, args) -> dict:
    _one_dim(graph, "beta-curve")
    lo, hi = _bounds(args, rotation_interval(graph))

    def value(h: Fraction) -> float | None:
        sol = solve_beta_primal(graph, [float(h)])
        return sol.value if sol.optimal else None

    rows = sweep(value, _grid(lo, hi, args.grid), _threads(args))
    return {"parameter": "h", "value": "beta", "points": [list(r) for r in rows]}


def cmd_alpha_curve(graph: WeightedDigraph, args) -> dict:
    _one_dim(graph, "alpha-curve")
    lo, hi = _bounds(args, (Fraction(-1), Fraction(1)))
    rows = sweep(lambda c: alpha_witness(graph, [float(c)])[0], _grid(lo, hi, args.grid), _threads(args))
    return {"parameter": "c", "value": "alpha", "points": [list(r) for r in rows]}


def _weight(graph: WeightedDigraph, args) -> np.ndarray:
    c = _parse_vector(args.c, graph.dim, "c")
    if c is None:
        return graph.a
    return graph.a - graph.phi_float @ np.array(c)


def cmd_subaction(graph: WeightedDigraph, args) -> dict:
    sub = calibrated_subaction(graph, _weight(graph, args))
    doc = sub.to_json(graph)
    doc["contact_locus"] = [format_word(graph.edge_words[e]) for e in contact_locus(graph, sub)]
    return doc


def cmd_trajectory(graph: WeightedDigraph, args) -> dict:
    c = _parse_vector(args.c, graph.dim, "c") or [0.0] * graph.dim
    if args.steps < 1:
        raise CliError("BadParameter", "--steps must be positive", EXIT_MALFORMED)
    x0 = _vertex(graph, args.x0)
    check = verify_alpha_differential(graph, c, args.steps, x0)
    traj = check.trajectory
    return {
        "x0": format_word(graph.vertices[x0]),
        "steps": args.steps,
        "c": c,
        "convention": traj.to_json(graph)["convention"],
        "vertices": traj.to_json(graph)["vertices"],
        "absorption_step": check.absorption_step,
        "period": check.period,
        "gradient": [format_rational(x) for x in check.gradient],
        "unique": check.unique,
        "errors": _float_list(check.errors),
    }


def _vertex(graph: WeightedDigraph, text: str | None) -> int:
    if text is None:
        return 0
    try:
        word = tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise CliError("BadParameter", f"--x0: {exc}", EXIT_MALFORMED) from exc
    if word not in graph.vertex_index:
        raise CliError(
            "BadParameter", f"--x0 {text!r} is not a vertex word of length {graph.block}", EXIT_MALFORMED
        )
    return graph.vertex_index[word]


def cmd_periodic(graph: WeightedDigraph, args) -> dict:
    r = _require(_parse_vector(args.r, graph.dim, "r", exact=True), "r")
    if args.K < 1:
        raise CliError("BadParameter", "--K must be at least 1", EXIT_MALFORMED)
    res = best_periodic_with_rotation(graph, r, args.K, state_cap=args.state_cap)
    if res.status is PeriodicStatus.INFEASIBLE:
        raise CliError(
            "InfeasibleR", "r lies outside the rotation set", EXIT_INFEASIBLE, {"r": [format_rational(x) for x in r]}
        )
    doc = {"r": [format_rational(x) for x in r], "K": args.K}
    doc.update(res.to_json(graph))
    return doc


def cmd_check(graph: WeightedDigraph, args, problem=None) -> dict:
    families = run_checks(problem, seed=args.seed)
    docs = [f.to_json() for f in families]
    return {"passed": all(d["passed"] for d in docs), "families": docs}


HANDLERS = {
    "rotation-set": cmd_rotation_set,
    "beta": cmd_beta,
    "alpha": cmd_alpha,
    "beta-curve": cmd_beta_curve,
    "alpha-curve": cmd_alpha_curve,
    "subaction": cmd_subaction,
    "trajectory": cmd_trajectory,
    "periodic": cmd_periodic,
    "check": cmd_check,
}


def _csv(command: str, doc: dict) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    if command in ("beta-curve", "alpha-curve"):
        w.writerow([doc["parameter"], doc["value"]])
        for p, v in doc["points"]:
            w.writerow([repr(p), "" if v is None else repr(v)])
    elif command == "trajectory":
        w.writerow(["k", "error"])
        for k, e in enumerate(doc["errors"], start=1):
            w.writerow([k, repr(e)])
    elif command == "check":
        w.writerow(["family", "passed", "max_residual", "tolerance", "checks"])
        for f in doc["families"]:
            w.writerow([f["family"], f["passed"], repr(f["max_residual"]), repr(f["tolerance"]), f["checks"]])
    elif command == "subaction":
        w.writerow(["vertex", "u"])
        for v, u in doc["u"].items():
            w.writerow([v, repr(u)])
    elif command == "periodic":
        w.writerow(["period", "value"])
        for row in doc["by_period"]:
            w.writerow([row["period"], repr(row["value"])])
    else:
        raise CliError("BadParameter", f"CSV output is not available for {command}", EXIT_MALFORMED)
    return out.getvalue()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="relmax", description="Constrained maximization of invariant-measure integrals.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("spec", help="JSON spec file")
    p.add_argument("--h", help="rotation vector, e.g. 1/2 or 1/3,0")
    p.add_argument("--c", help="dual vector, e.g. -2 or 1,0.5")
    p.add_argument("--r", help="exact rational rotation target for periodic")
    p.add_argument("--grid", type=int, default=11, help="number of sweep points")
    p.add_argument("--lo", help="sweep lower end (default: rotation interval or -1)")
    p.add_argument("--hi", help="sweep upper end (default: rotation interval or 1)")
    p.add_argument("--steps", type=int, default=1000, help="trajectory length")
    p.add_argument("--x0", help="starting vertex word for trajectory")
    p.add_argument("--K", type=int, default=20, help="maximal period for periodic")
    p.add_argument("--state-cap", type=int, default=10**8, dest="state_cap")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", choices=("json", "csv"), default="json")
    p.add_argument("--threads", type=int, default=None, help=f"sweep workers (default ${THREADS_ENV} or 1)")
    return p


def _clean(x):
    """Replace non-finite floats so the document stays valid JSON."""
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_MALFORMED
    try:
        try:
            problem = read_problem(args.spec)
            graph = problem.graph()
        except FileNotFoundError as exc:
            raise CliError("SpecNotFound", str(exc), EXIT_MALFORMED, {"path": args.spec}) from exc
        except SpecError as exc:
            raise CliError("MalformedSpec", "; ".join(exc.problems), EXIT_MALFORMED, {"problems": exc.problems}) from exc
        except SftError as exc:
            raise CliError(type(exc).__name__.replace("Error", ""), str(exc), EXIT_MALFORMED) from exc
        if args.command == "check":
            doc = cmd_check(graph, args, problem)
        else:
            doc = HANDLERS[args.command](graph, args)
        doc = _clean(doc)
        schemas.validate_result(args.command, doc)
        if args.output == "csv":
            stdout.write(_csv(args.command, doc))
        else:
            stdout.write(json.dumps(doc, indent=2) + "\n")
        if args.command == "check" and not doc["passed"]:
            return EXIT_CHECK_FAILED
        return EXIT_OK
    except CliError as exc:
        stderr.write(json.dumps(exc.document()) + "\n")
        return exc.exit_code
    except InfeasibleError as exc:
        stderr.write(json.dumps({"code": "Infeasible", "message": str(exc), "context": {}}) + "\n")
        return EXIT_INFEASIBLE
    except (ValueError, TypeError) as exc:
        stderr.write(json.dumps({"code": "BadInput", "message": str(exc), "context": {}}) + "\n")
        return EXIT_MALFORMED
    except Exception as exc:  # noqa: BLE001 - last-resort diagnostic
        context = {"type": type(exc).__name__}
        stderr.write(json.dumps({"code": "InternalError", "message": str(exc), "context": context}) + "\n")
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
