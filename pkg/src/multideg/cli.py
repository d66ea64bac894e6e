"""Command-line front end: JSON in, JSON (or text) out, deterministic bytes.

Commands
    compute     multidegree polynomial by one route or all routes cross-checked
    check-wp    well-presentedness report plus sampled factorization identity
    homogenize  torus exponent matrix -> square nonnegative exponent matrix
    segre       Segre series and complement class of the monomial base scheme
    symbolic    closed-form symbolic value of the region integral

Exit codes: 0 success, 1 input/validation error, 2 method inapplicable
(non-square or not well-presented without --force), 3 internal invariant
breach (routes disagreed).  Errors are emitted as a JSON envelope.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass

from . import engine, wellpresented
from .errors import (
    InternalInvariantError,
    MultidegError,
    NonSquareError,
    NotWellPresentedError,
    ValidationError,
)
from .intersection import GeometricSetup, projective_space_setup, table_setup

DEFAULT_MAX_N = 10


@dataclass(frozen=True)
class ProblemInput:
    """Validated CLI problem: a variety setup plus rows or a torus matrix."""

    setup: GeometricSetup
    matrix: engine.ExponentMatrix | None
    torus: wellpresented.TorusMap | None
    pivot: int | None

    def to_json_dict(self) -> dict:
        if self.setup.kind == "Pn":
            variety = {"kind": "Pn", "dim": self.setup.dim_v}
        else:
            variety = {
                "kind": "table",
                "dim": self.setup.dim_v,
                "degV": self.setup.deg_v,
                "entries": [
                    {"S": sorted(j + 1 for j in s), "value": v}
                    for s, v in sorted(
                        (self.setup.table or {}).items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))
                    )
                ],
            }
        out: dict = {"variety": variety, "degrees": list(self.setup.degrees)}
        if self.matrix is not None:
            out["rows"] = [list(r) for r in self.matrix.rows]
        if self.torus is not None:
            out["torus"] = {"A": [list(r) for r in self.torus.exponents]}
        if self.pivot is not None:
            out["pivot"] = self.pivot
        return out


def _max_n() -> int:
    raw = os.environ.get("MULTIDEG_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"MULTIDEG_MAX_N={raw!r} is not an integer")


def _expect(condition: bool, path: str, message: str) -> None:
    if not condition:
        raise ValidationError(f"{path}: {message}")


def _int_matrix(obj, path: str, allow_negative: bool) -> list[list[int]]:
    _expect(isinstance(obj, list) and obj, path, "expected a nonempty array of rows")
    rows = []
    for i, row in enumerate(obj):
        _expect(isinstance(row, list) and row, f"{path}[{i}]", "expected a nonempty array")
        out_row = []
        for j, v in enumerate(row):
            _expect(
                isinstance(v, int) and not isinstance(v, bool),
                f"{path}[{i}][{j}]",
                "expected an integer",
            )
            if not allow_negative:
                _expect(v >= 0, f"{path}[{i}][{j}]", "negative exponent")
            out_row.append(v)
        rows.append(out_row)
    width = len(rows[0])
    for i, row in enumerate(rows):
        _expect(len(row) == width, f"{path}[{i}]", f"expected {width} entries")
    return rows


def parse_input(obj: dict, pivot_override: int | None = None) -> ProblemInput:
    """Validate the JSON problem document; errors name the offending path."""
    _expect(isinstance(obj, dict), "$", "expected a JSON object")
    unknown = set(obj) - {"variety", "degrees", "rows", "torus", "pivot"}
    _expect(not unknown, "$", f"unknown keys {sorted(unknown)}")
    has_rows = "rows" in obj
    has_torus = "torus" in obj
    _expect(
        has_rows != has_torus, "$", "exactly one of 'rows' or 'torus' must be present"
    )

    torus = None
    matrix = None
    if has_torus:
        t = obj["torus"]
        _expect(isinstance(t, dict) and "A" in t, "torus", "expected an object with key 'A'")
        a_rows = _int_matrix(t["A"], "torus.A", allow_negative=True)
        _expect(len(a_rows) == len(a_rows[0]), "torus.A", "must be square")
        torus = wellpresented.TorusMap.from_rows(a_rows)
        n = torus.k + 1
    else:
        rows = _int_matrix(obj["rows"], "rows", allow_negative=False)
        n = len(rows[0])

    cap = _max_n()
    _expect(n <= cap, "$", f"instance size n={n} exceeds MULTIDEG_MAX_N={cap}")

    degrees = obj.get("degrees")
    if degrees is None and has_torus:
        degrees = [1] * n
    _expect(isinstance(degrees, list) and degrees, "degrees", "expected a nonempty array")
    for j, d in enumerate(degrees):
        _expect(
            isinstance(d, int) and not isinstance(d, bool) and d >= 1,
            f"degrees[{j}]",
            "expected a positive integer",
        )
    _expect(len(degrees) == n, "degrees", f"expected {n} entries to match the rows")

    variety = obj.get("variety")
    if variety is None and has_torus:
        variety = {"kind": "Pn", "dim": n - 1}
    _expect(isinstance(variety, dict) and "kind" in variety, "variety", "expected an object with 'kind'")
    kind = variety["kind"]
    if kind == "Pn":
        _expect(
            isinstance(variety.get("dim"), int) and variety["dim"] >= 0,
            "variety.dim",
            "expected a nonnegative integer",
        )
        setup = projective_space_setup(variety["dim"], degrees)
    elif kind == "table":
        _expect(
            isinstance(variety.get("dim"), int) and variety["dim"] >= 0,
            "variety.dim",
            "expected a nonnegative integer",
        )
        _expect(
            isinstance(variety.get("degV"), int) and variety["degV"] >= 1,
            "variety.degV",
            "expected a positive integer",
        )
        entries = {}
        for k, item in enumerate(variety.get("entries", [])):
            path = f"variety.entries[{k}]"
            _expect(
                isinstance(item, dict) and "S" in item and "value" in item,
                path,
                "expected an object with keys 'S' and 'value'",
            )
            subset = item["S"]
            _expect(
                isinstance(subset, list)
                and all(isinstance(j, int) and 1 <= j <= n for j in subset),
                f"{path}.S",
                f"expected a list of indices in 1..{n}",
            )
            _expect(
                len(set(subset)) == len(subset), f"{path}.S", "duplicate index"
            )
            _expect(
                isinstance(item["value"], int) and not isinstance(item["value"], bool),
                f"{path}.value",
                "expected an integer",
            )
            entries[frozenset(j - 1 for j in subset)] = item["value"]
        setup = table_setup(variety["dim"], variety["degV"], degrees, entries)
    else:
        raise ValidationError(f"variety.kind: expected 'Pn' or 'table', got {kind!r}")

    if has_torus and setup.kind == "Pn":
        _expect(setup.dim_v == n - 1, "variety.dim", f"torus input implies dimension {n - 1}")
        _expect(
            all(d == 1 for d in degrees), "degrees", "torus input implies unit degrees"
        )

    pivot = obj.get("pivot")
    if pivot is not None:
        _expect(
            isinstance(pivot, int) and not isinstance(pivot, bool),
            "pivot",
            "expected an integer row index (0-based)",
        )
    if pivot_override is not None:
        pivot = pivot_override
    if has_rows:
        matrix = engine.ExponentMatrix.from_rows(rows, pivot)
        if pivot is not None:
            _expect(0 <= pivot < len(rows), "pivot", "row index out of range")
    return ProblemInput(setup=setup, matrix=matrix, torus=torus, pivot=pivot)


def _load_document(path: str) -> dict:
    data = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"input is not valid JSON: {exc}")


def _emit(payload: dict, as_text: bool, text_lines: list[str] | None = None) -> None:
    if as_text and text_lines is not None:
        print("\n".join(text_lines))
    else:
        print(json.dumps(payload, sort_keys=True, indent=2))


def _error_envelope(exc: MultidegError) -> dict:
    payload: dict = {
        "error": {"type": type(exc).__name__, "message": str(exc)}
    }
    report = getattr(exc, "report", None)
    if report is not None:
        payload["error"]["well_presented"] = report.to_json_dict()
    offenders = getattr(exc, "offending_rows", None)
    if offenders is not None:
        payload["error"]["offending_rows"] = list(offenders)
    return payload


def _problem_matrix(problem: ProblemInput) -> engine.ExponentMatrix:
    if problem.matrix is not None:
        return problem.matrix
    matrix = wellpresented.homogenize_torus(problem.torus)
    if problem.pivot is not None:
        matrix = matrix.with_pivot(problem.pivot)
    return matrix


def _cmd_compute(args) -> int:
    problem = parse_input(_load_document(args.input), args.pivot)
    matrix = _problem_matrix(problem)
    setup = problem.setup
    method = args.method

    routes: dict[str, list[int] | None] = {}
    skipped: dict[str, str] = {}
    timings: dict[str, float] = {}
    warnings: list[str] = []

    def run(name: str, fn) -> None:
        start = time.perf_counter()
        routes[name] = list(fn().coefficients)
        timings[name] = time.perf_counter() - start

    def skip(name: str, reason: str) -> None:
        skipped[name] = reason
        routes[name] = None

    # gate the char-poly-based routes once, here
    wp_report = None
    charpoly_reason = None
    if method in ("charpoly", "prechar", "all"):
        if not matrix.is_square:
            charpoly_reason = (
                f"needs a square matrix; got {len(matrix.rows)} rows of width {matrix.n}"
            )
            if method in ("charpoly", "prechar"):
                raise NonSquareError(charpoly_reason)
        else:
            wp_report = wellpresented.check_well_presented(matrix)
            if not wp_report.ok:
                if args.force:
                    warnings.append(
                        "forced: char-poly formulas applied to a map that is "
                        "not well-presented; coefficients are formal"
                    )
                else:
                    charpoly_reason = "map is not well-presented (see well_presented report)"
                    if method in ("charpoly", "prechar"):
                        raise NotWellPresentedError(
                            "map is not well-presented; rerun with --force to compute anyway",
                            report=wp_report,
                        )

    if method in ("triangulation", "all"):
        run("triangulation", lambda: engine.multidegree_polynomial(matrix, setup))
    if method in ("charpoly", "all"):
        if charpoly_reason and method == "all":
            skip("charpoly", charpoly_reason)
        else:
            run(
                "charpoly",
                lambda: wellpresented.multidegree_via_charpoly(matrix, setup, force=True),
            )
    if method in ("prechar", "all"):
        if charpoly_reason and method == "all":
            skip("prechar", charpoly_reason)
        else:
            run(
                "prechar",
                lambda: wellpresented.multidegree_via_prechar(matrix, setup, force=True),
            )
    if method == "all" and problem.torus is not None:
        if wp_report is not None and wp_report.ok:
            run("torus", lambda: wellpresented.torus_multidegrees(problem.torus))
        else:
            skip("torus", "torus route requires a well-presented homogenization")

    computed = {name: g for name, g in routes.items() if g is not None}
    agreement = len(set(map(tuple, computed.values()))) <= 1
    gamma = next(iter(computed.values()), None)

    payload: dict = {
        "command": "compute",
        "method": method,
        "gamma": gamma,
        "agreement": agreement,
        "routes": routes,
        "skipped": skipped,
        "forced": bool(warnings),
        "warnings": warnings,
    }
    if not agreement:
        payload["discrepancy"] = {
            "detail": "routes returned different multidegrees",
            "per_route": dict(computed),
        }
    if wp_report is not None:
        payload["well_presented"] = wp_report.to_json_dict()
    if method in ("triangulation", "all"):
        report = engine.multidegree_report(matrix, setup)
        payload["report"] = report.to_json_dict()
        payload["gamma_text"] = str(report.gamma)
    if args.symbolic:
        payload["symbolic"] = str(engine.symbolic_integral(matrix, setup))
    if args.dump_triangulation:
        _, tri = engine.triangulated_region(matrix)
        payload["triangulation_dump"] = tri.dump_lines()
    if args.timing:
        payload["timing_seconds"] = {k: round(v, 6) for k, v in timings.items()}

    lines = []
    if args.text:
        lines.append(f"gamma: {payload.get('gamma_text', gamma)}")
        for name in ("triangulation", "charpoly", "prechar", "torus"):
            if routes.get(name) is not None:
                lines.append(f"  {name}: {routes[name]}")
            elif name in skipped:
                lines.append(f"  {name}: skipped ({skipped[name]})")
        lines.append(f"agreement: {agreement}")
        if "report" in payload:
            rep = payload["report"]
            lines.append(f"bundle degree: {rep['bundle_degree']}")
            lines.append(f"base locus contribution: {rep['base_locus_contribution']}")
            lines.append(f"dominant: {rep['dominant']}")
        if args.dump_triangulation:
            lines.extend(payload["triangulation_dump"])
        if args.symbolic:
            lines.append(f"symbolic: {payload['symbolic']}")
        for w in warnings:
            lines.append(f"warning: {w}")
    _emit(payload, args.text, lines)
    if not agreement:
        return InternalInvariantError.exit_code
    return 0


def _cmd_check_wp(args) -> int:
    problem = parse_input(_load_document(args.input), args.pivot)
    matrix = _problem_matrix(problem)
    report = wellpresented.check_well_presented(matrix)
    payload = {
        "command": "check-wp",
        "well_presented": report.to_json_dict(),
    }
    if args.samples > 0:
        ok = wellpresented.charpoly_factorization_check(
            matrix, samples=args.samples, seed=args.seed
        )
        payload["factorization_identity"] = {
            "samples": args.samples,
            "seed": args.seed,
            "ok": ok,
        }
    lines = [f"well-presented: {report.ok}"]
    for item in report.to_json_dict()["projection_violations"]:
        lines.append(f"  projection violation: I={item['I']} row={item['row']}")
    for item in report.to_json_dict()["sign_violations"]:
        lines.append(
            f"  sign violation: I={item['I']} det={item['det']} required sign {item['required_sign']}"
        )
    _emit(payload, args.text, lines)
    return 0


def _cmd_homogenize(args) -> int:
    problem = parse_input(_load_document(args.input), args.pivot)
    if problem.torus is None:
        raise ValidationError("homogenize expects a 'torus' input")
    matrix = wellpresented.homogenize_torus(problem.torus)
    payload = {
        "command": "homogenize",
        "rows": [list(r) for r in matrix.rows],
        "pivot": matrix.pivot,
    }
    lines = [" ".join(map(str, row)) for row in matrix.rows]
    _emit(payload, args.text, lines)
    return 0


def _cmd_segre(args) -> int:
    problem = parse_input(_load_document(args.input), args.pivot)
    if problem.matrix is None:
        raise ValidationError("segre expects a 'rows' input")
    segre, complement = engine.segre_class(problem.matrix, problem.setup)
    payload = {
        "command": "segre",
        "segre": str(segre),
        "complement": str(complement),
    }
    lines = [f"segre: {segre}", f"complement: {complement}"]
    _emit(payload, args.text, lines)
    return 0


def _cmd_symbolic(args) -> int:
    problem = parse_input(_load_document(args.input), args.pivot)
    matrix = _problem_matrix(problem)
    expr = engine.symbolic_integral(matrix, problem.setup)
    payload = {"command": "symbolic", "expression": str(expr)}
    _emit(payload, args.text, [str(expr)])
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", default="-", help="path to the JSON problem, or - for stdin")
    parser.add_argument("--pivot", type=int, default=None, help="0-based pivot row override")
    parser.add_argument("--seed", type=int, default=0, help="seed for sampled identity checks")
    parser.add_argument("--text", action="store_true", help="human-readable output")
    parser.add_argument(
        "--json", dest="text", action="store_false", help="JSON output (default)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multideg",
        description="Exact multidegrees of monomial rational maps",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="compute the multidegree polynomial")
    _add_common(compute)
    compute.add_argument(
        "--method",
        choices=("triangulation", "charpoly", "prechar", "all"),
        default="all",
    )
    compute.add_argument(
        "--force",
        action="store_true",
        help="apply char-poly formulas even when not well-presented",
    )
    compute.add_argument("--symbolic", action="store_true", help="include the symbolic integral")
    compute.add_argument(
        "--dump-triangulation", action="store_true", help="include the triangulation table"
    )
    compute.add_argument(
        "--timing", action="store_true", help="include per-route timings (non-deterministic)"
    )
    compute.set_defaults(func=_cmd_compute)

    check = sub.add_parser("check-wp", help="well-presentedness diagnosis")
    _add_common(check)
    check.add_argument("--samples", type=int, default=20)
    check.set_defaults(func=_cmd_check_wp)

    homog = sub.add_parser("homogenize", help="homogenize a torus exponent matrix")
    _add_common(homog)
    homog.set_defaults(func=_cmd_homogenize)

    segre = sub.add_parser("segre", help="Segre series of the monomial base scheme")
    _add_common(segre)
    segre.set_defaults(func=_cmd_segre)

    symbolic = sub.add_parser("symbolic", help="closed-form symbolic region integral")
    _add_common(symbolic)
    symbolic.set_defaults(func=_cmd_symbolic)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MultidegError as exc:
        print(json.dumps(_error_envelope(exc), sort_keys=True, indent=2))
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
