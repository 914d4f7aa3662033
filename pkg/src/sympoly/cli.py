"""Command-line front end.

Exit status: 0 on success or match, 1 on mismatch (or non-membership for
``check``), 2 on usage errors, unknown classes, caps and malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .asm import SymmetryClass, is_member, matrix_to_json, parse_matrix
from .core import format_rational, parse_rational
from .enumeration import CapExceeded, enumerate_class, max_n_for

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _class(label: str) -> SymmetryClass:
    try:
        return SymmetryClass.parse(label)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def parse_cost(text: str) -> list[list[int]]:
    """Integer matrix in the matrix text format or as JSON (list of rows or {"entries": ...})."""
    s = text.strip()
    if s.startswith("[") or s.startswith("{"):
        obj = json.loads(s)
        rows = obj["entries"] if isinstance(obj, dict) else obj
    else:
        lines = [ln.split() for ln in s.splitlines() if ln.strip()]
        if not lines or len(lines[0]) != 1:
            raise ValueError("first line must hold the matrix size")
        rows = lines[1:]
        if len(rows) != int(lines[0][0]):
            raise ValueError("row count does not match the declared size")
    out = [[int(v) for v in r] for r in rows]
    if any(len(r) != len(out) for r in out):
        raise ValueError("cost matrix must be square")
    return out


def _parse_point(text: str) -> list[Fraction]:
    s = text.strip()
    vals = json.loads(s) if s.startswith("[") else s.split()
    return [parse_rational(v) for v in vals]


def _check_cap(cls: SymmetryClass, n: int, args: argparse.Namespace) -> None:
    if args.max_n is not None:
        print(f"warning: cap raised to n={args.max_n}; runtimes grow combinatorially", file=sys.stderr)
    cap = max_n_for(cls, args.max_n)
    if n > cap:
        raise UsageError(f"n={n} exceeds the cap {cap} for {cls.value} (use --max-n)")
    if n < 1:
        raise UsageError("n must be at least 1")


def _emit_report(report) -> int:
    print(report.to_json())
    return EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_enumerate(args) -> int:
    _check_cap(args.cls, args.n, args)
    members = enumerate_class(args.cls, args.n, max_n=max_n_for(args.cls, args.max_n), jobs=args.jobs)
    for m in members:
        print(matrix_to_json(m), flush=args.stream)
    print(json.dumps({"count": len(members)}))
    return EXIT_OK


def cmd_count(args) -> int:
    _check_cap(args.cls, args.n, args)
    print(len(enumerate_class(args.cls, args.n, max_n=max_n_for(args.cls, args.max_n), jobs=args.jobs)))
    return EXIT_OK


def cmd_hrep(args) -> int:
    from .hrep import build_core, build_fullspace

    if args.n < 1:
        raise UsageError("n must be at least 1")
    if args.cuts and not (args.cls is SymmetryClass.QTSASM and args.kind == "core"):
        raise UsageError("--cuts applies to the QTSASM core system only")
    if args.kind == "core":
        if args.cuts:
            from .cuts import MAX_CUT_N, build_qtsasm_hull

            if args.n > MAX_CUT_N:
                raise UsageError(f"cut generation is capped at n={MAX_CUT_N}")
            system = build_qtsasm_hull(args.n)
        else:
            system = build_core(args.cls, args.n)
    else:
        system = build_fullspace(args.cls, args.n, prescribed_middle=args.kind == "full")
    sys.stdout.write(system.to_ine() if args.format == "ine" else system.to_json() + "\n")
    return EXIT_OK


def cmd_solve(args) -> int:
    from .verify import min_cost_xasm

    cost = parse_cost(_read(args.cost))
    n = args.n if args.n is not None else len(cost)
    if len(cost) != n:
        raise UsageError(f"cost matrix is {len(cost)}x{len(cost)}, expected {n}x{n}")
    if args.cls is SymmetryClass.QTSASM:
        from .cuts import MAX_CUT_N

        if n > MAX_CUT_N:
            raise UsageError(f"QTSASM optimisation needs cuts, capped at n={MAX_CUT_N}")
    try:
        m, value = min_cost_xasm(args.cls, n, cost)
    except ValueError as e:
        print(json.dumps({"class": args.cls.value, "n": n, "error": str(e)}))
        return EXIT_MISMATCH
    print(json.dumps({"class": args.cls.value, "n": n, "value": format_rational(value), "matrix": [list(r) for r in m.entries]}))
    return EXIT_OK


def cmd_verify_dim(args) -> int:
    from .verify import verify_dimension

    _check_cap(args.cls, args.n, args)
    return _emit_report(verify_dimension(args.cls, args.n))


def cmd_verify_facets(args) -> int:
    from .verify import verify_facets

    return _emit_report(verify_facets(args.cls, args.n, report_only=args.report_only))


def cmd_verify_hull(args) -> int:
    from .verify import verify_hull_equality

    _check_cap(args.cls, args.n, args)
    return _emit_report(verify_hull_equality(args.cls, args.n, trials=args.trials, seed=args.seed))


def cmd_cuts(args) -> int:
    from .cuts import MAX_CUT_N, canonical_cuts, count_valid_signs, separate
    from .core import core_size

    if not 1 <= args.n <= MAX_CUT_N:
        raise UsageError(f"n must be in [1, {MAX_CUT_N}]")
    if args.separate is None:
        print(json.dumps({"n": args.n, "valid_signs": count_valid_signs(args.n), "cuts": len(canonical_cuts(args.n))}))
        return EXIT_OK
    y = _parse_point(_read(args.separate))
    if len(y) != core_size(SymmetryClass.QTSASM, args.n):
        raise UsageError(f"point has {len(y)} coordinates, expected {core_size(SymmetryClass.QTSASM, args.n)}")
    row = separate(y, args.n)
    if row is None:
        print(json.dumps({"violated": None}))
        return EXIT_OK
    coeffs = {str(k): format_rational(c) for k, c in row.coeffs}
    print(json.dumps({"violated": {"tag": row.tag, "coeffs": coeffs, "rel": row.rel, "rhs": format_rational(row.rhs)}}))
    return EXIT_OK


def cmd_check(args) -> int:
    m = parse_matrix(_read(args.file))
    ok = is_member(m, args.cls)
    print("member" if ok else "not a member")
    return EXIT_OK if ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sympoly", description="Polytopes of symmetric alternating sign matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help, cls=True, n=True):
        p = sub.add_parser(name, help=help)
        if cls:
            p.add_argument("--class", dest="cls", type=_class, required=True, help="symmetry class, e.g. vsasm")
        if n:
            p.add_argument("--n", type=int, required=True)
        p.add_argument("--max-n", type=int, default=None, help="override the per-class size cap")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=1)
        p.set_defaults(func=func)
        return p

    p = add("enumerate", cmd_enumerate, "list class members as JSON lines")
    p.add_argument("--stream", action="store_true", help="flush every matrix as it is written")
    add("count", cmd_count, "number of class members")
    p = add("hrep", cmd_hrep, "print a constraint system")
    p.add_argument("--kind", choices=("core", "full", "intersection"), default="core")
    p.add_argument("--cuts", action="store_true", help="append the QTSASM cut rows")
    p.add_argument("--format", choices=("ine", "json"), default="ine")
    sub_solve = sub.add_parser("solve", help="minimum-cost member via linear programming")
    sub_solve.add_argument("--class", dest="cls", type=_class, required=True)
    sub_solve.add_argument("--n", type=int, default=None)
    sub_solve.add_argument("--cost", required=True, help="cost matrix file ('-' for stdin)")
    sub_solve.add_argument("--seed", type=int, default=0)
    sub_solve.set_defaults(func=cmd_solve)
    add("verify-dim", cmd_verify_dim, "compare the dimension with its closed form")
    p = add("verify-facets", cmd_verify_facets, "check a facet theorem on the core system")
    p.add_argument("--report-only", action="store_true", help="compute the facet count without a prediction")
    p = add("verify-hull", cmd_verify_hull, "optimisation-oracle check of a hull description")
    p.add_argument("--trials", type=int, default=100)
    p = add("cuts", cmd_cuts, "QTSASM sign matrices and cut separation", cls=False)
    p.add_argument("--separate", metavar="POINTFILE", default=None, help="core point (JSON list or whitespace separated)")
    p = sub.add_parser("check", help="membership test for a matrix file")
    p.add_argument("--class", dest="cls", type=_class, required=True)
    p.add_argument("file")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CapExceeded, ValueError, KeyError, json.JSONDecodeError) as e:
        print(f"sympoly: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
