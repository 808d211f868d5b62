"""Command-line interface.

Subcommands:

    compute    one (group, delta, alpha, k) value as a JSON record
    sweep      alpha sweeps to CSV/JSON/SVG (optionally with a PNG figure)
    verify     built-in verification criteria (quick or full)
    gram-dump  a weighted Gram matrix as (row, col, value) CSV

Exit codes: 0 success, 1 solver error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .api import ROUTES, solve
from .density import SymmetryGroup, as_group
from .gram import NodeWindow, assemble_gram
from .report import (
    DEFAULT_DELTAS,
    FORMATS,
    SweepConfig,
    _error_code,
    bandwidth_warning,
    run_sweep,
)
from .verify import run_criteria

_ALL_GROUPS = tuple(str(g) for g in SymmetryGroup)


def _group_type(text: str) -> SymmetryGroup:
    try:
        return as_group(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zerogap",
        description=(
            "Sharp constants bounding the distance from a height alpha to "
            "the nearest normalized L-function zero, for the five symmetry "
            "group densities."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    comp = sub.add_parser("compute", help="one value as a JSON record")
    comp.add_argument("--group", type=_group_type, required=True,
                      help=f"one of {', '.join(_ALL_GROUPS)}")
    comp.add_argument("--delta", type=float, required=True, help="bandwidth > 0")
    comp.add_argument("--alpha", type=float, required=True, help="height")
    comp.add_argument("--k", type=int, default=1, help="moment order (default 1)")
    comp.add_argument("--route", choices=ROUTES, default="auto")
    comp.add_argument("--nodes", type=int, default=None,
                      help="minimum basis size for truncating routes")
    comp.add_argument("--tol", type=float, default=1e-10)

    sweep = sub.add_parser("sweep", help="alpha sweep to a data file")
    sweep.add_argument("--groups", nargs="+", default=list(_ALL_GROUPS),
                       help="group names (space or comma separated)")
    sweep.add_argument("--deltas", nargs="+", type=float,
                       default=list(DEFAULT_DELTAS))
    sweep.add_argument("--alpha-min", type=float, default=0.0)
    sweep.add_argument("--alpha-max", type=float, default=4.0)
    sweep.add_argument("--alpha-step", type=float, default=0.05)
    sweep.add_argument("--k", type=int, default=1)
    sweep.add_argument("--route", choices=ROUTES, default="auto")
    sweep.add_argument("--out", default="sweep.csv", help="output path")
    sweep.add_argument("--format", choices=FORMATS, default="csv")
    sweep.add_argument("--figures", action=argparse.BooleanOptionalAction,
                       default=True,
                       help="also render a PNG figure next to CSV/JSON output")

    ver = sub.add_parser("verify", help="run the built-in criteria")
    ver.add_argument("--level", choices=("quick", "full"), default="quick")

    dump = sub.add_parser("gram-dump", help="write a Gram matrix as CSV")
    dump.add_argument("--group", type=_group_type, required=True)
    dump.add_argument("--delta", type=float, required=True)
    dump.add_argument("--n-min", type=int, required=True, help="first node index")
    dump.add_argument("--n-max", type=int, required=True, help="last node index")
    dump.add_argument("--out", default=None, help="output path (default stdout)")
    return parser


def _warn(group: SymmetryGroup, delta: float) -> None:
    note = bandwidth_warning(group, delta)
    if note is not None:
        print(f"warning: {note}", file=sys.stderr)


def cmd_compute(args) -> int:
    _warn(args.group, args.delta)
    try:
        sol = solve(
            args.group,
            args.delta,
            args.alpha,
            k=args.k,
            route=args.route,
            nodes=args.nodes,
            tol=args.tol,
        )
    except Exception as exc:  # noqa: BLE001 - reported as machine-readable JSON
        print(json.dumps({"error": _error_code(exc), "message": str(exc)}))
        return 1
    record = {
        "group": str(args.group),
        "delta": float(args.delta),
        "alpha": float(args.alpha),
        "k": int(args.k),
        "lambda0": float(sol.lambda0),
        "aValue": float(sol.a_value),
        "sqrtA": float(sol.sqrt_a),
        "route": sol.route,
        "nodes": int(sol.diagnostics.get("nodes", 0)),
        "residual": float(sol.diagnostics.get("residual", 0.0)),
    }
    print(json.dumps(record, indent=2))
    return 0


def cmd_sweep(args, parser: argparse.ArgumentParser) -> int:
    names = [t for raw in args.groups for t in raw.split(",") if t]
    try:
        groups = tuple(as_group(name) for name in names)
        cfg = SweepConfig(
            groups=groups,
            deltas=tuple(args.deltas),
            alpha_min=args.alpha_min,
            alpha_max=args.alpha_max,
            alpha_step=args.alpha_step,
            k=args.k,
            route=args.route,
            out_path=args.out,
            format=args.format,
        )
    except ValueError as exc:
        parser.error(str(exc))
    if args.route == "kernel" and args.k != 1:
        parser.error("the kernel route computes k = 1 only")
    try:
        rows = run_sweep(cfg, figure=args.figures and args.format != "svg")
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    ok = sum(1 for row in rows if row.ok)
    print(f"wrote {args.out}: {ok}/{len(rows)} points computed", file=sys.stderr)
    if ok < 0.9 * len(rows):
        print("error: more than 10% of the sweep points failed", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    all_passed = True
    for result in run_criteria(args.level):
        print(result.line, flush=True)
        all_passed = all_passed and result.passed
    print("verify:", "all criteria passed" if all_passed else "FAILURES above")
    return 0 if all_passed else 1


def cmd_gram_dump(args) -> int:
    _warn(args.group, args.delta)
    try:
        window = NodeWindow(args.n_min, args.n_max)
        gram = assemble_gram(args.group, args.delta, window)
    except Exception as exc:  # noqa: BLE001
        print(f"error: {exc}", file=sys.stderr)
        return 1
    lines = ["row,col,value"]
    idx = window.indices
    for i, m in enumerate(idx):
        row = gram.entries[i]
        lines.extend(f"{m},{n},{float(row[j])!r}" for j, n in enumerate(idx))
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(f"wrote {args.out}: {window.size}x{window.size} entries",
              file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "compute":
        return cmd_compute(args)
    if args.command == "sweep":
        return cmd_sweep(args, parser)
    if args.command == "verify":
        return cmd_verify(args)
    return cmd_gram_dump(args)


if __name__ == "__main__":
    sys.exit(main())
