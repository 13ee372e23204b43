"""Command-line interface.

    sudokusym [--box B] [--seed S] [--workers W] [--format F] COMMAND ...

Commands: transform, canon, equiv, auto, census, audit. Grids come from
file arguments or standard input (``-``). Errors go to stderr with exit
status 2; ``equiv`` exits 1 for non-equivalent grids and ``audit`` exits 1
when a check fails.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import canonical
from .audit import run_audit
from .canonical import S_AND_O, S_ONLY
from .dsl import parse_expr
from .errors import ExprSyntaxError, SudokuSymError
from .grid import Grid, apply_symmetry, parse_grid, serialize_grid
from .perm import BoxSize

log = logging.getLogger("sudokusym")

FORMATS = ("line", "block", "json")


class CliError(Exception):
    pass


def _read_text(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    try:
        with open(source) as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {source}: {exc.strerror}") from exc


def read_grids(text: str, box: BoxSize) -> list[Grid]:
    """One JSON grid, one block grid, or a corpus of one line-format grid per line."""
    if text.strip().startswith("{"):
        return [parse_grid(text, box)]
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) > 1 and all(len(ln) == box.n * box.n for ln in lines):
        return [parse_grid(ln, box) for ln in lines]
    return [parse_grid(text, box)]


def read_one(source: str, box: BoxSize) -> Grid:
    grids = read_grids(_read_text(source), box)
    if len(grids) != 1:
        raise CliError(f"{source}: expected one grid, found {len(grids)}")
    return grids[0]


def _emit(grids, fmt: str):
    sep = "\n\n" if fmt == "block" else "\n"
    print(sep.join(serialize_grid(g, fmt) for g in grids))


def cmd_transform(args) -> int:
    g = parse_expr(args.expr, args.box)
    grids = read_grids(_read_text(args.grid), args.box)
    _emit([apply_symmetry(g, x) for x in grids], args.format)
    return 0


def cmd_canon(args) -> int:
    mode = S_ONLY if args.geometry_only else S_AND_O
    grids = read_grids(_read_text(args.grid), args.box)
    forms = [canonical.canonicalize(x, mode, args.workers) for x in grids]
    if args.format == "json":
        for cf in forms:
            print(json.dumps({
                "box": cf.grid.box.b,
                "cells": cf.grid.cells.tolist(),
                "mode": mode,
                "witness": {
                    "row": list(cf.symmetry.row.images),
                    "col": list(cf.symmetry.col.images),
                    "transposed": cf.symmetry.transposed,
                    "relabel": list(cf.relabel.images),
                },
            }))
    else:
        _emit([cf.grid for cf in forms], args.format)
    return 0


def cmd_equiv(args) -> int:
    mode = S_ONLY if args.geometry_only else S_AND_O
    g1 = read_one(args.grid1, args.box)
    g2 = read_one(args.grid2, args.box)
    same = canonical.are_equivalent(g1, g2, mode, args.workers)
    print("equivalent" if same else "not equivalent")
    return 0 if same else 1


def cmd_auto(args) -> int:
    rep = canonical.stabilizer(read_one(args.grid, args.box), args.workers)
    print(json.dumps(rep.to_dict()))
    return 0


def cmd_census(args) -> int:
    if args.box.b != 2:
        raise CliError("census is only feasible for --box 2")
    rep = canonical.shidoku_census(args.workers)
    print(json.dumps({"schemaVersion": 1, **rep.to_dict()}))
    return 0


def cmd_audit(args) -> int:
    rep = run_audit(args.box, seed=args.seed, samples=args.samples)
    print(json.dumps(rep.to_dict(timings=args.timings), indent=2))
    if args.figures:
        from .plotting import write_report_files

        for p in write_report_files(rep, args.figures):
            log.info("wrote %s", p)
    if not rep.ok:
        for name in rep.failed:
            print(f"audit check failed: {name}", file=sys.stderr)
        return 1
    return 0


def _global_options(parser: argparse.ArgumentParser, suppress: bool):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--box", type=int, default=default(3), help="block edge length b (default 3)")
    parser.add_argument("--seed", type=int, default=default(0), help="seed for sampled checks")
    parser.add_argument("--workers", type=int, default=default(canonical.default_workers()),
                        help="worker processes for the symmetry scans")
    parser.add_argument("--format", choices=FORMATS, default=default("line"), help="grid output format")
    parser.add_argument("-v", "--verbose", action="store_true", default=default(False))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sudokusym", description="Sudoku grid symmetry toolkit")
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", parents=[common], help="apply a symmetry expression to grids")
    p.add_argument("-e", "--expr", required=True, help='e.g. "V^4" or "r[987654321] d"')
    p.add_argument("grid", nargs="?", default="-")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("canon", parents=[common], help="canonical form of grids")
    p.add_argument("--geometry-only", action="store_true", help="do not relabel digits")
    p.add_argument("grid", nargs="?", default="-")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("equiv", parents=[common], help="exit 0 if two grids are equivalent")
    p.add_argument("--geometry-only", action="store_true")
    p.add_argument("grid1")
    p.add_argument("grid2")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("auto", parents=[common], help="stabilizer and orbit size as JSON")
    p.add_argument("grid", nargs="?", default="-")
    p.set_defaults(func=cmd_auto)

    p = sub.add_parser("census", parents=[common], help="classify all complete 4x4 grids")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("audit", parents=[common], help="verify the group structure, print JSON")
    p.add_argument("--samples", type=int, default=1000, help="samples per randomized check")
    p.add_argument("--figures", metavar="DIR", help="also write CSV tables and PNG figures here")
    p.add_argument("--timings", action="store_true", help="include per-check timings")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        args.box = BoxSize(args.box)
        if args.workers < 1:
            raise CliError("--workers must be >= 1")
        return args.func(args)
    except ExprSyntaxError as exc:
        print(f"error: bad expression: {exc}", file=sys.stderr)
        return 2
    except (SudokuSymError, CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
