"""Command-line interface for planes, arcs, groups, fixtures, and search.

Every command prints a deterministic `key: value` report (timing only
with --stats) so the output can be golden-tested and scripted.  Exit
codes: 0 success, 1 usage or input errors, 2 search ended by its time
budget, 3 verification failure on arc-verify.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import arc as arcmod
from .geom import build_plane, iter_bits, plane_summary
from .group import element_order, collineation_group, linear_collineation_group
from .ring import RING_LABELS
from .search import (SearchConfig, run_search, read_checkpoint, write_checkpoint)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BUDGET = 2
EXIT_VERIFY = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_ERROR)


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, dict):
        return " ".join(f"{k}:{val}" for k, val in sorted(v.items()))
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    return str(v)


def _emit(report: dict, out) -> None:
    for key, value in report.items():
        out.write(f"{key}: {_fmt_value(value)}\n")


def _format_line(plane, lid: int) -> str:
    ring = plane.ring
    return "[" + ":".join(ring.format_element(c) for c in plane.lines[lid]) + "]"


def _cmd_plane_info(args, out) -> int:
    _emit(plane_summary(args.ring), out)
    return EXIT_OK


def _cmd_group_order(args, out) -> int:
    group = (linear_collineation_group(args.ring) if args.linear
             else collineation_group(args.ring))
    _emit({"order": group.order()}, out)
    return EXIT_OK


def _cmd_arc_verify(args, out) -> int:
    plane, pts = arcmod.read_arc(args.file)
    mults = arcmod.line_multiplicities(plane, pts)
    worst = max(mults, default=0)
    report = {
        "ring": plane.ring.label,
        "size": len(pts),
        "max_line_multiplicity": worst,
        "is_arc": worst <= 2,
    }
    if worst <= 2:
        report["complete"] = arcmod.is_complete(plane, pts)
        _emit(report, out)
        return EXIT_OK
    bad = next(lid for lid, c in enumerate(mults) if c >= 3)
    on_line = [p for p in pts if plane.incident(p, bad)]
    report["violating_line"] = _format_line(plane, bad)
    report["violating_points"] = " ".join(arcmod.format_point(plane, p)
                                          for p in on_line)
    _emit(report, out)
    return EXIT_VERIFY


def _cmd_arc_analyze(args, out) -> int:
    plane, pts = arcmod.read_arc(args.file)
    _emit(arcmod.analyze(plane, pts), out)
    return EXIT_OK


def _cmd_arc_aut(args, out) -> int:
    plane, pts = arcmod.read_arc(args.file)
    label = plane.ring.label
    aut = arcmod.arc_automorphism_group(label, pts)
    report = {
        "ring": label,
        "size": len(pts),
        "aut_order": aut.order(),
        "orbit_sizes": sorted(len(o) for o in arcmod.orbit_partition(aut, pts)),
        "all_linear": arcmod.automorphisms_all_linear(label, aut),
    }
    if aut.order() <= 10000:
        orders = sorted({element_order(g) for g in aut.elements()})
        report["element_orders"] = orders
    _emit(report, out)
    return EXIT_OK


def _cmd_fixtures_list(args, out) -> int:
    _emit({"fixtures": arcmod.fixture_names()}, out)
    return EXIT_OK


def _cmd_fixtures_dump(args, out) -> int:
    out.write(arcmod.fixture_text(args.name))
    return EXIT_OK


def _cmd_search(args, out) -> int:
    config = SearchConfig(
        label=args.ring,
        target_size=args.target,
        sym_depth=args.sym_depth,
        time_budget=args.seconds,
        worker_count=args.workers,
        prune_blocking=args.prune_blocking,
        order_heuristic=args.order,
        record_all=not args.best_only,
    )
    resume_roots = None
    if args.resume:
        label, resume_roots = read_checkpoint(args.resume)
        if label != args.ring:
            raise ValueError(f"checkpoint is for ring {label}, not {args.ring}")
    if args.seed:
        plane, seed = arcmod.read_arc(args.seed)
        if plane.ring.label != args.ring:
            raise ValueError("seed arc ring does not match")
        config.seed_prefix = tuple(seed)
    result = run_search(config, resume_roots=resume_roots)
    if result.target_reached:
        status = "target-reached"
    elif result.exhausted:
        status = "exhausted"
    else:
        status = "budget-exhausted"
    report = {
        "ring": args.ring,
        "target": args.target if args.target is not None else "none",
        "sym_depth": args.sym_depth,
        "status": status,
        "best_size": result.best_size,
        "arcs_found": len(result.arcs),
        "nodes": result.stats.nodes,
        "canonicity_rejections": result.stats.canonicity_rejections,
        "leaves": result.stats.leaves,
    }
    plane = build_plane(args.ring)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for idx, a in enumerate(result.arcs):
            path = os.path.join(args.out, f"arc_{len(a):02d}_{idx:03d}.arc")
            arcmod.write_arc(path, plane, a,
                             comments=[f"maximal 2-arc found by search, size {len(a)}"])
        with open(os.path.join(args.out, "stats.txt"), "w") as fh:
            fh.write(f"nodes: {result.stats.nodes}\n")
            fh.write(f"canonicity_rejections: {result.stats.canonicity_rejections}\n")
            fh.write(f"best_size: {result.best_size}\n")
            fh.write(f"wall_time: {result.elapsed:.3f}\n")
        report["out_dir"] = args.out
    if result.checkpoint is not None and args.checkpoint:
        write_checkpoint(args.checkpoint, plane, result.checkpoint)
        report["checkpoint"] = args.checkpoint
    _emit(report, out)
    return EXIT_OK if status != "budget-exhausted" else EXIT_BUDGET


def _build_parser() -> _Parser:
    parser = _Parser(prog="hjelmslev",
                     description="Uniform projective Hjelmslev planes, "
                                 "2-arcs, and collineation groups.")
    parser.add_argument("--stats", action="store_true",
                        help="append wall-clock timing to the report")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plane-info", help="counts for one plane")
    p.add_argument("ring", choices=list(RING_LABELS))
    p.set_defaults(func=_cmd_plane_info)

    p = sub.add_parser("group-order", help="collineation group order")
    p.add_argument("ring", choices=list(RING_LABELS))
    p.add_argument("--linear", action="store_true",
                   help="matrix-induced subgroup only (no ring automorphisms)")
    p.set_defaults(func=_cmd_group_order)

    p = sub.add_parser("arc-verify", help="2-arc and completeness check")
    p.add_argument("file")
    p.set_defaults(func=_cmd_arc_verify)

    p = sub.add_parser("arc-analyze", help="structural analysis of an arc file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_arc_analyze)

    p = sub.add_parser("arc-aut", help="automorphism group of an arc")
    p.add_argument("file")
    p.set_defaults(func=_cmd_arc_aut)

    p = sub.add_parser("search", help="backtracking search for maximal 2-arcs")
    p.add_argument("ring", choices=list(RING_LABELS))
    p.add_argument("--target", type=int, default=None,
                   help="stop when an arc of this size is found")
    p.add_argument("--sym-depth", type=int, default=7, dest="sym_depth")
    p.add_argument("--seconds", type=float, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--prune-blocking", action="store_true", dest="prune_blocking")
    p.add_argument("--out", default=None, help="directory for arc files and stats.txt")
    p.add_argument("--order", choices=["point-id", "class-fill"], default="point-id")
    p.add_argument("--best-only", action="store_true", dest="best_only")
    p.add_argument("--seed", default=None, help="arc file used as starting prefix")
    p.add_argument("--resume", default=None, help="checkpoint file to resume from")
    p.add_argument("--checkpoint", default=None,
                   help="where to write pending prefixes on budget exhaustion")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("fixtures-list", help="names of built-in arcs")
    p.set_defaults(func=_cmd_fixtures_list)

    p = sub.add_parser("fixtures-dump", help="print a built-in arc file")
    p.add_argument("name")
    p.set_defaults(func=_cmd_fixtures_dump)

    return parser


def dispatch(argv, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.monotonic()
    try:
        code = args.func(args, out)
    except (ValueError, KeyError, OSError) as exc:
        print(f"hjelmslev: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.stats:
        out.write(f"elapsed: {time.monotonic() - t0:.3f}s\n")
    return code


def main() -> int:
    return dispatch(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
