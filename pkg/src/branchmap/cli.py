"""Command-line interface.

Exit codes: 0 success, 1 domain or I/O error (diagnostics on stderr),
2 usage error.  Built-in map ids: 3x1, 7xpm1; any subcommand also accepts a
.map file through --map-file (or a path given to --map).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from branchmap import checkpoint as checkpoint_mod
from branchmap import csvio, plot
from branchmap.core import PRESETS, ResidueBranchMap
from branchmap.dsl import load_map_file
from branchmap.errors import BranchMapError
from branchmap.heuristics import drift, residue_uniformity_check
from branchmap.scanner import scan_records, stopping_time_profile, verify_range
from branchmap.trajectory import (
    DEFAULT_MAX_STEPS,
    REACHED_ONE,
    find_cycles,
    step_sequence,
)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BranchMapError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="branchmap",
        description="Define, iterate, and analyze residue branch maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("traj", help="print one trajectory")
    _add_map_args(p)
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.set_defaults(func=_cmd_traj)

    p = sub.add_parser("scan", help="verify convergence over a start range")
    _add_map_args(p)
    p.add_argument("--from", dest="lo", type=int, required=True)
    p.add_argument("--to", dest="hi", type=int, required=True)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("records", help="per-decade records below thresholds")
    _add_map_args(p)
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--kind", choices=("steps", "peak"), required=True)
    p.set_defaults(func=_cmd_records)

    p = sub.add_parser("cycles", help="cycles reachable from a start range")
    _add_map_args(p)
    p.add_argument("--range", dest="span", required=True, metavar="LO..HI")
    p.set_defaults(func=_cmd_cycles)

    p = sub.add_parser("drift", help="expected log-growth per accelerated step")
    _add_map_args(p)
    p.set_defaults(func=_cmd_drift)

    p = sub.add_parser("uniformity", help="exact branch-output uniformity check")
    _add_map_args(p)
    p.add_argument("--l", dest="depth", type=int, required=True)
    p.set_defaults(func=_cmd_uniformity)

    p = sub.add_parser("profile", help="stopping times for 1..N, written as CSV")
    _add_map_args(p)
    p.add_argument("--to", dest="hi", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_profile)

    p = sub.add_parser("plot", help="render a profile or trajectory CSV as SVG")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--scale", choices=("linear", "log"), default="linear")
    p.set_defaults(func=_cmd_plot)

    return parser


def _add_map_args(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--map", dest="map_id", help="built-in id (3x1, 7xpm1) or a .map file path")
    group.add_argument("--map-file", dest="map_file", help="path to a .map file")


def _resolve_map(args: argparse.Namespace) -> ResidueBranchMap:
    if args.map_file:
        return load_map_file(args.map_file)
    if args.map_id in PRESETS:
        return PRESETS[args.map_id]()
    if os.path.exists(args.map_id):
        return load_map_file(args.map_id)
    raise BranchMapError(
        f"unknown map {args.map_id!r}: not a built-in id ({', '.join(sorted(PRESETS))}) "
        f"and no such file"
    )


def _cmd_traj(args: argparse.Namespace) -> int:
    bmap = _resolve_map(args)
    traj = step_sequence(bmap, args.start, max_steps=args.max_steps)
    summary = traj.summary()
    if args.format == "text":
        for term in traj.terms:
            print(term)
        line = f"steps={traj.steps} peak={summary.peak}"
        if traj.termination != REACHED_ONE:
            line += f" termination={traj.termination}"
        print(line)
    elif args.format == "csv":
        csvio.write_trajectory(traj, sys.stdout)
    else:
        payload = {
            "start": traj.start,
            "terms": traj.terms,
            "steps": traj.steps,
            "peak": summary.peak,
            "peak_index": summary.peak_index,
            "termination": traj.termination,
        }
        print(json.dumps(payload))
    return 0


def _cmd_scan(args: argparse.Namespace) -> int:
    bmap = _resolve_map(args)
    if args.lo < 1 or args.lo > args.hi:
        raise ValueError(f"invalid range [{args.lo}, {args.hi}]: need 1 <= from <= to")
    lo = args.lo
    attested = 0
    if args.checkpoint and os.path.exists(args.checkpoint):
        cp = checkpoint_mod.read_checkpoint(args.checkpoint)
        if cp.frontier is not None:
            attested = cp.frontier
            lo = max(lo, cp.frontier + 1)
    if lo > args.hi:
        print(f"map={bmap.name} range={args.lo}..{args.hi} already verified (frontier {attested})")
        return 0
    report = verify_range(
        bmap,
        lo,
        args.hi,
        attested_frontier=attested,
        max_steps=args.max_steps,
        jobs=args.jobs,
        checkpoint_path=args.checkpoint,
    )
    converged = "true" if report.all_converged else "false"
    print(
        f"map={report.map_name} range={report.lo}..{report.hi} "
        f"all_converged={converged} exceptions={len(report.exceptions)}"
    )
    for n in report.exceptions[:20]:
        print(f"exception {n}")
    print(
        f"starts={report.starts_scanned} elapsed={report.elapsed_seconds:.2f}s "
        f"rate={report.starts_per_second:.0f}/s jobs={report.jobs}"
    )
    return 0 if report.all_converged else 1


def _cmd_records(args: argparse.Namespace) -> int:
    bmap = _resolve_map(args)
    records = scan_records(bmap, args.limit, args.kind)
    csvio.write_records(records, sys.stdout)
    return 0


def _cmd_cycles(args: argparse.Namespace) -> int:
    bmap = _resolve_map(args)
    try:
        lo_text, hi_text = args.span.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
    except ValueError:
        raise BranchMapError(f"--range must look like LO..HI, got {args.span!r}") from None
    cycles = find_cycles(bmap, lo, hi)
    csvio.write_cycles(cycles, sys.stdout)
    return 0


def _cmd_drift(args: argparse.Namespace) -> int:
    bmap = _resolve_map(args)
    report = drift(bmap)
    for row in report.rows:
        print(
            f"residue {row.residue} mod {row.modulus}: weight={row.weight} "
            f"multiplier={row.multiplier} log={row.log_multiplier:.10f}"
        )
    print(f"drift={report.drift:.10f} verdict={report.verdict}")
    return 0


def _cmd_uniformity(args: argparse.Namespace) -> int:
    bmap = _resolve_map(args)
    try:
        reports = residue_uniformity_check(bmap, args.depth)
    except ValueError as exc:
        raise BranchMapError(str(exc)) from None
    all_uniform = True
    for rep in reports:
        flag = "true" if rep.uniform else "false"
        all_uniform = all_uniform and rep.uniform
        print(
            f"residue {rep.branch.residue} mod {rep.branch.modulus}: "
            f"halvings={rep.branch.forced_halvings} input_modulus={rep.input_modulus} "
            f"uniform={flag}"
        )
    print(f"depth={args.depth} all_uniform={'true' if all_uniform else 'false'}")
    return 0


def _cmd_profile(args: argparse.Namespace) -> int:
    bmap = _resolve_map(args)
    profile = stopping_time_profile(bmap, 1, args.hi)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        csvio.write_profile(profile, fh)
    print(f"wrote {args.out} ({len(profile.rows)} rows)")
    return 0


def _cmd_plot(args: argparse.Namespace) -> int:
    with open(args.infile, encoding="utf-8") as fh:
        header, rows = csvio.read_rows(fh)
    if header == ["n", "steps"]:
        kind = "points"
        x_label, y_label = header
    elif header == ["step", "value"]:
        kind = "line"
        x_label, y_label = header
    else:
        raise BranchMapError(
            f"cannot plot CSV with header {','.join(header)!r}: expected a profile "
            f"(n,steps) or a trajectory (step,value)"
        )
    if not rows:
        raise BranchMapError("cannot plot an empty CSV")
    spec = plot.PlotSpec(
        rows=tuple(rows),
        kind=kind,
        scale=args.scale,
        x_label=x_label,
        y_label=y_label,
    )
    svg = plot.render_plot_svg(spec)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(svg)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
