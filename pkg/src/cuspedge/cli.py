"""Command-line interface: ``cuspedge {analyze,classify,verify,mesh} SURFACE``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import fields
from typing import Optional

from . import __version__
from .errors import CuspEdgeError, EvalDomainError, ExprError, GeometryError, SurfaceFileError
from .report import (
    AnalysisReport,
    analyze,
    check_counts,
    classify_report,
    csv_text,
    json_text,
    mesh_texts,
    report_dict,
    verify_report,
)
from .surfacefile import fixture_path, load_surface_file
from .tolerances import DEFAULT, Tolerances

EXIT_OK, EXIT_FAIL, EXIT_EMPTY, EXIT_INPUT = 0, 1, 2, 3


def _resolve(path: str) -> str:
    """Accept a file path, or ``fixture:NAME`` for a bundled surface."""
    if path.startswith("fixture:"):
        return fixture_path(path.split(":", 1)[1])
    return path


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cuspedge", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("surface", help="surface file, or fixture:NAME")
    common.add_argument("--order", type=int, default=5, help="jet order (default 5)")
    common.add_argument("--grid", type=int, default=64, help="scan grid resolution (default 64)")
    common.add_argument("--step", type=float, default=None, help="trace step in (u, v)")
    common.add_argument("--seed", type=int, default=0, help="seed for probe points")
    common.add_argument("--output", default=None, help="output directory (default: stdout)")
    common.add_argument("--format", choices=("csv", "json", "obj"), default=None)
    for f in fields(Tolerances):
        common.add_argument(f"--tol-{f.name.removeprefix('tau_').replace('_', '-')}",
                            dest=f.name, type=float, default=None, metavar="X",
                            help=f"override {f.name} (default {getattr(DEFAULT, f.name):g})")
    sub.add_parser("analyze", parents=[common], help="trace singular curves, write invariants")
    sub.add_parser("classify", parents=[common], help="classify the Gauss map at edge points")
    sub.add_parser("verify", parents=[common], help="run every identity and theorem check")
    sub.add_parser("mesh", parents=[common], help="export OBJ meshes and polylines")
    return p


def _tolerances(args) -> Tolerances:
    changes = {f.name: getattr(args, f.name) for f in fields(Tolerances)
               if getattr(args, f.name) is not None}
    return DEFAULT.override(**changes)


def _emit(args, name: str, suffix: str, text: str, out) -> None:
    if args.output is None:
        out.write(text)
        return
    os.makedirs(args.output, exist_ok=True)
    with open(os.path.join(args.output, f"{name}.{suffix}"), "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write(text)


def _nothing(rep: AnalysisReport, err) -> Optional[int]:
    if rep.empty:
        if rep.rejected:
            print(f"error: singular points found but the surface is not a front there "
                  f"(e.g. at u={rep.rejected[0].u:.6g}, v={rep.rejected[0].v:.6g})", file=err)
        else:
            print("error: no singular points found", file=err)
        return EXIT_EMPTY
    return None


def run_analyze(surface, args, out=sys.stdout, err=sys.stderr) -> int:
    if args.format == "obj":
        return run_mesh(surface, args, out, err)
    tol = _tolerances(args)
    rep = analyze(surface, args.grid, args.step, tol, args.order)
    code = _nothing(rep, err)
    fmt = args.format or "csv"
    if fmt == "json":
        _emit(args, surface.name, "json", json_text(rep), out)
    else:
        _emit(args, surface.name, "csv", csv_text(rep), out)
        if args.output is not None:
            _emit(args, surface.name, "json", json_text(rep), out)
    return code if code is not None else EXIT_OK


def run_classify(surface, args, out=sys.stdout, err=sys.stderr) -> int:
    tol = _tolerances(args)
    rep = analyze(surface, args.grid, args.step, tol, args.order)
    code = _nothing(rep, err)
    if code is not None:
        return code
    classify_report(rep)
    if args.format == "json" or args.output is not None:
        _emit(args, surface.name + "_classify", "json", json_text(rep), out)
    else:
        text = json.dumps(report_dict(rep)["classifications"], sort_keys=True, indent=2)
        out.write(text + "\n")
    return EXIT_OK


def run_verify(surface, args, out=sys.stdout, err=sys.stderr) -> int:
    tol = _tolerances(args)
    rep = analyze(surface, args.grid, args.step, tol, args.order)
    code = _nothing(rep, err)
    if code is not None:
        return code
    classify_report(rep)
    verify_report(rep, args.seed)
    _emit(args, surface.name + "_verify", "json", json_text(rep), out)
    counts = check_counts(rep)
    for c in rep.checks:
        if c["status"] == "failed":
            worst = {k: v for k, v in c["witnesses"].items() if isinstance(v, float)}
            print(f"FAILED {c['name']} (curve {c['curve']}): {c.get('note', '')} {worst}", file=err)
    print(f"{counts['passed']} passed, {counts['failed']} failed, "
          f"{counts['hypotheses_not_met']} hypotheses_not_met", file=err)
    return EXIT_FAIL if counts["failed"] else EXIT_OK


def run_mesh(surface, args, out=sys.stdout, err=sys.stderr) -> int:
    tol = _tolerances(args)
    rep = analyze(surface, args.grid, args.step, tol, args.order)
    texts = mesh_texts(surface, None if rep.empty else rep, args.grid)
    if args.output is None:
        for key in sorted(texts):
            out.write(f"# --- {surface.name}_{key}.obj\n")
            out.write(texts[key])
    else:
        for key in sorted(texts):
            _emit(args, f"{surface.name}_{key}", "obj", texts[key], out)
    return EXIT_OK


COMMANDS = {"analyze": run_analyze, "classify": run_classify,
            "verify": run_verify, "mesh": run_mesh}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        surface = load_surface_file(_resolve(args.surface))
    except (SurfaceFileError, ExprError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](surface, args, out, err)
    except EvalDomainError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except (GeometryError, CuspEdgeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
