"""Command-line interface: ``holext <command> ...``.

Exit codes: 0 success, 1 falsification event, 2 usage or input error,
3 numeric failure (resolution, sampling, conditioning).
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .eilenberg import factorize
from .errors import HolextError, InputError, ParseError
from .expr import compile_expression
from .extension import (DEGREE_MAX, check_extension_injectivity,
                        outer_boundary_points)
from .gallery import CASES, run_case
from .generators import generator_table
from .grid import (boundary_cycles, complement_components, interior_empty,
                   outer_boundary, polynomial_hull, rasterize, regular_hole)
from .report import Report, Svg, input_digest
from .rouche import MeromorphicSpec, homotopic_rouche_check
from .shapes import parse_shape

DEFAULT_RESOLUTION = 0.02
TOLERANCE_KEYS = ("delta", "eps", "criterion")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str):
    text = _read(path)
    try:
        return parse_shape(text)
    except ParseError as exc:
        exc.args = (f"{path}: {exc.args[0]}",)
        raise


def _function(text: str):
    """An expression, or a JSON meromorphic spec ``{"zeros": ..., "poles": ...}``."""
    if text.lstrip().startswith("{"):
        try:
            node = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from None
        return MeromorphicSpec.from_dict(node)
    return compile_expression(text)


def _tolerances(items: list[str] | None) -> dict:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or key not in TOLERANCE_KEYS:
            raise InputError(f"--tolerance expects KEY=VALUE with KEY in {TOLERANCE_KEYS}")
        try:
            out[key] = float(value)
        except ValueError:
            raise InputError(f"--tolerance {key}: {value!r} is not a number") from None
    return out


def _digest(args, *parts) -> str:
    flags = {k: v for k, v in sorted(vars(args).items())
             if k not in ("out", "svg", "func", "timings")}
    return input_digest(json.dumps(flags, sort_keys=True, default=str), *parts)


# -- commands ------------------------------------------------------------------

def _analysis(K) -> dict:
    lab = complement_components(K)
    hull = polynomial_hull(K, lab)
    outer = outer_boundary(K)
    return {
        "cells": K.cell_count,
        "hull_cells": hull.cell_count,
        "holes": [{"index": hole.index, "cells": hole.cells,
                   "representative": hole.representative, "clearance": hole.clearance,
                   "regular": regular_hole(K, hole.index, lab)} for hole in lab.holes],
        "hole_count": lab.n_holes,
        "complement_connected": lab.n_holes == 0,
        "interior_empty_grid": interior_empty(K),
        "exact_thin": K.exact_thin,
        "outer_boundary": [{"vertices": len(c), "length": c.length, "orientation": c.orientation}
                           for c in outer],
        "boundary_cycles": len(boundary_cycles(K, lab)),
    }


def cmd_analyze(args):
    shape = _load(args.spec)
    K = rasterize(shape, args.resolution)
    results = _analysis(K)
    if args.check_resolution:
        fine = _analysis(rasterize(shape, args.resolution / 2))
        results["resolution_check"] = {
            "h": args.resolution / 2,
            "hole_count": fine["hole_count"],
            "regular": [hole["regular"] for hole in fine["holes"]],
            "stable": (fine["hole_count"] == results["hole_count"]
                       and [x["regular"] for x in fine["holes"]] == [x["regular"] for x in results["holes"]]),
        }
    if args.svg:
        svg = Svg()
        for c in boundary_cycles(K):
            svg.polyline(c.vertices, "gray")
        for c in outer_boundary(K):
            svg.polyline(c.vertices, "black", width=1.5)
        for hole in complement_components(K).holes:
            svg.marker(hole.representative, "blue", f"G{hole.index}")
        _write(args.svg, svg.render())
    return Report("analyze", _digest(args, shape.to_json()), args.resolution, {}, results), []


def cmd_extend(args):
    shape = _load(args.spec)
    f = compile_expression(args.f)
    tol = _tolerances(args.tolerance)
    K = rasterize(shape, args.resolution)
    rep = check_extension_injectivity(f, K, delta=tol.get("delta"), eps=tol.get("eps", 1e-6),
                                      degree_max=args.degree_max)
    used = {"delta": tol.get("delta", 5 * K.h), "eps": tol.get("eps", 1e-6),
            "criterion": rep.criterion.tolerance, "h_image": rep.criterion.h_image}
    if args.svg:
        svg = Svg()
        for c in outer_boundary(K):
            svg.polyline(c.vertices, "black")
        fs = f(outer_boundary_points(K))
        svg.polyline(fs, "red", closed=False, width=0.7)
        for c in rep.injective_on_hull.collisions[:3]:
            svg.polyline(np.array([c.z, c.w]), "green", closed=False)
            svg.marker(c.z, "green", "z")
            svg.marker(c.w, "green", "w")
        _write(args.svg, svg.render())
    report = Report("extend", _digest(args, shape.to_json(), args.f), args.resolution, used,
                    {"function": args.f, "extension": rep}, rep.falsification_events)
    return report, rep.falsification_events


def cmd_factorize(args):
    shape = _load(args.spec)
    f = _function(args.f)
    K = rasterize(shape, args.resolution)
    fac = factorize(f, K, samples=args.samples)
    results = {"function": args.f, "factorization": fac}
    return Report("factorize", _digest(args, shape.to_json(), args.f), args.resolution,
                  {"samples": args.samples}, results), []


def cmd_rouche(args):
    shape = _load(args.spec)
    f, g = _function(args.f), _function(args.g)
    K = rasterize(shape, args.resolution)
    verdict = homotopic_rouche_check(f, g, K, samples=args.samples)
    results = {"f": args.f, "g": args.g, "verdict": verdict}
    return (Report("rouche", _digest(args, shape.to_json(), args.f, args.g), args.resolution,
                   {"samples": args.samples}, results, verdict.falsification_events),
            verdict.falsification_events)


def cmd_generators(args):
    shape = _load(args.spec)
    phi = compile_expression(args.phi)
    tol = _tolerances(args.tolerance)
    K = rasterize(shape, args.resolution)
    table = generator_table(phi, K, delta=tol.get("delta"), eps=tol.get("eps", 1e-6),
                            degree_max=args.degree_max)
    if args.csv:
        mem = table["P"].inverse_in_P
        _write(args.csv, mem.to_csv() if mem is not None else "degree,residual\n")
    used = {"delta": tol.get("delta", 5 * K.h), "eps": tol.get("eps", 1e-6)}
    return Report("generators", _digest(args, shape.to_json(), args.phi), args.resolution, used,
                  {"phi": args.phi, "verdicts": table}), []


def cmd_gallery(args):
    case = args.case_opt or args.case or "all"
    ids = sorted(CASES) if case.lower() == "all" else [case]
    results, events = {}, []
    for cid in ids:
        res = run_case(cid, h=args.resolution, degree_max=args.degree_max)
        results[res.case] = res
        events.extend(res.falsification_events)
    return Report("gallery", _digest(args), args.resolution, {}, results, events), events


# -- plumbing ------------------------------------------------------------------

def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-r", "--resolution", type=float, default=DEFAULT_RESOLUTION,
                        help="grid cell size h (default %(default)s)")
    common.add_argument("--out", default="-", help="report path (default: stdout)")
    common.add_argument("--timings", action="store_true",
                        help="add wall-clock timings (reports are then not reproducible)")

    fit = argparse.ArgumentParser(add_help=False)
    fit.add_argument("--degree-max", type=int, default=DEGREE_MAX,
                     help="largest polynomial degree in the fit sweep (default %(default)s)")
    fit.add_argument("--tolerance", action="append", metavar="KEY=VALUE",
                     help=f"override a tolerance ({', '.join(TOLERANCE_KEYS)}); repeatable")

    p = argparse.ArgumentParser(prog="holext", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="holes, hull, outer boundary, regularity")
    a.add_argument("spec", help="shape JSON file ('-' for stdin)")
    a.add_argument("--svg", help="write an SVG diagnostic")
    a.add_argument("--check-resolution", action="store_true",
                   help="repeat at h/2 and report whether the topology is stable")
    a.set_defaults(func=cmd_analyze)

    e = sub.add_parser("extend", parents=[common, fit], help="extension injectivity report")
    e.add_argument("spec")
    e.add_argument("--f", required=True, help="function expression in z")
    e.add_argument("--svg", help="write an SVG diagnostic")
    e.set_defaults(func=cmd_extend)

    f = sub.add_parser("factorize", parents=[common], help="winding exponents and logarithm")
    f.add_argument("spec")
    f.add_argument("--f", required=True, help="expression or meromorphic JSON spec")
    f.add_argument("--samples", type=int, default=2048)
    f.set_defaults(func=cmd_factorize)

    r = sub.add_parser("rouche", parents=[common], help="homotopic Rouche check")
    r.add_argument("spec")
    r.add_argument("--f", required=True, help="expression or meromorphic JSON spec")
    r.add_argument("--g", required=True, help="expression or meromorphic JSON spec")
    r.add_argument("--samples", type=int, default=4096)
    r.set_defaults(func=cmd_rouche)

    g = sub.add_parser("generators", parents=[common, fit], help="generator verdicts for C, A, R, P")
    g.add_argument("spec")
    g.add_argument("--phi", required=True, help="candidate generator, expression in z")
    g.add_argument("--csv", help="write the membership residual curve as CSV")
    g.set_defaults(func=cmd_generators)

    y = sub.add_parser("gallery", parents=[common, fit], help="run worked example cases")
    y.add_argument("case", nargs="?", help=f"one of {', '.join(sorted(CASES))} or 'all'")
    y.add_argument("--case", dest="case_opt", help="same as the positional argument")
    y.set_defaults(func=cmd_gallery)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        report, events = args.func(args)
    except HolextError as exc:
        print(f"holext {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.timings:
        report.timings = {"total_s": round(time.perf_counter() - start, 3)}
    _write(args.out, report.dumps())
    return 1 if events else 0


if __name__ == "__main__":
    sys.exit(main())
