"""``afclip`` command line: preprocess a mesh, clip lines, run benchmarks.

Exit codes: 0 success, 2 bad input mesh or cache, 3 bad line spec,
4 output could not be written.
"""
from __future__ import annotations

import argparse
import re
import sys
import time

import numpy as np

from .afl import GRID_ORDER, preprocess
from .clipper import clip_line
from .cyrus_beck import clip_line_cb
from .errors import AfclipError, CacheError, GeometryError, ParseError, UnsupportedFormatError, ZeroDirectionError
from .geom import Line3, validate_convex
from .mesh_io import load_cache, load_off, save_cache
from .result import ClipKind, Mode, results_agree
from .semidual import DEFAULT_CAP, GridSpec

EXIT_INPUT, EXIT_QUERY, EXIT_OUTPUT = 2, 3, 4


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _vec(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated numbers, got {text!r}")
    v = np.array([float(p) for p in parts])
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite coordinate in {text!r}")
    return v


def parse_line_spec(text: str) -> Line3:
    """``ax,ay,az:sx,sy,sz`` to a :class:`Line3`."""
    try:
        a, s = text.split(":")
        return Line3(_vec(a), _vec(s))
    except ZeroDirectionError as exc:
        raise CliError(f"zero direction in line {text!r}: {exc}", EXIT_QUERY) from None
    except ValueError as exc:
        raise CliError(f"malformed line {text!r}: {exc}", EXIT_QUERY) from None


def _through(p: str, q: str) -> Line3:
    try:
        return Line3.through(_vec(p), _vec(q))
    except ZeroDirectionError:
        raise CliError("zero direction: the two points coincide", EXIT_QUERY) from None
    except ValueError as exc:
        raise CliError(f"malformed point: {exc}", EXIT_QUERY) from None


def _load_mesh(path):
    try:
        verts, faces = load_off(path)
        return validate_convex(verts, faces)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_INPUT) from None
    except (ParseError, UnsupportedFormatError, GeometryError) as exc:
        raise CliError(f"{path}: {type(exc).__name__}: {exc}", EXIT_INPUT) from None


def cmd_preprocess(args, out):
    poly = _load_mesh(args.mesh)
    spec = None if args.auto else GridSpec.parse(args.grid)
    t0 = time.perf_counter()
    try:
        prep = preprocess(poly, spec, cap=args.cap, parallel=args.parallel)
    except MemoryError:
        raise CliError("grid too large for available memory; lower --cap or --grid", EXIT_INPUT) from None
    elapsed = time.perf_counter() - t0
    try:
        save_cache(prep, args.output)
    except OSError as exc:
        raise CliError(f"cannot write {args.output}: {exc}", EXIT_OUTPUT) from None
    print(f"N={poly.n_facets}", file=out)
    for j, ((ax, kind), g) in enumerate(zip(GRID_ORDER, prep.grids), start=1):
        print(f"AFL_{j} axis={'XYZ'[ax]} form={kind.name} grid={g.spec} bits={int(g.bits_per_cell().sum())}",
              file=out)
    print(f"elapsed={elapsed:.3f}s", file=out)


def _read_lines_file(path):
    try:
        with open(path, encoding="utf-8") as fh:
            rows = [r.strip() for r in fh]
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_INPUT) from None
    return [parse_line_spec(r) for r in rows if r and not r.startswith("#")]


def _report(res, stats, args, out, ref=None):
    kind = res.kind.name
    if res.kind == ClipKind.EMPTY:
        print("EMPTY", file=out)
    elif res.kind == ClipKind.POINT:
        print(f"POINT t={_fmt(res.t_in)}", file=out)
    else:
        print(f"SEGMENT t=[{_fmt(res.t_in)},{_fmt(res.t_out)}]", file=out)
    if res.kind != ClipKind.EMPTY:
        p, q = res.points
        print("  in=(" + ",".join(map(_fmt, p)) + f") facet={res.entry_facet}", file=out)
        if res.kind == ClipKind.SEGMENT:
            print("  out=(" + ",".join(map(_fmt, q)) + f") facet={res.exit_facet}", file=out)
    if args.stats:
        print(f"  |omega1|={stats.omega1} |omega2|={stats.omega2} |omega|={stats.omega}", file=out)
    if ref is not None:
        print("AGREE" if results_agree(res, ref) else f"DISAGREE baseline={ref.kind.name}", file=out)
    return kind


def cmd_clip(args, out):
    if args.line:
        lines = [parse_line_spec(args.line)]
    elif args.through:
        lines = [_through(*args.through)]
    elif args.lines_file:
        lines = _read_lines_file(args.lines_file)
    else:
        raise CliError("give --line, --through or --lines-file", EXIT_QUERY)
    try:
        prep = load_cache(args.cache)
    except OSError as exc:
        raise CliError(f"cannot read {args.cache}: {exc}", EXIT_INPUT) from None
    except CacheError as exc:
        raise CliError(f"{args.cache}: {type(exc).__name__}: {exc}", EXIT_INPUT) from None
    base = _load_mesh(args.compare_cb) if args.compare_cb else None
    mode = Mode.SEGMENT if args.segment else Mode.LINE
    disagree = 0
    for line in lines:
        res, stats = clip_line(prep, line, mode)
        ref = clip_line_cb(base, line, mode) if base is not None else None
        _report(res, stats, args, out, ref)
        disagree += ref is not None and not results_agree(res, ref)
    return 1 if disagree else 0


def _int_list(text):
    return [int(x) for x in text.split(",") if x]


def cmd_bench(args, out):
    from .benchmarks import run_bench, write_csv, write_svg

    grids = [GridSpec.parse(g) for g in args.grid.split(",") if g]
    # fail before the (possibly long) run if the outputs cannot be created
    for path in filter(None, (args.csv, args.svg)):
        try:
            open(path, "a").close()
        except OSError as exc:
            raise CliError(f"cannot write {path}: {exc}", EXIT_OUTPUT) from None
    rows = run_bench(args.n, grids, lines=args.lines, seed=args.seed, repeats=args.repeats,
                     parallel=args.parallel,
                     progress=lambda r: print(f"N={r.n_facets} grid={r.grid_k}x{r.grid_q} "
                                              f"omega_median={r.omega_median:g} "
                                              f"o1={r.query_o1_ns:.0f}ns cb={r.query_cb_ns:.0f}ns", file=out))
    try:
        write_csv(rows, args.csv)
        if args.svg:
            write_svg(rows, args.svg)
    except OSError as exc:
        raise CliError(f"cannot write output: {exc}", EXIT_OUTPUT) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="afclip", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    pp = sub.add_parser("preprocess", help="build AFL grids for an OFF mesh and write a cache")
    pp.add_argument("mesh")
    pp.add_argument("-o", "--output", required=True)
    g = pp.add_mutually_exclusive_group()
    g.add_argument("--grid", default="16x16", help="slopes x offsets per table, e.g. 64x64")
    g.add_argument("--auto", action="store_true", help="size each table from the projected geometry")
    pp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="per-axis limit for --auto")
    pp.add_argument("--parallel", action="store_true", help="build the six tables concurrently")
    pp.set_defaults(func=cmd_preprocess)

    pc = sub.add_parser("clip", help="clip a line against a cached polyhedron")
    pc.add_argument("cache")
    g = pc.add_mutually_exclusive_group()
    g.add_argument("--line", help="anchor:direction as ax,ay,az:sx,sy,sz")
    g.add_argument("--through", nargs=2, metavar=("P1", "P2"), help="two points x,y,z on the line")
    g.add_argument("--lines-file", help="one anchor:direction spec per row")
    pc.add_argument("--segment", action="store_true", help="clip the segment t in [0, 1] instead of the line")
    pc.add_argument("--compare-cb", metavar="MESH", help="also clip with Cyrus-Beck against this mesh")
    pc.add_argument("--stats", action="store_true", help="print candidate set sizes")
    pc.set_defaults(func=cmd_clip)

    pb = sub.add_parser("bench", help="time both clippers on random hulls")
    pb.add_argument("--n", type=_int_list, default=[4, 128, 1024], help="facet counts, comma separated")
    pb.add_argument("--grid", default="8x8,32x32,128x128")
    pb.add_argument("--lines", type=int, default=1000)
    pb.add_argument("--seed", type=int, default=0)
    pb.add_argument("--repeats", type=int, default=5)
    pb.add_argument("--parallel", action="store_true")
    pb.add_argument("--csv", required=True)
    pb.add_argument("--svg")
    pb.set_defaults(func=cmd_bench)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    argv = sys.argv[1:] if argv is None else list(argv)
    # argparse would take "-1,0.5,0.5" for an option; a leading space keeps it
    # a value and float() ignores it
    argv = [" " + a if re.match(r"-[\d.]", a) else a for a in argv]
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args, out)
    except CliError as exc:
        print(f"afclip: {exc}", file=sys.stderr)
        return exc.code
    except (ValueError, AfclipError) as exc:
        print(f"afclip: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
