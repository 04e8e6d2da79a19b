"""Command-line front end: ``sigdimlab <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

from .errors import DegenerateError, ParseError, SigDimError
from .exact import format_rational, rational
from .gpt import StateSpace, homogenize
from .polytope import Polytope, VRep, extreme_point_indices, minkowski_asymmetry
from .sigdim import SigDimReport, SystemAnalysis, signaling_dimension
from .solids import TABLE1, TABLE2, SolidSpec, generate_solid, parse_solid
from .symmetry import congruent

log = logging.getLogger("sigdimlab")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


# ---------------------------------------------------------------------------
# input


def _row_lines(text: str) -> list[int]:
    """Line numbers (1-based) of every row opened at nesting depth 3, i.e. each vertex."""
    lines, depth, line, in_str, esc = [], 0, 1, False, False
    for ch in text:
        if ch == "\n":
            line += 1
        if in_str:
            if esc:
                esc = False
            elif ch == "\\":
                esc = True
            elif ch == '"':
                in_str = False
            continue
        if ch == '"':
            in_str = True
        elif ch in "[{":
            depth += 1
            if depth == 3 and ch == "[":
                lines.append(line)
        elif ch in "]}":
            depth -= 1
    return lines


def parse_vrep(path: str | os.PathLike) -> VRep:
    """Read a VRep JSON file ``{"vertices": [["p/q", ...], ...]}`` and validate it."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", location=str(path)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, location=f"{path}:{exc.lineno}:{exc.colno}") from None
    if not isinstance(data, dict) or not isinstance(data.get("vertices"), list):
        raise ParseError('expected an object with a "vertices" list', location=str(path))
    rows = data["vertices"]
    if not rows:
        raise ParseError("empty vertex list", location=str(path))
    lines = _row_lines(text)

    def where(i: int) -> str:
        return f"{path}:{lines[i]}" if i < len(lines) else str(path)

    points = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise ParseError(f"vertex {i} is not a list", location=where(i))
        if len(row) != len(rows[0]):
            raise ParseError(f"vertex {i} has {len(row)} coordinates, vertex 0 has {len(rows[0])}",
                             location=where(i))
        coords = []
        for k, x in enumerate(row):
            if not isinstance(x, (str, int)) or isinstance(x, bool):
                raise ParseError(f"vertex {i}, coordinate {k}: expected a rational string, got {x!r}",
                                 location=where(i))
            try:
                coords.append(rational(x))
            except ParseError as exc:
                raise ParseError(f"vertex {i}, coordinate {k}: {exc}", location=where(i)) from None
        points.append(tuple(coords))
    seen: dict = {}
    for i, p in enumerate(points):
        if p in seen:
            raise ParseError(f"vertex {i} duplicates vertex {seen[p]}", location=where(i))
        seen[p] = i
    keep = set(extreme_point_indices(points))
    for i in range(len(points)):
        if i not in keep:
            raise ParseError(f"vertex {i} is not extreme (it lies in the hull of the others)",
                             location=where(i))
    return VRep(tuple(points))


@dataclass(frozen=True)
class Source:
    label: str
    solid: Optional[SolidSpec] = None
    path: Optional[str] = None

    def load(self) -> VRep:
        return generate_solid(self.solid) if self.solid else parse_vrep(self.path)


def _source(args) -> Source:
    if args.solid and args.input:
        raise ParseError("give either --solid or --input, not both")
    if args.solid:
        spec = parse_solid(args.solid)
        return Source(spec.label, solid=spec)
    if args.input:
        return Source(Path(args.input).name, path=args.input)
    raise ParseError("one of --solid or --input is required")


# ---------------------------------------------------------------------------
# output


def _fmt_vec(v) -> str:
    return "(" + ", ".join(format_rational(x) for x in v) + ")"


def _emit(fmt: str, rows: list[dict], payload=None, out=None) -> None:
    """Write ``rows`` as an aligned table or CSV, or ``payload`` (default ``rows``) as JSON."""
    out = out or sys.stdout
    if fmt == "json":
        json.dump(rows if payload is None else payload, out, indent=2)
        out.write("\n")
        return
    if not rows:
        return
    cols = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r)
        out.write(buf.getvalue())
        return
    cells = [[str(c) for c in cols]] + [[_cell(r[c]) for c in cols] for r in rows]
    widths = [max(len(row[k]) for row in cells) for k in range(len(cols))]
    for n, row in enumerate(cells):
        out.write("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() + "\n")
        if n == 0:
            out.write("  ".join("-" * w for w in widths) + "\n")


def _cell(x) -> str:
    if x is None:
        return "-"
    return str(x)


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class ReportRow:
    name: str
    m: Optional[int] = None
    aff_dim: Optional[int] = None
    cs: Optional[bool] = None
    group_order: Optional[int] = None
    n_measurements: Optional[int] = None
    n_classes: Optional[int] = None
    sigdim: Optional[int] = None
    error: Optional[str] = None

    def table(self) -> dict:
        return {"Solid": self.name, "m": self.m, "aff.dim": self.aff_dim, "CS": self.cs,
                "|G|": self.group_order, "|M|": self.n_measurements, "|M'|": self.n_classes,
                "sig.dim": self.sigdim if self.error is None else f"error: {self.error}"}


def analyse(source: Source, use_symmetry: bool = True) -> tuple[ReportRow, SigDimReport | None]:
    """Report row plus the full driver result (None on failure)."""
    t0 = time.perf_counter()
    res = None
    try:
        space = homogenize(source.load())
        an = SystemAnalysis(space, use_symmetry)
        res = signaling_dimension(space, use_symmetry=use_symmetry, analysis=an)
        row = ReportRow(source.label, space.m, space.aff_dim, space.centrally_symmetric,
                        an.group.order if use_symmetry else None,
                        len(an.measurements), len(an.classes) if use_symmetry else None, res.value)
    except SigDimError as exc:
        row = ReportRow(source.label, error=str(exc))
    log.info("%s done in %.1fs", source.label, time.perf_counter() - t0)
    return row, res


def report_row(source: Source, use_symmetry: bool = True) -> ReportRow:
    """One Table-style row; failures are captured in ``error``."""
    return analyse(source, use_symmetry)[0]


def report(sources: Sequence[Source | SolidSpec | str], *, jobs: int = 1,
           use_symmetry: bool = True) -> list[ReportRow]:
    """Rows in input order; rows may be computed concurrently."""
    srcs = []
    for s in sources:
        if isinstance(s, str):
            s = parse_solid(s)
        if isinstance(s, SolidSpec):
            s = Source(s.label, solid=s)
        srcs.append(s)
    if jobs > 1 and len(srcs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(report_row, srcs, [use_symmetry] * len(srcs)))
    return [report_row(s, use_symmetry) for s in srcs]


# ---------------------------------------------------------------------------
# subcommands


def _space(args) -> tuple[Source, StateSpace]:
    src = _source(args)
    return src, homogenize(src.load())


def cmd_symmetries(args) -> int:
    src, space = _space(args)
    an = SystemAnalysis(space)
    g = an.group
    if args.format == "json":
        payload = {"solid": src.label, "order": g.order}
        if args.permutations:
            payload["permutations"] = [list(p) for p in g]
        _emit("json", [], payload)
    elif args.permutations:
        _emit(args.format, [{"#": k, "images": " ".join(map(str, p))} for k, p in enumerate(g)])
    else:
        _emit(args.format, [{"solid": src.label, "order": g.order}])
    return EXIT_OK


def cmd_congruent(args) -> int:
    a, b = parse_vrep(args.a), parse_vrep(args.b)
    perm = congruent(a.vertices, b.vertices)
    if args.format == "json":
        _emit("json", [], {"congruent": perm is not None, "mapping": list(perm) if perm and args.mapping else None})
    else:
        print("congruent" if perm is not None else "not congruent")
        if perm is not None and args.mapping:
            print(" ".join(map(str, perm)))
    return EXIT_OK if perm is not None else EXIT_FAIL


def cmd_effects(args) -> int:
    _, space = _space(args)
    effects = SystemAnalysis(space).effects
    rows = [{"index": k, "vector": _fmt_vec(e.vector), "ray": e.ray, "trivial": e.trivial}
            for k, e in enumerate(effects)]
    payload = [{"index": k, "vector": [format_rational(x) for x in e.vector], "ray": e.ray,
                "trivial": e.trivial} for k, e in enumerate(effects)]
    _emit(args.format, rows, payload)
    return EXIT_OK


def cmd_measurements(args) -> int:
    _, space = _space(args)
    an = SystemAnalysis(space, not args.no_symmetry)
    cls_of = {}
    for c, mc in enumerate(an.classes):
        for ms in mc.members:
            cls_of[ms.indices] = c
    rows, payload = [], []
    for ms in an.measurements:
        rows.append({"effects": " ".join(map(str, ms.indices)),
                     "coefficients": " ".join(format_rational(x) for x in ms.coefficients),
                     "class": cls_of[ms.indices]})
        payload.append({"effects": list(ms.indices),
                        "coefficients": [format_rational(x) for x in ms.coefficients],
                        "class": cls_of[ms.indices]})
    _emit(args.format, rows, payload)
    return EXIT_OK


def cmd_asymmetry(args) -> int:
    src, space = _space(args)
    value = minkowski_asymmetry(Polytope(space.vertices))
    _emit(args.format, [{"solid": src.label, "asymmetry": format_rational(value)}])
    return EXIT_OK


def _certificates(res: SigDimReport) -> list[dict]:
    out = []
    for c in res.classes:
        entry = {
            "effects": list(c.representative.indices),
            "coefficients": [format_rational(x) for x in c.representative.coefficients],
            "p": [[format_rational(x) for x in row] for row in c.p.p],
            "d": c.d,
            "certificate": None,
        }
        if c.certificate is not None:
            entry["certificate"] = {
                "strategies": [list(f) for f in c.certificate.strategies],
                "weights": [format_rational(w) for w in c.certificate.weights],
            }
        out.append(entry)
    return out


def cmd_sigdim(args) -> int:
    src, space = _space(args)
    res = signaling_dimension(space, use_symmetry=not args.no_symmetry, jobs=args.jobs)
    rows = [{"class": k, "size": c.class_size, "outcomes": c.representative.n,
             "rows": c.p.shape[0], "d": c.d,
             "tested": " ".join(f"{d}:{'yes' if ok else 'no'}" for d, ok in c.tested) or "-"}
            for k, c in enumerate(res.classes)]
    b = res.bounds
    payload = {"solid": src.label, "sigdim": res.value, "method": res.method,
               "bounds": {"lower": b.lower, "upper": b.upper, "cs": b.cs}, "classes": rows}
    if args.format == "json":
        _emit("json", [], payload)
    else:
        if args.format == "table":
            print(f"{src.label}: sig.dim = {res.value}  (bounds {b.lower}..{b.upper}, "
                  f"{'CS' if b.cs else 'not CS'}, {res.method})")
        _emit(args.format, rows)
    if args.certificates:
        Path(args.certificates).write_text(json.dumps(
            {"solid": src.label, "sigdim": res.value, "classes": _certificates(res)}, indent=2) + "\n")
    return EXIT_OK


def cmd_report(args) -> int:
    sources: list[Source] = []
    names = list(args.solid or [])
    if args.table in ("1", "all"):
        names += list(TABLE1)
    if args.table in ("2", "all"):
        names += list(TABLE2)
    for n in names:
        spec = parse_solid(n)
        sources.append(Source(spec.label, solid=spec))
    for path in args.input or []:
        sources.append(Source(Path(path).name, path=path))
    if not sources:
        raise ParseError("nothing to report: give --table, --solid or --input")
    rows = report(sources, jobs=args.jobs, use_symmetry=not args.no_symmetry)
    _emit(args.format, [r.table() for r in rows], [asdict(r) for r in rows])
    return EXIT_FAIL if any(r.error for r in rows) else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sigdimlab", description="Exact signaling dimension of polytopic systems.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (output order is fixed)")
    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--solid", help="built-in solid, e.g. cube or hyperoctahedron:4")
    source.add_argument("--input", help="VRep JSON file")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("symmetries", parents=[common, source], help="symmetry group of the state space")
    p.add_argument("--permutations", action="store_true", help="list every permutation (one-line image notation)")
    p.set_defaults(func=cmd_symmetries)

    p = sub.add_parser("congruent", parents=[common], help="exit 0 iff two point sets have equal Gram matrices up to relabeling")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--mapping", action="store_true", help="print the label correspondence")
    p.set_defaults(func=cmd_congruent)

    p = sub.add_parser("effects", parents=[common, source], help="extremal effects")
    p.set_defaults(func=cmd_effects)

    p = sub.add_parser("measurements", parents=[common, source], help="extremal measurements and their classes")
    p.add_argument("--no-symmetry", action="store_true")
    p.set_defaults(func=cmd_measurements)

    p = sub.add_parser("asymmetry", parents=[common, source], help="Minkowski measure of asymmetry")
    p.set_defaults(func=cmd_asymmetry)

    p = sub.add_parser("sigdim", parents=[common, source], help="signaling dimension")
    p.add_argument("--no-symmetry", action="store_true", help="test every measurement, no orbit reduction")
    p.add_argument("--certificates", metavar="OUT.json", help="write per-class simulation certificates")
    p.set_defaults(func=cmd_sigdim)

    p = sub.add_parser("report", parents=[common], help="table of m, aff.dim, CS, |G|, |M|, |M'|, sig.dim")
    p.add_argument("--table", choices=("1", "2", "all"))
    p.add_argument("--solid", action="append", help="extra solid (repeatable)")
    p.add_argument("--input", action="append", help="extra VRep JSON file (repeatable)")
    p.add_argument("--no-symmetry", action="store_true")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    level = os.environ.get("SIGDIMLAB_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(asctime)s %(name)s %(levelname)s %(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("sigdimlab: error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"sigdimlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SigDimError, DegenerateError) as exc:
        print(f"sigdimlab: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
