"""Command line entry point: ``finmodels <command> ...``.

Reports go to stdout (or ``--out``); every command is deterministic given its
inputs and ``--seed``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import batteries
from .io import (ParseError, load_space, parse_isotopy, parse_map_corpus, parse_metric_sample)
from .isotopy import (IsotopyError, ResolutionExhausted, approximate_isotopy, decompose_moves,
                      validate_isotopy)
from .mccord import (SimplicialComplex, barycentric_subdivision, face_poset, homology,
                     order_complex)
from .metric import MetricError, build_cover, quotient
from .model import (EXHAUSTIVE, ModelError, ModelIndex, ModelStage, TotalOrderViolation,
                    TruncatedThread, bond, check_thread, enumerate_W, export_element,
                    import_element, injectivity_witness, project, retract, stage_poset)
from .metric import FiniteMetricSpace
from .posets import FinitePoset, PosetError


class UsageError(Exception):
    pass


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _spaces(args):
    specs = args.space or []
    if not specs:
        raise UsageError("--space is required")
    X = load_space(specs[0])
    Y = load_space(specs[1]) if len(specs) > 1 else X
    return X, Y


def _index(args, default="1,1") -> ModelIndex:
    try:
        return ModelIndex.parse(args.index or default)
    except ValueError:
        raise UsageError("--index expects n,m") from None


def _stage(args):
    X, Y = _spaces(args)
    idx = _index(args)
    y0 = _basepoint(args, Y)
    return ModelStage.build(X, Y, idx.n, idx.m, y0), y0


def _basepoint(args, Y):
    if args.basepoint is None:
        return None
    return args.basepoint if isinstance(Y, FiniteMetricSpace) else Fraction(args.basepoint)


def _maps(args, X, Y, y0=None):
    if not args.maps:
        raise UsageError("--maps is required")
    path = Path(args.maps)
    return parse_map_corpus(path.read_text(), X, Y, y0, str(path))


def _with_W(args, stage):
    if args.maps:
        return enumerate_W(stage, _maps(args, stage.X, stage.Y, stage.y0))
    return enumerate_W(stage, EXHAUSTIVE)


# ---------------------------------------------------------------------------
# commands


def cmd_quotient(args):
    X, _ = _spaces(args)
    _emit(args, quotient(X, _index(args).n).export())


def cmd_cover(args):
    X, _ = _spaces(args)
    cover = build_cover(X, _index(args).n)
    lines = []
    for ball in cover.members:
        if hasattr(ball, "components"):
            lines.append(" ; ".join(ball.export_lines()))
        else:
            lines.append("points " + " ".join(X.labels[i] for i in sorted(ball.points)))
    _emit(args, "\n".join(lines) + "\n")


def cmd_project(args):
    stage, y0 = _stage(args)
    out = []
    for f in _maps(args, stage.X, stage.Y, stage.y0):
        out.append(export_element(project(f, stage), stage))
    _emit(args, "\n".join(out))


def _read_element(args, stage):
    if not args.element:
        raise UsageError("--element is required")
    return import_element(Path(args.element).read_text(), stage)


def cmd_bond(args):
    finer, _ = _stage(args)
    to = ModelIndex.parse(args.to)
    coarser = ModelStage.build(finer.X, finer.Y, to.n, to.m, finer.y0)
    if args.element:
        elements = [_read_element(args, finer)]
    else:
        elements = [project(f, finer) for f in _maps(args, finer.X, finer.Y, finer.y0)]
    _emit(args, "\n".join(export_element(bond(S, finer, coarser), coarser) for S in elements))


def cmd_retract(args):
    stage, _ = _stage(args)
    stage = _with_W(args, stage)
    S = _read_element(args, stage)
    _emit(args, export_element(retract(S, stage), stage))


def cmd_enumerate_w(args):
    stage, _ = _stage(args)
    stage = _with_W(args, stage)
    lines = ["# W (%s), %d elements" % (stage.provenance, len(stage.W))]
    lines += [stage.element_label(T.expand() if hasattr(T, "expand") else T) for T in stage.W]
    _emit(args, "\n".join(lines) + "\n")


def cmd_thread_check(args):
    X, Y = _spaces(args)
    y0 = _basepoint(args, Y)
    depth = args.depth
    lines = []
    ok = True
    for k, f in enumerate(_maps(args, X, Y, y0), 1):
        thread = TruncatedThread.of_map(f, [ModelIndex(i, i) for i in range(1, depth + 1)], y0)
        good = check_thread(thread)
        ok &= good
        lines.append("map %d: %s" % (k, "compatible" if good else "INCOMPATIBLE"))
    _emit(args, "\n".join(lines) + "\n")
    return 0 if ok else 1


def cmd_witness(args):
    X, Y = _spaces(args)
    y0 = _basepoint(args, Y)
    maps = _maps(args, X, Y, y0)
    if len(maps) != 2:
        raise UsageError("--maps must hold exactly two maps")
    idx = injectivity_witness(maps[0], maps[1], args.max_index, y0)
    _emit(args, ("equal maps\n" if maps[0] == maps[1] else "no witness up to %d\n" % args.max_index)
          if idx is None else "%s\n" % idx)


def _load_poset(args) -> FinitePoset:
    if args.poset:
        return FinitePoset.from_json(Path(args.poset).read_text())
    stage, _ = _stage(args)
    return stage_poset(stage)


def _load_complex(args) -> SimplicialComplex:
    if args.complex:
        return SimplicialComplex.from_json(Path(args.complex).read_text())
    return order_complex(_load_poset(args))


def cmd_hasse(args):
    _emit(args, _load_poset(args).to_dot())


def cmd_order_complex(args):
    _emit(args, order_complex(_load_poset(args)).to_json() + "\n")


def cmd_face_poset(args):
    _emit(args, face_poset(_load_complex(args)).to_json() + "\n")


def cmd_subdivide(args):
    _emit(args, barycentric_subdivision(_load_complex(args)).to_json() + "\n")


def cmd_homology(args):
    _emit(args, homology(_load_complex(args)).report())


def _isotopy(args):
    if not args.isotopy:
        raise UsageError("--isotopy is required")
    path = Path(args.isotopy)
    poset = FinitePoset.from_json(Path(args.poset).read_text()) if args.poset else None
    return parse_isotopy(path.read_text(), poset, path.parent, str(path))


def cmd_isotopy_validate(args):
    res = validate_isotopy(_isotopy(args))
    _emit(args, "valid\n" if res else "invalid\n" + "".join("  %s\n" % d for d in res.diagnostics))
    return 0 if res else 1


def cmd_isotopy_decompose(args):
    dec = decompose_moves(_isotopy(args))
    if args.json:
        _emit(args, json.dumps(dec.to_dict(), ensure_ascii=False, indent=1, sort_keys=True) + "\n")
    else:
        _emit(args, dec.report())


def cmd_isotopy_approximate(args):
    X, _ = _spaces(args)
    path = Path(args.sample)
    sample = parse_metric_sample(path.read_text(), X, str(path))
    try:
        res = approximate_isotopy(X, sample, Fraction(args.eps), max_n=args.max_n,
                                  mode=args.distance, seed=args.seed, min_n=args.min_n)
    except ResolutionExhausted as exc:
        lines = ["resolution exhausted: %s" % exc]
        lines += ["  n=%d: %s" % s for s in exc.skipped]
        _emit(args, "\n".join(lines) + "\n")
        return 1
    _emit(args, res.report())


def cmd_suite(args):
    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    results = batteries.run_all(seed=args.seed, archive_dir=out_dir, workers=args.workers)
    text = "".join(r.line() + "\n" for r in results)
    text += "%d/%d batteries passed\n" % (sum(r.passed for r in results), len(results))
    sys.stdout.write(text)
    if out_dir:
        (out_dir / "suite.txt").write_text(text)
    return 0 if all(r.passed for r in results) else 1


COMMANDS = {
    "quotient": (cmd_quotient, "cover quotient classes of a space"),
    "cover": (cmd_cover, "balls of the cover W_n"),
    "project": (cmd_project, "project maps to a model stage"),
    "bond": (cmd_bond, "coarsen stage elements to a smaller index (--to)"),
    "retract": (cmd_retract, "retract a stage element onto W"),
    "enumerate-w": (cmd_enumerate_w, "list W for a stage"),
    "thread-check": (cmd_thread_check, "check that projections of maps form threads"),
    "witness": (cmd_witness, "first index separating two maps"),
    "hasse": (cmd_hasse, "Hasse diagram as DOT"),
    "order-complex": (cmd_order_complex, "order complex of a poset"),
    "face-poset": (cmd_face_poset, "face poset of a complex"),
    "subdivide": (cmd_subdivide, "barycentric subdivision of a complex"),
    "homology": (cmd_homology, "integral homology report"),
    "isotopy-validate": (cmd_isotopy_validate, "validate a finite isotopy"),
    "isotopy-decompose": (cmd_isotopy_decompose, "factor H_1 H_0^-1 into moves"),
    "isotopy-approximate": (cmd_isotopy_approximate, "approximate a sampled metric isotopy"),
    "suite": (cmd_suite, "run all acceptance and property batteries"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="finmodels",
                                     description="Finite models of mapping spaces.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (fn, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=fn)
        p.add_argument("--space", action="append",
                       help="space file, metric CSV, 'interval' or 'circle'; repeat for the target")
        p.add_argument("--index", help="cover indices n,m")
        p.add_argument("--maps", help="map corpus file")
        p.add_argument("--basepoint", help="basepoint y0 of the target")
        p.add_argument("--distance", choices=("hausdorff", "inf"), default="hausdorff")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output file (output directory for suite)")
        if name == "suite":
            p.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                           help="processes for independent batteries")
        if name == "bond":
            p.add_argument("--to", required=True, help="coarser indices n,m")
        if name in ("bond", "retract"):
            p.add_argument("--element", help="stage element file")
        if name == "thread-check":
            p.add_argument("--depth", type=int, default=4)
        if name == "witness":
            p.add_argument("--max-index", type=int, default=64)
        if name in ("hasse", "order-complex", "face-poset", "subdivide", "homology",
                    "isotopy-validate", "isotopy-decompose"):
            p.add_argument("--poset", help="poset JSON file")
        if name in ("face-poset", "subdivide", "homology"):
            p.add_argument("--complex", help="complex JSON file")
        if name.startswith("isotopy-") and name != "isotopy-approximate":
            p.add_argument("--isotopy", help="finite isotopy file")
        if name == "isotopy-decompose":
            p.add_argument("--json", action="store_true", help="machine-readable report")
        if name == "isotopy-approximate":
            p.add_argument("--sample", required=True, help="metric isotopy sample file")
            p.add_argument("--eps", default="1/10")
            p.add_argument("--max-n", type=int, default=64)
            p.add_argument("--min-n", type=int, default=1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args) or 0
    except (UsageError, ParseError, MetricError, ModelError, PosetError, IsotopyError,
            TotalOrderViolation, OSError, ValueError) as exc:
        sys.stderr.write("finmodels %s: %s\n" % (args.command, exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
