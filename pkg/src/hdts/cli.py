"""Command-line front end.

Verdict commands exit 0 (true), 1 (false) or 2 (undecided); anything at or
above 3 is an error. Constructions write canonical JSON documents.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence

from . import builders, io
from .bisim import LITERAL, TOTAL, PathSet, bisimilar, greatest_bisimulation, is_open
from .colim import colimit, coproduct, product, pushout, union_subobjects
from .functors import coreflect_map, csa1_reflector, cts_coreflector, cubification, label_collapse
from .homotopy import cylinder, elementary_homotopy, homotopic, path_object_cts, path_object_whdts
from .homotopy import we_cub_localized, we_left_determined
from .homsearch import SearchCapExceeded, is_cubical, is_isomorphic
from .model import (
    HdtsError,
    check_all_actions_used,
    check_csa1,
    check_csa2,
    check_isa,
    is_cofibration,
    is_coherence_closed,
    is_mono,
    validate,
)

EXIT_TRUE, EXIT_FALSE, EXIT_UNDECIDED, EXIT_ERROR = 0, 1, 2, 3


class UsageError(HdtsError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(args, text: str) -> None:
    if getattr(args, "output", None) and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_kw(args) -> dict:
    return {"close": args.close, "check_closed": not args.no_close}


def _obj(args, path):
    return io.parse(_read(path), **_load_kw(args))


def _map(args, path):
    return io.parse_map(_read(path), **_load_kw(args))


def _labels(text: str) -> list[str]:
    return [x for x in text.split(",") if x] if text else []


def _witness(args, doc) -> None:
    if args.witness and doc is not None:
        with open(args.witness, "w", encoding="utf-8") if args.witness != "-" else _stdout() as fh:
            fh.write(io.dumps(doc))


class _stdout:
    def __enter__(self):
        return sys.stdout

    def __exit__(self, *exc):
        return False


def _verdict(value: bool | None) -> int:
    word = {True: "true", False: "false", None: "undecided"}[value]
    print(word)
    return {True: EXIT_TRUE, False: EXIT_FALSE, None: EXIT_UNDECIDED}[value]


def cmd_build(args) -> int:
    labels = _labels(args.labels) if hasattr(args, "labels") else []
    kind = args.kind
    if kind == "cube":
        x = builders.cube(len(labels), labels)
    elif kind == "pure":
        x = builders.pure_transition(len(labels), labels)
    elif kind == "boundary":
        x = builders.boundary(len(labels), labels)
    elif kind == "ext":
        _write(args, io.serialize_map(builders.ext_inclusion(len(labels), labels)))
        return EXIT_TRUE
    elif kind == "dd":
        x = builders.double_transition(args.label)
    elif kind == "discrete":
        x = builders.discrete(args.states)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(kind)
    _write(args, io.serialize(x))
    return EXIT_TRUE


def cmd_op(args) -> int:
    kind = args.kind
    if kind == "coproduct":
        x, inj = coproduct([_obj(args, p) for p in args.inputs])
        _witness(args, {"format_version": io.FORMAT_VERSION, "maps": [io.map_to_document(f) for f in inj]})
    elif kind == "product":
        x, p1, p2 = product(_obj(args, args.left), _obj(args, args.right))
        _witness(args, {"format_version": io.FORMAT_VERSION, "maps": [io.map_to_document(p) for p in (p1, p2)]})
    elif kind == "pushout":
        x, ix, iy = pushout(_map(args, args.f), _map(args, args.g))
        _witness(args, {"format_version": io.FORMAT_VERSION, "maps": [io.map_to_document(i) for i in (ix, iy)]})
    elif kind == "colimit":
        x, cocone = colimit(io.parse_diagram(_read(args.diagram), **_load_kw(args)))
        _witness(args, {"format_version": io.FORMAT_VERSION, "maps": [io.map_to_document(c) for c in cocone]})
    elif kind == "union":
        x, inc = union_subobjects([_map(args, p) for p in args.monos])
        _witness(args, io.map_to_document(inc))
    else:  # pragma: no cover
        raise UsageError(kind)
    _write(args, io.serialize(x))
    return EXIT_TRUE


def cmd_functor(args) -> int:
    x = _obj(args, args.input)
    kind = args.kind
    if kind == "coreflect":
        res = cts_coreflector(x)
    elif kind == "cub":
        res = cubification(x)
    elif kind == "csa1":
        res = csa1_reflector(x)
    elif kind == "collapse":
        res = label_collapse(x)
    elif kind == "cyl":
        cyl = cylinder(x)
        _witness(args, {"format_version": io.FORMAT_VERSION,
                        "maps": [io.map_to_document(m) for m in (cyl.gamma0, cyl.gamma1, cyl.sigma)]})
        _write(args, io.serialize(cyl.object))
        return EXIT_TRUE
    elif kind == "pathobj":
        _write(args, io.serialize(path_object_cts(x) if args.cts else path_object_whdts(x)))
        return EXIT_TRUE
    else:  # pragma: no cover
        raise UsageError(kind)
    _witness(args, io.map_to_document(res.structural_map))
    _write(args, io.serialize(res.object))
    return EXIT_TRUE


_OBJECT_CHECKS = {
    "closed": is_coherence_closed,
    "isa": check_isa,
    "csa1": check_csa1,
    "csa2": check_csa2,
    "used": check_all_actions_used,
    "cubical": is_cubical,
}


def cmd_check(args) -> int:
    kind = args.kind
    if kind == "valid":
        x = io.parse(_read(args.input), check=False)
        report = validate(x)
        for rule, where in report.violations:
            print(f"{rule}: {where}", file=sys.stderr)
        return _verdict(report.ok)
    if kind in _OBJECT_CHECKS:
        x = io.parse(_read(args.input), close=args.close, check_closed=kind != "closed" and not args.no_close)
        return _verdict(_OBJECT_CHECKS[kind](x))
    f = _map(args, args.input)
    if kind == "mono":
        return _verdict(is_mono(f))
    if kind == "cofib":
        return _verdict(is_cofibration(f))
    if kind == "open":
        if args.paths:
            paths = PathSet(tuple((len(ls), tuple(ls)) for ls in (_labels(p) for p in args.paths)))
        else:
            paths = PathSet.edges(set(f.src.label_of.values()) | set(f.dst.label_of.values()))
        return _verdict(is_open(f, paths))
    raise UsageError(kind)  # pragma: no cover


def _prepare_we(args, f):
    return coreflect_map(f) if args.coreflect_first else f


def cmd_decide(args) -> int:
    kind = args.kind
    if kind == "iso":
        iso = is_isomorphic(_obj(args, args.left), _obj(args, args.right))
        _witness(args, None if iso is None else io.map_to_document(iso))
        return _verdict(iso is not None)
    if kind == "homotopic":
        f, g = _map(args, args.left), _map(args, args.right)
        verdict = homotopic(f, g)
        if verdict:
            w = elementary_homotopy(f, g)
            _witness(args, None if w is None else io.map_to_document(w.H))
        return _verdict(verdict)
    if kind == "we-ld":
        return _verdict(we_left_determined(_prepare_we(args, _map(args, args.input))))
    if kind == "we-cub":
        return _verdict(we_cub_localized(_prepare_we(args, _map(args, args.input))))
    if kind == "bisim":
        x, y = _obj(args, args.left), _obj(args, args.right)
        ok, span = bisimilar(x, y, args.mode)
        if ok:
            doc = io.span_to_document(span)
            doc["relation"] = io.relation_to_document(greatest_bisimulation(x, y))["pairs"]
            _witness(args, doc)
        return _verdict(ok)
    raise UsageError(kind)  # pragma: no cover


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    grp = common.add_mutually_exclusive_group()
    grp.add_argument("--close", action="store_true", help="apply coherence closure on load")
    grp.add_argument("--no-close", action="store_true", help="accept documents that are not coherence closed")
    common.add_argument("-o", "--output", help="write the result document here (default stdout)")
    common.add_argument("--witness", help="write a witness document to this path ('-' for stdout)")

    parser = _Parser(prog="hdts", description="Finite higher dimensional transition systems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    build = sub.add_parser("build", help="construct standard systems").add_subparsers(
        dest="kind", required=True, parser_class=_Parser)
    for kind in ("cube", "ext", "boundary", "pure"):
        p = build.add_parser(kind, parents=[common])
        p.add_argument("labels", nargs="?", default="", help="comma separated labels, one per axis")
    build.add_parser("dd", parents=[common]).add_argument("label")
    build.add_parser("discrete", parents=[common]).add_argument("states", nargs="*")

    op = sub.add_parser("op", help="limits and colimits").add_subparsers(
        dest="kind", required=True, parser_class=_Parser)
    op.add_parser("coproduct", parents=[common]).add_argument("inputs", nargs="*")
    p = op.add_parser("product", parents=[common])
    p.add_argument("left")
    p.add_argument("right")
    p = op.add_parser("pushout", parents=[common])
    p.add_argument("f")
    p.add_argument("g")
    op.add_parser("colimit", parents=[common]).add_argument("diagram")
    op.add_parser("union", parents=[common]).add_argument("monos", nargs="+")

    fn = sub.add_parser("functor", help="apply a functor").add_subparsers(
        dest="kind", required=True, parser_class=_Parser)
    for kind in ("coreflect", "cub", "csa1", "collapse", "cyl", "pathobj"):
        p = fn.add_parser(kind, parents=[common])
        p.add_argument("input")
        if kind == "pathobj":
            p.add_argument("--cts", action="store_true", help="coreflect the path object into cubical systems")

    chk = sub.add_parser("check", help="predicates").add_subparsers(
        dest="kind", required=True, parser_class=_Parser)
    for kind in ("valid", "closed", "isa", "csa1", "csa2", "used", "cubical", "mono", "cofib", "open"):
        p = chk.add_parser(kind, parents=[common])
        p.add_argument("input")
        if kind == "open":
            p.add_argument("--path", dest="paths", action="append",
                           help="cube path as comma separated labels (repeatable; default all 1-cubes)")

    dec = sub.add_parser("decide", help="deciders").add_subparsers(
        dest="kind", required=True, parser_class=_Parser)
    for kind in ("iso", "homotopic", "bisim"):
        p = dec.add_parser(kind, parents=[common])
        p.add_argument("left")
        p.add_argument("right")
        if kind == "bisim":
            p.add_argument("--mode", choices=(TOTAL, LITERAL), default=TOTAL)
    for kind in ("we-ld", "we-cub"):
        p = dec.add_parser(kind, parents=[common])
        p.add_argument("input")
        p.add_argument("--coreflect-first", action="store_true",
                       help="apply the cubical coreflector to the map before deciding")
    return parser


_COMMANDS = {"build": cmd_build, "op": cmd_op, "functor": cmd_functor, "check": cmd_check, "decide": cmd_decide}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except SearchCapExceeded as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except (HdtsError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
