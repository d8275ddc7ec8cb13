"""``hadtowers`` command line: generate artifacts, run suites, query operations.

Exit codes: 0 success, 1 verification or precondition failure, 2 usage or
decode error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import evaluation as ev
from . import supports as sp
from . import symmetry as sy
from . import towers as tw
from .errors import DecodeError, HadError, InvalidTower
from .ordinals import render
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _emit(text: str, dest: str = None) -> None:
    if dest and dest != "-":
        with open(dest, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load(arg: str):
    if arg == "-":
        raw = sys.stdin.read()
    elif os.path.isfile(arg):
        with open(arg) as fh:
            raw = fh.read()
    else:
        raw = arg
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DecodeError(f"cannot parse JSON from {arg!r}: {exc}") from None


def _decode(fn, arg):
    try:
        return fn(_load(arg))
    except InvalidTower as exc:
        raise DecodeError(f"invalid input ({exc})") from None


def _coord(obj):
    if not (isinstance(obj, list) and len(obj) == 2 and all(isinstance(x, int) and x >= 0 for x in obj)):
        raise DecodeError(f"expected a coord [level, index], got {obj!r}")
    return tw.Coord(*obj)


def _query(op: str, args):
    T, S = tw.tower_from_json, tw.coords_from_json

    def need(n, at_least=False):
        if len(args) < n or (not at_least and len(args) != n):
            raise DecodeError(f"query {op} expects {'at least ' if at_least else ''}{n} argument(s), got {len(args)}")

    if op == "close":
        need(2)
        return tw.coords_to_json(tw.target_of(_decode(T, args[0]), _decode(S, args[1])))
    if op == "complete":
        need(1)
        return tw.is_complete(_decode(T, args[0]))
    if op == "union":
        need(2)
        return tw.tower_to_json(tw.union(_decode(T, args[0]), _decode(T, args[1])))
    if op == "add-target":
        need(2)
        return tw.tower_to_json(tw.add_to_target(_decode(T, args[0]), _decode(_coord, args[1])))
    if op == "cover":
        need(1)
        q, top = tw.singleton_cover(_decode(T, args[0]))
        return {"tower": tw.tower_to_json(q), "coord": [top.level, top.index]}
    if op == "reduce":
        need(2)
        return tw.coords_to_json(sp.reduce_to_irreducible(_decode(T, args[0]), _decode(S, args[1])))
    if op == "rank":
        need(1)
        return render(sp.rank(_decode(S, args[0])))
    if op == "intersect":
        need(2, at_least=True)
        p = _decode(T, args[0])
        return tw.coords_to_json(sp.intersection_generator(p, [_decode(S, a) for a in args[1:]]))
    if op == "amalgamate":
        need(2)
        pi, r = sy.amalgamate(_decode(T, args[0]), _decode(S, args[1]))
        return {"perm": sy.perm_to_json(pi), "tower": tw.tower_to_json(r)}
    if op == "path":
        need(3)
        return ev.access_path(_decode(T, args[0]), _decode(_coord, args[1]), _decode(_coord, args[2]))
    if op == "eval":
        need(3)
        p = _decode(T, args[0])
        a = _decode(ev.assignment_from_json, args[1])
        return ev.value_to_json(ev.evaluate(p, a, _decode(_coord, args[2])))
    if op == "lexcmp":
        need(2)
        return ev.lex_compare(_decode(ev.value_from_json, args[0]), _decode(ev.value_from_json, args[1]))
    raise DecodeError(f"unknown query {op!r}")


QUERIES = ["close", "complete", "union", "add-target", "cover", "reduce", "rank",
           "intersect", "amalgamate", "path", "eval", "lexcmp"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hadtowers", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a seeded tower, condition or permutation")
    gen.add_argument("kind", choices=["tower", "condition", "perm"])
    gen.add_argument("--levels", type=int, default=5)
    gen.add_argument("--width", type=int, default=6)
    gen.add_argument("--max-seq", type=int, default=4)
    gen.add_argument("--max-bits", type=int, default=8)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--json", metavar="PATH", default="-", help="output file, '-' for stdout")

    suite = sub.add_parser("suite", help="run a property suite")
    suite.add_argument("name", choices=list(SUITES) + ["all"])
    suite.add_argument("--cases", type=int, default=100)
    suite.add_argument("--seed", type=int, default=0)
    suite.add_argument("--format", choices=["text", "json"], default="text")
    suite.add_argument("--json", metavar="PATH", default=None, help="also write the JSON report here")
    suite.add_argument("--quiet", action="store_true", help="summary lines only")

    query = sub.add_parser("query", help="apply one operation to JSON inputs")
    query.add_argument("op", choices=QUERIES)
    query.add_argument("inputs", nargs="*", help="JSON literal, file path, or '-' for stdin")
    query.add_argument("--json", metavar="PATH", default="-")
    return parser


def _cmd_gen(args) -> int:
    for name in ("levels", "width", "max_seq", "max_bits", "seed"):
        if getattr(args, name) < 0:
            raise ValueError(f"--{name.replace('_', '-')} must be non-negative")
    if args.kind == "tower":
        obj = tw.tower_to_json(tw.random_tower(args.levels, args.width, args.max_seq, args.seed))
    elif args.kind == "condition":
        obj = tw.tower_to_json(tw.random_condition(args.levels, args.width, args.max_seq, args.seed, args.max_bits))
    else:
        obj = sy.perm_to_json(sy.random_perm(args.levels, args.width, args.seed))
    _emit(dumps(obj), args.json)
    return EXIT_OK


def _cmd_suite(args) -> int:
    if args.cases < 0:
        raise ValueError("--cases must be non-negative")
    names = list(SUITES) if args.name == "all" else [args.name]
    reports = [run_suite(n, args.cases, args.seed) for n in names]
    if args.format == "json":
        print(dumps([r.to_json() for r in reports]))
    else:
        for r in reports:
            print(r.summary())
            if not args.quiet:
                for seed, msg in r.failures[:20]:
                    print(f"    seed {seed}: {msg}")
                if len(r.failures) > 20:
                    print(f"    ... {len(r.failures) - 20} more")
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(dumps([r.to_json() for r in reports]) + "\n")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "suite":
            return _cmd_suite(args)
        _emit(dumps(_query(args.op, args.inputs)), args.json)
        return EXIT_OK
    except DecodeError as exc:
        print(f"decode error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HadError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
