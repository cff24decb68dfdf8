"""Command-line front end.

Exit codes: 0 success, 1 semantic failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .core import LudError, has_errors, validate
from .corpus import load_lud, load_surface, run_corpus, split_entry
from .drs import build_drs, render_box, render_term
from .engine import EnumerationOptions, enumerate_pluggings
from .parser import ParseError, parse, parse_plugging, serialize
from .resolver import default_lexicon, insert_mode, parse_lexicon, resolve

OK, FAILED, USAGE = 0, 1, 2


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def cmd_parse(args) -> int:
    warnings = []
    _, body, offset = split_entry(_read(args.file))
    lud = parse(body, diagnostics=warnings, line_offset=offset)
    for w in warnings:
        print(w, file=sys.stderr)
    sys.stdout.write(serialize(lud))
    return OK


def cmd_validate(args) -> int:
    diags = validate(load_lud(args.file))
    for d in diags:
        print(d)
    if not diags:
        print("ok")
    return FAILED if has_errors(diags) else OK


def cmd_enumerate(args) -> int:
    lud = load_lud(args.file)
    opts = EnumerationOptions(max_solutions=args.max, mode="oracle" if args.oracle else "propagating")
    pluggings = enumerate_pluggings(lud, opts)
    for n, p in enumerate(pluggings, start=1):
        print(f"# plugging {n}")
        print(p)
    print(f"# {len(pluggings)} plugging(s)")
    return OK


def cmd_resolve(args) -> int:
    lud = load_lud(args.file)
    surface = load_surface(args.meta or args.file)
    lexicon = parse_lexicon(_read(args.lexicon)) if args.lexicon else default_lexicon()
    ranked = resolve(lud, surface, lexicon)
    for w in ranked.warnings:
        print(f"warning: {w}", file=sys.stderr)
    for rank, group in enumerate(ranked.groups, start=1):
        for p in group:
            print(f"# rank {rank}: {render_term(lud, p)}")
            print(p)
    return OK


def cmd_render(args) -> int:
    lud = load_lud(args.file)
    p = parse_plugging(_read(args.plugging))
    if args.box:
        sys.stdout.write(render_box(build_drs(lud, p)))
    else:
        print(render_term(lud, p))
    return OK


def cmd_insert_mode(args) -> int:
    sys.stdout.write(serialize(insert_mode(load_lud(args.file), always=args.always)))
    return OK


def cmd_corpus(args) -> int:
    report = run_corpus(args.dir)
    sys.stdout.write(report.render())
    return OK if report.passed else FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lud", description="Underspecified DRS toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse and print in canonical form")
    p.add_argument("file")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("validate", help="report diagnostics")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("enumerate", help="list admissible pluggings")
    p.add_argument("file")
    p.add_argument("--oracle", action="store_true", help="use the brute-force oracle")
    p.add_argument("--max", type=int, default=None, metavar="N")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("resolve", help="rank pluggings by the discourse-relation heuristics")
    p.add_argument("file")
    p.add_argument("--meta", help="file with a 'surface:' header line (default: the input file)")
    p.add_argument("--lexicon", help="lexicon file (default: built-in)")
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("render", help="render one plugging")
    p.add_argument("file")
    p.add_argument("--plugging", required=True)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--term", action="store_true", help="compact scope term (default)")
    fmt.add_argument("--box", action="store_true", help="ASCII box diagram")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("insert-mode", help="add a mode fragment to a pre-form")
    p.add_argument("file")
    p.add_argument("--always", action="store_true", help="also for a single relation")
    p.set_defaults(func=cmd_insert_mode)

    p = sub.add_parser("corpus", help="check every entry of a corpus directory")
    p.add_argument("dir")
    p.set_defaults(func=cmd_corpus)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    if args.command == "enumerate" and args.max is not None and args.max < 1:
        print("error: --max must be >= 1", file=sys.stderr)
        return USAGE
    try:
        return args.func(args)
    except ParseError as exc:
        for d in exc.diagnostics:
            print(d, file=sys.stderr)
        return USAGE
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return USAGE
    except (LudError, ValueError) as exc:
        code = getattr(exc, "code", "error")
        print(f"error[{code}]: {exc}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
