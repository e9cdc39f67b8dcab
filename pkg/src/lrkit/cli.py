"""Command-line front end: thin client over the service operations.

Exit codes: 0 success (for table: conflict-free; for classify: the grammar is
a member of some class; for parse: accepted), 1 conflicts found / input
rejected / no class membership, 2 usage or grammar errors.
"""
from __future__ import annotations

import argparse
import sys

from .automata import render_automaton, to_dot
from .engine import ConflictedTableError
from .grammar import EPSILON, GrammarError, first_sets, follow_sets
from .items import la_sort_key
from .service import ops
from .service.schemas import (
    AutomatonResponse,
    CheckResponse,
    ClassifyResponse,
    FirstFollowResponse,
    ParseResponse,
    TableResponse,
)
from .symbolic import render_reduced_system, render_symbolic, render_valuation
from .tables import LALR1_SYMBOLIC, METHODS, render_conflicts, render_table_text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lrkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, method: bool = False, formats: tuple[str, ...] = ("text", "json")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("grammar", help="path to the grammar file")
        if method:
            p.add_argument("--method", required=True, choices=METHODS)
        p.add_argument("--format", default="text", choices=formats)
        return p

    add("check", "validate well-formedness and reducedness")
    add("first-follow", "print FIRST/FOLLOW tables")
    add("automaton", "print the characteristic automaton", method=True, formats=("text", "json", "dot"))
    add("table", "print the parsing table and its conflicts", method=True)
    add("classify", "report SLR(1)/LALR(1)/LR(1) membership")
    p = add("parse", "parse an input sentence", method=True)
    p.add_argument("--input", required=True, help="whitespace-separated terminals")
    p.add_argument("--trace", action="store_true", help="print one line per parser step")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit_json(model) -> int:
    print(model.model_dump_json(indent=2, exclude_none=True))
    return 0


def _cmd_check(args) -> int:
    g, useless = ops.check(_read(args.grammar))
    if args.format == "json":
        return _emit_json(CheckResponse.from_core(g, useless))
    if useless:
        print("grammar is not reduced; useless productions:", file=sys.stderr)
        for p in useless:
            print(f"  {p.id}: {p}", file=sys.stderr)
        return 2
    print(f"grammar ok: start {g.start.name}, {len(g.nonterminals)} nonterminals, "
          f"{len(g.terminals)} terminals, {len(g.productions)} productions")
    return 0


def _cmd_first_follow(args) -> int:
    ga = ops.first_follow(_read(args.grammar))
    if args.format == "json":
        return _emit_json(FirstFollowResponse.from_core(ga))
    key = la_sort_key(ga)
    firsts, follows = first_sets(ga), follow_sets(ga)
    aug_start = ga.production(0).driver
    rows = []
    for a in ga.nonterminals:
        if a == aug_start:
            continue
        f = sorted(firsts[a] - {EPSILON}, key=key)
        names = [s.name for s in f] + ([repr(EPSILON)] if EPSILON in firsts[a] else [])
        fo = [s.name for s in sorted(follows[a], key=key)]
        rows.append((a.name, "{" + ", ".join(names) + "}", "{" + ", ".join(fo) + "}"))
    widths = [max(len(r[c]) for r in rows + [("symbol", "FIRST", "FOLLOW")]) for c in range(3)]
    print("  ".join(h.ljust(w) for h, w in zip(("symbol", "FIRST", "FOLLOW"), widths)))
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)))
    return 0


def _cmd_automaton(args) -> int:
    built = ops.build(_read(args.grammar), args.method)
    if args.format == "dot":
        print(to_dot(built.automaton), end="")
        return 0
    if args.format == "json":
        dot = None
        return _emit_json(AutomatonResponse.from_core(built, dot=dot))
    if built.method == LALR1_SYMBOLIC:
        print(render_symbolic(built.automaton, built.equations), end="")
        print()
        print(render_reduced_system(built.equations, built.reduced, built.grammar), end="")
        print()
        print(render_valuation(built.valuation, built.grammar), end="")
        print()
        print(render_automaton(built.automaton), end="")
    else:
        print(render_automaton(built.automaton), end="")
    return 0


def _cmd_table(args) -> int:
    built = ops.build(_read(args.grammar), args.method)
    if args.format == "json":
        _emit_json(TableResponse.from_core(built.table))
    else:
        print(render_table_text(built.table), end="")
        for line in render_conflicts(built.table):
            print(line)
    return 0 if built.table.conflict_free else 1


def _cmd_classify(args) -> int:
    result = ops.classify(_read(args.grammar))
    if args.format == "json":
        _emit_json(ClassifyResponse.from_core(result))
    else:
        print(", ".join(f"{name}: {'yes' if member else 'no'}" for name, member in result.as_pairs()))
    return 0 if result.lr1 else 1


def _cmd_parse(args) -> int:
    built, _tokens, result = ops.parse_input(_read(args.grammar), args.method, args.input, trace=args.trace)
    if args.format == "json":
        _emit_json(ParseResponse.from_core(built, result, with_trace=args.trace))
        return 0 if result.accepted else 1
    for line in result.trace:
        print(line)
    if result.accepted:
        print("accepted")
        print("derivation:")
        for pid in result.derivation:
            print(f"  {pid}: {built.grammar.production(pid)}")
        return 0
    expected = ", ".join(s.name for s in result.expected)
    print(f"rejected at position {result.position}; expected one of: {expected}")
    return 1


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "check": _cmd_check,
    "first-follow": _cmd_first_follow,
    "automaton": _cmd_automaton,
    "table": _cmd_table,
    "classify": _cmd_classify,
    "parse": _cmd_parse,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (GrammarError, ConflictedTableError) as exc:
        print(f"lrkit: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"lrkit: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
