"""Table-driven shift/reduce parser.

The engine consumes any method's table uniformly; all method differences live
in the table.  An accepted parse carries the reduction sequence in performed
order (reversing it gives a rightmost derivation of the input) and the parse
tree; a rejected parse carries the cursor position and the terminals the
current row could have acted on.
"""
from __future__ import annotations

from dataclasses import dataclass

from .automata import Automaton
from .grammar import END, Grammar, Symbol, UnknownSymbolError
from .tables import ACCEPT, ERROR, GOTO, REDUCE, SHIFT, ParseTable


class ConflictedTableError(ValueError):
    """The engine refuses tables with multiply-defined entries."""


@dataclass(frozen=True)
class Token:
    symbol: Symbol
    position: int


@dataclass(frozen=True)
class ParseNode:
    symbol: Symbol
    children: tuple["ParseNode", ...] = ()


@dataclass(frozen=True)
class ParseResult:
    accepted: bool
    derivation: tuple[int, ...] = ()
    tree: ParseNode | None = None
    position: int | None = None
    expected: tuple[Symbol, ...] = ()
    trace: tuple[str, ...] = ()


def tokenize(g: Grammar, text: str) -> list[Token]:
    """Whitespace-split terminal names into tokens; the endmarker is appended
    by the parse loop, never written in the input."""
    tokens: list[Token] = []
    for i, name in enumerate(text.split()):
        if name == "$":
            raise UnknownSymbolError(f"the endmarker is implicit and cannot be written (position {i})")
        try:
            sym = g.symbol(name)
        except UnknownSymbolError:
            raise UnknownSymbolError(f"unknown terminal {name!r} at position {i}") from None
        if sym.kind == "nonterminal":
            raise UnknownSymbolError(f"{name!r} at position {i} is a nonterminal; input must be terminals")
        tokens.append(Token(sym, i))
    return tokens


def _action_text(act, g: Grammar) -> str:
    if act.kind == SHIFT:
        return f"shift {act.arg}"
    if act.kind == REDUCE:
        return f"reduce {act.arg} ({g.production(act.arg)})"
    if act.kind == ACCEPT:
        return "accept"
    return "error"


def _expected(table: ParseTable, state: int) -> tuple[Symbol, ...]:
    out = []
    for y in table.columns:
        if y == END or table.grammar.is_terminal(y):
            cell = table.actions(state, y)
            if any(a.kind != ERROR for a in cell):
                out.append(y)
    return tuple(out)


def parse(table: ParseTable, aut: Automaton, tokens: list[Token], trace: bool = False) -> ParseResult:
    """Run the shift/reduce loop over the tokens followed by the endmarker."""
    if table.conflicts:
        raise ConflictedTableError(
            f"the {table.method} table has {len(table.conflicts)} conflict(s) and cannot drive the parser"
        )
    g = table.grammar
    state_stack: list[int] = [0]
    nodes: list[ParseNode] = []
    derivation: list[int] = []
    trace_lines: list[str] = []
    cursor = 0
    while True:
        current = tokens[cursor].symbol if cursor < len(tokens) else END
        (act,) = table.actions(state_stack[-1], current)
        if trace:
            rest = " ".join([t.symbol.name for t in tokens[cursor:]] + ["$"])
            stack = " ".join(str(s) for s in state_stack)
            trace_lines.append(f"STACK: {stack} | INPUT: {rest} | ACTION: {_action_text(act, g)}")
        if act.kind == SHIFT:
            nodes.append(ParseNode(current))
            assert aut.target(state_stack[-1], current) == act.arg
            state_stack.append(act.arg)
            cursor += 1
        elif act.kind == REDUCE:
            prod = g.production(act.arg)
            n = len(prod.body)
            children = tuple(nodes[len(nodes) - n :])
            if n:
                del nodes[len(nodes) - n :]
                del state_stack[len(state_stack) - n :]
            goto_cell = table.actions(state_stack[-1], prod.driver)
            if not goto_cell:
                raise RuntimeError(f"missing goto entry for {prod.driver} in state {state_stack[-1]}")
            (goto,) = goto_cell
            assert goto.kind == GOTO
            nodes.append(ParseNode(prod.driver, children))
            assert aut.target(state_stack[-1], prod.driver) == goto.arg
            state_stack.append(goto.arg)
            derivation.append(prod.id)
        elif act.kind == ACCEPT:
            assert len(nodes) == 1
            return ParseResult(
                accepted=True,
                derivation=tuple(derivation),
                tree=nodes[0],
                trace=tuple(trace_lines),
            )
        else:
            return ParseResult(
                accepted=False,
                derivation=tuple(derivation),
                position=cursor,
                expected=_expected(table, state_stack[-1]),
                trace=tuple(trace_lines),
            )


def derivation_check(g: Grammar, result: ParseResult, tokens: list[Token]) -> bool:
    """Replay the reversed reduction sequence (prefixed by the augmentation
    production) as a rightmost derivation from the augmented start symbol and
    confirm it produces exactly the input string."""
    if not result.accepted:
        raise ValueError("derivation_check requires an accepted result")
    form: list[Symbol] = [g.production(0).driver]
    for pid in [0] + list(reversed(result.derivation)):
        prod = g.production(pid)
        idx = None
        for i in range(len(form) - 1, -1, -1):
            if g.is_nonterminal(form[i]):
                idx = i
                break
        if idx is None or form[idx] != prod.driver:
            return False
        form[idx : idx + 1] = list(prod.body)
    return form == [t.symbol for t in tokens]
