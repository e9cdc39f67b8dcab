"""Parsing tables: cell filling rules, lookahead policies per method,
conflict detection, and grammar-class verdicts.

A table is a total matrix state x (terminals + endmarker + nonterminals);
terminal columns always hold at least one action (Error is explicit), and a
cell holding several actions is a conflict, reported as data rather than
raised.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

from .automata import LR0, LR1, MERGED, SYMBOLIC, Automaton, build_lr0, build_lr1, merge_lr1
from .grammar import (
    END,
    Grammar,
    NotReducedError,
    Production,
    Symbol,
    augment,
    check_reduced,
    follow_sets,
)
from .items import Item0, ItemSet, classify
from .symbolic import (
    DependencyGraph,
    EquationSystem,
    ReducedSystem,
    Variable,
    build_dependency_graph,
    build_symbolic,
    evaluate,
    actualize,
    reduce_system,
)

SHIFT = "shift"
REDUCE = "reduce"
ACCEPT = "accept"
GOTO = "goto"
ERROR = "error"

SLR1 = "slr1"
CANONICAL_LR1 = "lr1"
LALR1_MERGED = "lalr1-merged"
LALR1_SYMBOLIC = "lalr1-symbolic"
METHODS = (SLR1, CANONICAL_LR1, LALR1_MERGED, LALR1_SYMBOLIC)


@dataclass(frozen=True)
class Action:
    kind: str
    arg: int | None = None

    def render(self) -> str:
        if self.kind == SHIFT:
            return f"s{self.arg}"
        if self.kind == REDUCE:
            return f"r{self.arg}"
        if self.kind == ACCEPT:
            return "acc"
        if self.kind == GOTO:
            return f"g{self.arg}"
        return "."


@dataclass(frozen=True)
class Conflict:
    state: int
    symbol: Symbol
    kind: str  # "shift/reduce" | "reduce/reduce"
    actions: tuple[Action, ...]


@dataclass(frozen=True)
class LookaheadPolicy:
    """Which terminal set triggers each reduction: the method tag plus the
    lookup over (final state, reducing production)."""

    method: str
    lookahead: Callable[[int, int], frozenset]


def _reducing_item(aut: Automaton, state: int, prod: int) -> tuple[Item0, frozenset | None]:
    if state not in aut.finals:
        raise ValueError(f"state {state} of the {aut.kind} automaton is not a reducing state")
    contents = aut.states[state]
    if isinstance(contents, ItemSet):
        for core in contents:
            if core.production == prod and classify(core, aut.grammar).reducing:
                return core, None
    else:
        for core, la in contents.items():
            if core.production == prod and classify(core, aut.grammar).reducing:
                return core, la
    raise ValueError(f"state {state} holds no reducing item for production {prod}")


def la_slr(aut: Automaton, state: int, prod: int) -> frozenset:
    """FOLLOW of the production's driver."""
    _reducing_item(aut, state, prod)
    return follow_sets(aut.grammar)[aut.grammar.production(prod).driver]


def la_lr(aut: Automaton, state: int, prod: int) -> frozenset:
    """The lookahead set stored with the reducing item."""
    _, la = _reducing_item(aut, state, prod)
    assert la is not None
    return la


def la_lrm(aut: Automaton, state: int, prod: int) -> frozenset:
    """Union over the merged class members; core-keyed states store it directly."""
    return la_lr(aut, state, prod)


def la_lalr(aut: Automaton, valuation: dict[Variable, frozenset], state: int, prod: int) -> frozenset:
    """Ground part of the item's lookahead set plus the values of its variables."""
    _, la = _reducing_item(aut, state, prod)
    assert la is not None
    out: set = set()
    for el in la:
        if isinstance(el, Variable):
            out |= valuation[el]
        else:
            out.add(el)
    return frozenset(out)


def slr_policy(aut: Automaton) -> LookaheadPolicy:
    return LookaheadPolicy(SLR1, lambda s, p: la_slr(aut, s, p))


def lr_policy(aut: Automaton) -> LookaheadPolicy:
    return LookaheadPolicy(CANONICAL_LR1, lambda s, p: la_lr(aut, s, p))


def lrm_policy(aut: Automaton) -> LookaheadPolicy:
    return LookaheadPolicy(LALR1_MERGED, lambda s, p: la_lrm(aut, s, p))


def lalr_policy(aut: Automaton, valuation: dict[Variable, frozenset]) -> LookaheadPolicy:
    return LookaheadPolicy(LALR1_SYMBOLIC, lambda s, p: la_lalr(aut, valuation, s, p))


@dataclass(frozen=True, eq=False)
class ParseTable:
    method: str
    grammar: Grammar
    columns: tuple[Symbol, ...]
    rows: tuple[tuple[tuple[Action, ...], ...], ...]

    @cached_property
    def _column_index(self) -> dict[Symbol, int]:
        return {s: i for i, s in enumerate(self.columns)}

    def actions(self, state: int, symbol: Symbol) -> tuple[Action, ...]:
        return self.rows[state][self._column_index[symbol]]

    @cached_property
    def conflicts(self) -> tuple[Conflict, ...]:
        return tuple(find_conflicts(self))

    @property
    def conflict_free(self) -> bool:
        return not self.conflicts


def table_columns(g: Grammar) -> tuple[Symbol, ...]:
    """Terminals in grammar order, the endmarker, then the original nonterminals."""
    aug_start = g.production(0).driver if g.augmented else None
    nts = tuple(a for a in g.nonterminals if a != aug_start)
    return g.terminals + (END,) + nts


def build_table(aut: Automaton, policy: LookaheadPolicy) -> ParseTable:
    """Fill each entry by the rules: Shift on terminal transitions, Reduce on
    lookahead membership, Accept at (accepting state, $), explicit Error on
    remaining terminal cells, Goto on nonterminal transitions.  Multiple
    qualifying directives accumulate in the cell."""
    g = aut.grammar
    columns = table_columns(g)
    rows: list[tuple[tuple[Action, ...], ...]] = []
    for i, state in enumerate(aut.states):
        reducing: list[int] = []
        has_accept = False
        for core in state:
            flags = classify(core, g)
            if flags.reducing:
                reducing.append(core.production)
            has_accept = has_accept or flags.accepting
        las = {pid: policy.lookahead(i, pid) for pid in reducing}
        row: list[tuple[Action, ...]] = []
        for y in columns:
            cell: list[Action] = []
            if y == END or g.is_terminal(y):
                if y != END:
                    target = aut.target(i, y)
                    if target is not None:
                        cell.append(Action(SHIFT, target))
                for pid in reducing:
                    if y in las[pid]:
                        cell.append(Action(REDUCE, pid))
                if has_accept and y == END:
                    cell.append(Action(ACCEPT))
                if not cell:
                    cell.append(Action(ERROR))
            else:
                target = aut.target(i, y)
                if target is not None:
                    cell.append(Action(GOTO, target))
            row.append(tuple(cell))
        rows.append(tuple(row))
    return ParseTable(method=policy.method, grammar=g, columns=columns, rows=tuple(rows))


def find_conflicts(t: ParseTable) -> list[Conflict]:
    """Cells holding more than one directive, in (state, column) order.  The
    Accept directive counts as a reduction (of the augmentation production)
    when classifying."""
    out: list[Conflict] = []
    for state, row in enumerate(t.rows):
        for symbol, cell in zip(t.columns, row):
            if symbol != END and t.grammar.is_nonterminal(symbol):
                assert len(cell) <= 1, "nonterminal columns never conflict"
                continue
            if len(cell) <= 1:
                continue
            kind = "shift/reduce" if any(a.kind == SHIFT for a in cell) else "reduce/reduce"
            out.append(Conflict(state=state, symbol=symbol, kind=kind, actions=cell))
    return out


# -- per-method pipelines -----------------------------------------------------


@dataclass
class MethodBuild:
    """Everything one method produces for a grammar: the automaton driving the
    table, the table itself, and the symbolic-route artifacts when relevant."""

    method: str
    grammar: Grammar  # augmented
    automaton: Automaton
    table: ParseTable
    lr1_automaton: Automaton | None = None
    merged_map: dict[int, int] | None = None
    equations: EquationSystem | None = None
    reduced: ReducedSystem | None = None
    graph: DependencyGraph | None = None
    valuation: dict[Variable, frozenset] | None = None


def reject_if_not_reduced(g: Grammar) -> None:
    useless = check_reduced(g)
    if useless:
        raise NotReducedError(useless)


def build_for_method(g: Grammar, method: str) -> MethodBuild:
    """Validate reducedness, augment, and run the chosen pipeline."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose one of {', '.join(METHODS)}")
    if not g.augmented:
        reject_if_not_reduced(g)
        g = augment(g)
    if method == SLR1:
        aut = build_lr0(g)
        return MethodBuild(method, g, aut, build_table(aut, slr_policy(aut)))
    if method == CANONICAL_LR1:
        aut = build_lr1(g)
        return MethodBuild(method, g, aut, build_table(aut, lr_policy(aut)))
    if method == LALR1_MERGED:
        lr1 = build_lr1(g)
        merged, state_map = merge_lr1(lr1)
        table = build_table(merged, lrm_policy(merged))
        return MethodBuild(method, g, merged, table, lr1_automaton=lr1, merged_map=state_map)
    aut, es = build_symbolic(g)
    rs = reduce_system(es)
    dg = build_dependency_graph(rs)
    val = actualize(es, rs, evaluate(dg))
    table = build_table(aut, lalr_policy(aut, val))
    return MethodBuild(
        method, g, aut, table, equations=es, reduced=rs, graph=dg, valuation=val
    )


@dataclass
class ClassifyResult:
    slr1: bool
    lalr1: bool
    lr1: bool
    builds: dict[str, MethodBuild] = field(repr=False, default_factory=dict)

    def as_pairs(self) -> list[tuple[str, bool]]:
        return [("SLR(1)", self.slr1), ("LALR(1)", self.lalr1), ("LR(1)", self.lr1)]


def classify_grammar(g: Grammar) -> ClassifyResult:
    """Build all four tables and report class membership; the two LALR routes
    must agree on the verdict."""
    builds = {m: build_for_method(g, m) for m in METHODS}
    merged_ok = builds[LALR1_MERGED].table.conflict_free
    symbolic_ok = builds[LALR1_SYMBOLIC].table.conflict_free
    assert merged_ok == symbolic_ok, "the two LALR routes must agree"
    return ClassifyResult(
        slr1=builds[SLR1].table.conflict_free,
        lalr1=merged_ok,
        lr1=builds[CANONICAL_LR1].table.conflict_free,
        builds=builds,
    )


# -- rendering ----------------------------------------------------------------


def _cell_text(cell: tuple[Action, ...]) -> str:
    return "/".join(a.render() for a in cell)


def render_table_text(t: ParseTable) -> str:
    names = [s.name for s in t.columns]
    grid = [[_cell_text(cell) for cell in row] for row in t.rows]
    labels = [f"P{i}" for i in range(len(t.rows))]
    label_w = max(len(x) for x in labels + ["state"])
    widths = [max(len(names[c]), *(len(r[c]) for r in grid)) if grid else len(names[c]) for c in range(len(names))]
    lines = ["  ".join(["state".ljust(label_w)] + [n.ljust(w) for n, w in zip(names, widths)])]
    for label, row in zip(labels, grid):
        lines.append("  ".join([label.ljust(label_w)] + [c.ljust(w) for c, w in zip(row, widths)]))
    return "\n".join(lines) + "\n"


def render_conflicts(t: ParseTable) -> list[str]:
    out = []
    for c in t.conflicts:
        acts = ", ".join(a.render() for a in c.actions)
        out.append(f'{c.kind} conflict at state P{c.state} on "{c.symbol.name}": {{{acts}}}')
    return out


def table_json_dict(t: ParseTable) -> dict:
    return {
        "format_version": 1,
        "method": t.method,
        "states": len(t.rows),
        "columns": [s.name for s in t.columns],
        "cells": [[[a.render() for a in cell] for cell in row] for row in t.rows],
        "conflicts": [
            {
                "state": c.state,
                "symbol": c.symbol.name,
                "kind": c.kind,
                "actions": [a.render() for a in c.actions],
            }
            for c in t.conflicts
        ],
    }
