"""Characteristic automata: the generic worklist construction instantiated for
LR(0) and LR(1) item sets, plus the merged (LALR) automaton obtained by fusing
LR(1) states with equal projections.

States are numbered in creation order starting from 0; a state is expanded
over the distinct symbols right of a dot, in the order those symbols first
occur scanning the state's items.  This is what makes state numbering (and
thus every rendered artifact) reproducible.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

from .grammar import END, Grammar, GrammarError, Symbol
from .items import (
    Item0,
    ItemSet,
    LaItemSet,
    classify,
    closure0,
    closure1,
    goto_kernel0,
    goto_kernel1,
    kernel_of,
    next_symbol,
    render_item0,
    render_la_item,
)

LR0 = "lr0"
LR1 = "lr1"
MERGED = "merged"
SYMBOLIC = "symbolic"


@dataclass(frozen=True, eq=False)
class Automaton:
    kind: str
    grammar: Grammar
    states: tuple
    matrix: tuple[tuple[int | None, ...], ...]
    initial: int = 0

    @cached_property
    def finals(self) -> frozenset[int]:
        out = set()
        for i, state in enumerate(self.states):
            if any(classify(core, self.grammar).reducing for core in state):
                out.add(i)
        return frozenset(out)

    def target(self, state: int, symbol: Symbol) -> int | None:
        return self.matrix[state][self.grammar.ordinal(symbol)]

    def transitions(self) -> Iterator[tuple[int, Symbol, int]]:
        vocab = self.grammar.vocabulary
        for i, row in enumerate(self.matrix):
            for j, t in enumerate(row):
                if t is not None:
                    yield i, vocab[j], t

    def state_name(self, i: int) -> str:
        return f"P{i}"

    def kernel(self, i: int):
        return kernel_of(self.states[i], self.grammar)

    def render_items(self, i: int) -> list[str]:
        g = self.grammar
        state = self.states[i]
        if isinstance(state, ItemSet):
            return [render_item0(core, g) for core in state]
        return [render_la_item(core, la, g) for core, la in state.items()]


def expansion_symbols(state, g: Grammar) -> list[Symbol]:
    """Distinct symbols right of a dot, ordered by first occurrence in the state."""
    seen: dict[Symbol, None] = {}
    for core in state:
        nxt = next_symbol(core, g)
        if nxt is not None:
            seen.setdefault(nxt)
    return list(seen)


def _require_augmented(g: Grammar) -> None:
    if not g.augmented:
        raise GrammarError("automaton construction requires an augmented grammar")


def _build(g: Grammar, kind: str, start_state, goto_fn, closure_fn) -> Automaton:
    """Generic worklist construction: states are identified by their kernels."""
    width = len(g.vocabulary)
    states = [start_state]
    matrix: list[list[int | None]] = [[None] * width]
    kernel_index = {kernel_of(start_state, g).key(): 0}
    queue = deque([0])
    while queue:
        si = queue.popleft()
        for y in expansion_symbols(states[si], g):
            tmp = goto_fn(states[si], y, g)
            target = kernel_index.get(tmp.key())
            if target is None:
                target = len(states)
                states.append(closure_fn(tmp, g))
                matrix.append([None] * width)
                kernel_index[tmp.key()] = target
                queue.append(target)
            matrix[si][g.ordinal(y)] = target
    return Automaton(kind, g, tuple(states), tuple(tuple(r) for r in matrix))


def build_lr0(g: Grammar) -> Automaton:
    """LR(0) automaton from closure0 over the initial item."""
    _require_augmented(g)
    start = closure0(ItemSet([Item0(0, 0)]), g)
    return _build(g, LR0, start, goto_kernel0, closure0)


def build_lr1(g: Grammar) -> Automaton:
    """Canonical LR(1) automaton; state identity compares kernels including
    lookahead sets."""
    _require_augmented(g)
    start = closure1(LaItemSet([(Item0(0, 0), {END})]), g)
    return _build(g, LR1, start, goto_kernel1, closure1)


def merge_lr1(a: Automaton) -> tuple[Automaton, dict[int, int]]:
    """Fuse LR(1) states with equal projections into one state each, unioning
    lookaheads per core.  Returns the merged automaton and the class map from
    LR(1) state to merged state.  Merged states are numbered by their smallest
    member's index."""
    if a.kind != LR1:
        raise ValueError("merge_lr1 expects an LR(1) automaton")
    g = a.grammar
    classes: dict[frozenset, list[int]] = {}
    for i, state in enumerate(a.states):
        classes.setdefault(frozenset(state.cores()), []).append(i)
    ordered = sorted(classes.values(), key=min)

    state_map: dict[int, int] = {}
    merged_states: list[LaItemSet] = []
    for new_id, members in enumerate(ordered):
        for m in members:
            state_map[m] = new_id
        rep = a.states[members[0]]
        merged_states.append(
            LaItemSet(
                (core, frozenset().union(*(a.states[m].la(core) for m in members)))
                for core in rep.cores()
            )
        )

    width = len(g.vocabulary)
    matrix: list[list[int | None]] = [[None] * width for _ in merged_states]
    for i, sym, j in a.transitions():
        mi, mj = state_map[i], state_map[j]
        col = g.ordinal(sym)
        assert matrix[mi][col] in (None, mj), "merged transitions must agree within a class"
        matrix[mi][col] = mj
    merged = Automaton(MERGED, g, tuple(merged_states), tuple(tuple(r) for r in matrix))
    return merged, state_map


# -- rendering ----------------------------------------------------------------


def render_automaton(a: Automaton) -> str:
    """Plain-text listing: per-state items, transition map, finals."""
    lines: list[str] = []
    for i in range(len(a.states)):
        flag = "  (final)" if i in a.finals else ""
        lines.append(f"state {a.state_name(i)}:{flag}")
        for text in a.render_items(i):
            lines.append(f"  {text}")
    lines.append("")
    lines.append("transitions:")
    for i, sym, j in a.transitions():
        lines.append(f"  {a.state_name(i)} --{sym.name}--> {a.state_name(j)}")
    finals = ", ".join(a.state_name(i) for i in sorted(a.finals))
    lines.append(f"final states: {finals}")
    return "\n".join(lines) + "\n"


_RECORD_ESCAPES = str.maketrans(
    {c: "\\" + c for c in ("\\", "{", "}", "<", ">", "|", '"')}
)


def _record_escape(text: str) -> str:
    return text.translate(_RECORD_ESCAPES)


def to_dot(a: Automaton, name: str = "automaton") -> str:
    """Graphviz export: one record node per state, doubled border on finals."""
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  node [shape=record, fontname="monospace"];']
    for i in range(len(a.states)):
        label_items = "\\l".join(_record_escape(t) for t in a.render_items(i))
        label = f"{{{a.state_name(i)}|{label_items}\\l}}"
        extra = ", peripheries=2" if i in a.finals else ""
        lines.append(f'  {a.state_name(i)} [label="{label}"{extra}];')
    for i, sym, j in a.transitions():
        lines.append(f'  {a.state_name(i)} -> {a.state_name(j)} [label="{_record_escape(sym.name)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
