"""Dotted items, item sets, and the closure/goto machinery.

Two set flavours are used throughout: ItemSet holds bare dotted productions,
LaItemSet keys items by their dotted core and attaches a lookahead set to
each core.  Lookahead elements are terminal Symbols, the endmarker, or (in
symbolic automata) Variable objects from the symbolic module.  Both flavours
preserve insertion order, which drives every downstream numbering.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from .grammar import END, EPSILON, Grammar, Symbol, first


@dataclass(frozen=True)
class Item0:
    """A production of the augmented grammar with a dot position in its body."""

    production: int
    dot: int


@dataclass(frozen=True)
class ItemFlags:
    initial: bool
    accepting: bool
    kernel: bool
    closure: bool
    reducing: bool


def classify(item: Item0, g: Grammar) -> ItemFlags:
    """Classification per the dot position; lookahead items inherit their core's flags."""
    p = g.production(item.production)
    at_end = item.dot == len(p.body)
    initial = item.production == 0 and item.dot == 0
    accepting = item.production == 0 and item.dot == 1
    kernel = initial or item.dot > 0
    return ItemFlags(
        initial=initial,
        accepting=accepting,
        kernel=kernel,
        closure=not kernel,
        reducing=at_end and not accepting,
    )


def next_symbol(item: Item0, g: Grammar) -> Symbol | None:
    """The symbol right of the dot, or None when the dot is rightmost."""
    body = g.production(item.production).body
    return body[item.dot] if item.dot < len(body) else None


def render_item0(item: Item0, g: Grammar) -> str:
    p = g.production(item.production)
    names = [s.name for s in p.body]
    parts = names[: item.dot] + ["."] + names[item.dot :]
    return f"{p.driver.name} -> {' '.join(parts)}"


def la_sort_key(g: Grammar):
    """Ordering for lookahead elements: terminals in grammar order, then the
    endmarker, then variables by index."""

    def key(el) -> tuple[int, int]:
        if isinstance(el, Symbol):
            if el.kind == "endmarker":
                return (1, 0)
            return (0, g.ordinal(el))
        return (2, el.index)

    return key


def render_lookahead(la: Iterable, g: Grammar) -> str:
    names = [str(el) for el in sorted(la, key=la_sort_key(g))]
    return "{" + ", ".join(names) + "}"


def render_la_item(core: Item0, la: Iterable, g: Grammar) -> str:
    return f"[{render_item0(core, g)}, {render_lookahead(la, g)}]"


class ItemSet:
    """Insertion-ordered set of Item0; equality and hashing ignore order."""

    __slots__ = ("_order", "_members")

    def __init__(self, items: Iterable[Item0] = ()):
        order: list[Item0] = []
        members: set[Item0] = set()
        for it in items:
            if it not in members:
                members.add(it)
                order.append(it)
        self._order = tuple(order)
        self._members = frozenset(members)

    def __iter__(self) -> Iterator[Item0]:
        return iter(self._order)

    def __len__(self) -> int:
        return len(self._order)

    def __contains__(self, item: Item0) -> bool:
        return item in self._members

    def __eq__(self, other) -> bool:
        return isinstance(other, ItemSet) and self._members == other._members

    def __hash__(self) -> int:
        return hash(self._members)

    def __repr__(self) -> str:
        return f"ItemSet({list(self._order)!r})"

    def key(self) -> frozenset:
        return self._members


class LaItemSet:
    """Core-keyed items with lookahead sets; at most one entry per core."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Iterable[tuple[Item0, Iterable]] = ()):
        merged: dict[Item0, frozenset] = {}
        for core, la in entries:
            la = frozenset(la)
            if core in merged:
                merged[core] = merged[core] | la
            else:
                merged[core] = la
        self._entries = merged

    def cores(self) -> tuple[Item0, ...]:
        return tuple(self._entries)

    def la(self, core: Item0) -> frozenset:
        return self._entries[core]

    def items(self) -> Iterator[tuple[Item0, frozenset]]:
        return iter(self._entries.items())

    def __iter__(self) -> Iterator[Item0]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, core: Item0) -> bool:
        return core in self._entries

    def __eq__(self, other) -> bool:
        return isinstance(other, LaItemSet) and self._entries == other._entries

    def __hash__(self) -> int:
        return hash(frozenset(self._entries.items()))

    def __repr__(self) -> str:
        return f"LaItemSet({list(self._entries.items())!r})"

    def key(self) -> frozenset:
        return frozenset(self._entries.items())


def project(p: LaItemSet | ItemSet) -> ItemSet:
    """The set of distinct cores, forgetting lookaheads."""
    if isinstance(p, ItemSet):
        return p
    return ItemSet(p.cores())


def kernel_of(p: ItemSet | LaItemSet, g: Grammar):
    """Subset of p whose items are kernel items (initial, or dot not leftmost)."""
    if isinstance(p, ItemSet):
        return ItemSet(it for it in p if classify(it, g).kernel)
    return LaItemSet((core, la) for core, la in p.items() if classify(core, g).kernel)


def closure0(p: ItemSet, g: Grammar) -> ItemSet:
    """Smallest superset of p closed under adding fresh items for every
    nonterminal right of a dot."""
    order: list[Item0] = list(p)
    members = set(order)
    queue = deque(order)
    while queue:
        item = queue.popleft()
        nxt = next_symbol(item, g)
        if nxt is None or not g.is_nonterminal(nxt):
            continue
        for prod in g.productions_for(nxt):
            fresh = Item0(prod.id, 0)
            if fresh not in members:
                members.add(fresh)
                order.append(fresh)
                queue.append(fresh)
    return ItemSet(order)


def _first_after(g: Grammar, beta: tuple[Symbol, ...], la: frozenset) -> frozenset:
    """Union of FIRST(beta d) over lookahead elements d, which begin themselves."""
    f = first(g, beta)
    out = set(f - {EPSILON})
    if EPSILON in f:
        out |= la
    return frozenset(out)


def closure1_rounds(p: LaItemSet, g: Grammar) -> tuple[LaItemSet, int]:
    """Lookahead closure with a FIFO worklist; also reports how many worklist
    rounds the computation took (items re-enter the queue when their set grows)."""
    entries: dict[Item0, set] = {core: set(la) for core, la in p.items()}
    queue: deque[Item0] = deque(entries)
    queued = set(entries)
    rounds = 0
    while queue:
        item = queue.popleft()
        queued.discard(item)
        rounds += 1
        nxt = next_symbol(item, g)
        if nxt is None or not g.is_nonterminal(nxt):
            continue
        body = g.production(item.production).body
        beta = body[item.dot + 1 :]
        delta1 = _first_after(g, beta, frozenset(entries[item]))
        for prod in g.productions_for(nxt):
            fresh = Item0(prod.id, 0)
            if fresh not in entries:
                entries[fresh] = set(delta1)
                queue.append(fresh)
                queued.add(fresh)
            elif not delta1 <= entries[fresh]:
                entries[fresh] |= delta1
                if fresh not in queued:
                    queue.append(fresh)
                    queued.add(fresh)
    return LaItemSet((core, la) for core, la in entries.items()), rounds


def closure1(p: LaItemSet, g: Grammar) -> LaItemSet:
    return closure1_rounds(p, g)[0]


def goto_kernel0(p: ItemSet, y: Symbol, g: Grammar) -> ItemSet:
    """Advance the dot over y in every applicable item; yields a kernel set."""
    return ItemSet(
        Item0(it.production, it.dot + 1) for it in p if next_symbol(it, g) == y
    )


def goto_kernel1(p: LaItemSet, y: Symbol, g: Grammar) -> LaItemSet:
    """As goto_kernel0 with lookaheads carried unchanged; equal cores merge."""
    return LaItemSet(
        (Item0(core.production, core.dot + 1), la)
        for core, la in p.items()
        if next_symbol(core, g) == y
    )
