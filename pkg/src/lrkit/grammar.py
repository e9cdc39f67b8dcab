"""Context-free grammar model: loading, augmentation, reducedness, FIRST and FOLLOW.

Symbol strings (the alpha/beta of derivations) are plain tuples of Symbol;
the empty tuple stands for the empty string.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

TERMINAL = "terminal"
NONTERMINAL = "nonterminal"
ENDMARKER = "endmarker"

EMPTY_MARKER = "%empty"
ARROW = "->"


class GrammarError(ValueError):
    """Any grammar-level failure; carries an optional source position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class GrammarSyntaxError(GrammarError):
    pass


class ReservedSymbolError(GrammarSyntaxError):
    pass


class EmptyGrammarError(GrammarError):
    pass


class UnknownSymbolError(GrammarError):
    pass


class NotReducedError(GrammarError):
    """Raised by callers that refuse grammars with useless productions."""

    def __init__(self, useless: Sequence["Production"]):
        self.useless = tuple(useless)
        listing = "; ".join(str(p) for p in self.useless)
        super().__init__(f"grammar is not reduced; useless productions: {listing}")


@dataclass(frozen=True)
class Symbol:
    name: str
    kind: str  # TERMINAL | NONTERMINAL | ENDMARKER

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Symbol({self.name!r}, {self.kind!r})"


#: The endmarker appended to every parsed string; never part of a grammar.
END = Symbol("$", ENDMARKER)


class _Epsilon:
    """Flag element of FIRST sets marking that the string derives the empty string."""

    __slots__ = ()

    def __repr__(self) -> str:
        return EMPTY_MARKER


EPSILON = _Epsilon()


@dataclass(frozen=True)
class Production:
    id: int
    driver: Symbol
    body: tuple[Symbol, ...]

    def __str__(self) -> str:
        rhs = " ".join(s.name for s in self.body) if self.body else EMPTY_MARKER
        return f"{self.driver.name} {ARROW} {rhs}"


@dataclass(frozen=True)
class Grammar:
    nonterminals: tuple[Symbol, ...]
    terminals: tuple[Symbol, ...]
    start: Symbol
    productions: tuple[Production, ...]
    augmented: bool = False

    def __post_init__(self) -> None:
        nts, ts = set(self.nonterminals), set(self.terminals)
        if nts & ts:
            raise GrammarError("nonterminals and terminals overlap")
        if self.start not in nts:
            raise GrammarError(f"start symbol {self.start} is not a nonterminal")
        for p in self.productions:
            if p.driver not in nts:
                raise GrammarError(f"driver of {p} is not a nonterminal")
            for s in p.body:
                if s.kind == ENDMARKER:
                    raise GrammarError(f"endmarker in body of {p}")
                if s not in nts and s not in ts:
                    raise GrammarError(f"unknown symbol {s} in body of {p}")
        if self.augmented:
            zero = [p for p in self.productions if p.id == 0]
            if len(zero) != 1 or zero[0].body != (self.start,):
                raise GrammarError("augmented grammar must have exactly one production id 0 deriving the start symbol")
            aug = zero[0]
            for p in self.productions:
                if aug.driver in p.body:
                    raise GrammarError(f"augmented start symbol occurs in body of {p}")
                if p.id != 0 and p.driver == aug.driver:
                    raise GrammarError("augmented start symbol drives more than one production")

    # -- derived views ------------------------------------------------------

    @cached_property
    def vocabulary(self) -> tuple[Symbol, ...]:
        """All grammar symbols, ordered by first appearance over the productions."""
        seen: dict[Symbol, None] = {}
        for p in sorted(self.productions, key=lambda p: p.id):
            seen.setdefault(p.driver)
            for s in p.body:
                seen.setdefault(s)
        return tuple(seen)

    @cached_property
    def _ordinals(self) -> dict[Symbol, int]:
        return {s: i for i, s in enumerate(self.vocabulary)}

    def ordinal(self, symbol: Symbol) -> int:
        try:
            return self._ordinals[symbol]
        except KeyError:
            raise UnknownSymbolError(f"symbol {symbol} does not belong to the grammar") from None

    @cached_property
    def _by_id(self) -> dict[int, Production]:
        return {p.id: p for p in self.productions}

    def production(self, pid: int) -> Production:
        return self._by_id[pid]

    @cached_property
    def _by_driver(self) -> dict[Symbol, tuple[Production, ...]]:
        table: dict[Symbol, list[Production]] = {a: [] for a in self.nonterminals}
        for p in sorted(self.productions, key=lambda p: p.id):
            table[p.driver].append(p)
        return {a: tuple(ps) for a, ps in table.items()}

    def productions_for(self, driver: Symbol) -> tuple[Production, ...]:
        return self._by_driver[driver]

    def is_terminal(self, symbol: Symbol) -> bool:
        return symbol.kind == TERMINAL

    def is_nonterminal(self, symbol: Symbol) -> bool:
        return symbol.kind == NONTERMINAL

    @cached_property
    def _names(self) -> dict[str, Symbol]:
        return {s.name: s for s in self.vocabulary}

    def symbol(self, name: str) -> Symbol:
        try:
            return self._names[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown symbol name {name!r}") from None


# -- grammar file ingestion -------------------------------------------------


@dataclass(frozen=True)
class _Tok:
    text: str
    line: int
    column: int


def _tokenize_source(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        col = 0
        n = len(line)
        while col < n:
            ch = line[col]
            if ch == "#":
                break
            if ch.isspace():
                col += 1
                continue
            if ch in "|;":
                toks.append(_Tok(ch, lineno, col + 1))
                col += 1
                continue
            start = col
            while col < n and not line[col].isspace() and line[col] not in "|;#":
                col += 1
            toks.append(_Tok(line[start:col], lineno, start + 1))
    return toks


def load_grammar(text: str) -> Grammar:
    """Parse grammar source into an unaugmented, duplicate-free Grammar.

    The driver of the first rule is the start symbol; a name is a nonterminal
    iff it occurs as a driver somewhere.  Production ids are assigned in
    textual order starting at 1 (0 is reserved for augmentation).
    """
    toks = _tokenize_source(text)
    rules: list[tuple[_Tok, list[list[_Tok]]]] = []
    i = 0
    while i < len(toks):
        driver = toks[i]
        if driver.text in ("|", ";", ARROW):
            raise GrammarSyntaxError(f"expected rule driver, found {driver.text!r}", driver.line, driver.column)
        if driver.text in ("$", EMPTY_MARKER):
            raise ReservedSymbolError(f"{driver.text!r} is reserved and cannot drive a rule", driver.line, driver.column)
        i += 1
        if i >= len(toks) or toks[i].text != ARROW:
            tok = toks[i] if i < len(toks) else driver
            raise GrammarSyntaxError(f"expected {ARROW!r} after driver {driver.text!r}", tok.line, tok.column)
        i += 1
        alts: list[list[_Tok]] = [[]]
        closed = False
        while i < len(toks):
            tok = toks[i]
            i += 1
            if tok.text == ";":
                closed = True
                break
            if tok.text == "|":
                alts.append([])
                continue
            if tok.text == ARROW:
                raise GrammarSyntaxError(f"misplaced {ARROW!r} in rule body", tok.line, tok.column)
            alts[-1].append(tok)
        if not closed:
            raise GrammarSyntaxError("rule is not terminated by ';'", driver.line, driver.column)
        for alt in alts:
            if not alt:
                raise GrammarSyntaxError("empty alternative (use %empty for the empty body)", driver.line, driver.column)
        rules.append((driver, alts))

    if not rules:
        raise EmptyGrammarError("grammar contains no rules")

    driver_names = {d.text for d, _ in rules}

    def make(name_tok: _Tok) -> Symbol:
        if name_tok.text == "$":
            raise ReservedSymbolError("'$' is reserved for the endmarker", name_tok.line, name_tok.column)
        kind = NONTERMINAL if name_tok.text in driver_names else TERMINAL
        return Symbol(name_tok.text, kind)

    productions: list[Production] = []
    seen_bodies: set[tuple[Symbol, tuple[Symbol, ...]]] = set()
    nonterminals: dict[Symbol, None] = {}
    terminals: dict[Symbol, None] = {}
    for driver_tok, alts in rules:
        driver = make(driver_tok)
        nonterminals.setdefault(driver)
        for alt in alts:
            if any(t.text == EMPTY_MARKER for t in alt):
                if len(alt) != 1:
                    bad = next(t for t in alt if t.text == EMPTY_MARKER)
                    raise GrammarSyntaxError(f"{EMPTY_MARKER} must stand alone in its alternative", bad.line, bad.column)
                body: tuple[Symbol, ...] = ()
            else:
                body = tuple(make(t) for t in alt)
            for s in body:
                (nonterminals if s.kind == NONTERMINAL else terminals).setdefault(s)
            key = (driver, body)
            if key in seen_bodies:
                continue
            seen_bodies.add(key)
            productions.append(Production(len(productions) + 1, driver, body))

    start = make(rules[0][0])
    return Grammar(
        nonterminals=tuple(nonterminals),
        terminals=tuple(terminals),
        start=start,
        productions=tuple(productions),
        augmented=False,
    )


def augment(g: Grammar) -> Grammar:
    """Return the enriched grammar with a fresh start symbol and production 0."""
    if g.augmented:
        raise GrammarError("grammar is already augmented")
    taken = {s.name for s in g.vocabulary}
    name = g.start.name + "'"
    while name in taken:
        name += "'"
    fresh = Symbol(name, NONTERMINAL)
    zero = Production(0, fresh, (g.start,))
    return Grammar(
        nonterminals=g.nonterminals + (fresh,),
        terminals=g.terminals,
        start=g.start,
        productions=(zero,) + g.productions,
        augmented=True,
    )


def check_reduced(g: Grammar) -> list[Production]:
    """Return the useless productions: unreachable from the start symbol, or
    involving a symbol that cannot derive a terminal string.

    Standard two-pass fixpoint: generating symbols first, then reachability
    over the generating-only productions.
    """
    generating: set[Symbol] = set(g.terminals)
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if p.driver not in generating and all(s in generating for s in p.body):
                generating.add(p.driver)
                changed = True

    surviving = [p for p in g.productions if p.driver in generating and all(s in generating for s in p.body)]

    reachable: set[Symbol] = {g.start}
    changed = True
    while changed:
        changed = False
        for p in surviving:
            if p.driver in reachable:
                for s in p.body:
                    if s not in reachable:
                        reachable.add(s)
                        changed = True

    useful = {p.id for p in surviving if p.driver in reachable}
    return [p for p in g.productions if p.id not in useful]


# -- FIRST and FOLLOW -------------------------------------------------------


@lru_cache(maxsize=128)
def first_sets(g: Grammar) -> dict[Symbol, frozenset]:
    """Least fixpoint FIRST for every grammar symbol (and the endmarker)."""
    first: dict[Symbol, set] = {s: {s} for s in g.terminals}
    first[END] = {END}
    for a in g.nonterminals:
        first[a] = set()
    changed = True
    while changed:
        changed = False
        for p in sorted(g.productions, key=lambda p: p.id):
            acc = first[p.driver]
            before = len(acc)
            nullable = True
            for s in p.body:
                acc |= first[s] - {EPSILON}
                if EPSILON not in first[s]:
                    nullable = False
                    break
            if nullable:
                acc.add(EPSILON)
            changed = changed or len(acc) != before
    return {s: frozenset(v) for s, v in first.items()}


def first(g: Grammar, alpha: Sequence[Symbol]) -> frozenset:
    """FIRST of a symbol string; contains EPSILON iff alpha derives the empty string.

    The endmarker is permitted as the final element and begins itself.
    """
    table = first_sets(g)
    for i, s in enumerate(alpha):
        if s == END:
            if i != len(alpha) - 1:
                raise UnknownSymbolError("endmarker may only end a symbol string")
        elif s not in table:
            raise UnknownSymbolError(f"symbol {s} does not belong to the grammar")
    out: set = set()
    for s in alpha:
        f = table[s]
        out |= f - {EPSILON}
        if EPSILON not in f:
            return frozenset(out)
    out.add(EPSILON)
    return frozenset(out)


@lru_cache(maxsize=128)
def follow_sets(g: Grammar) -> dict[Symbol, frozenset]:
    """Least fixpoint FOLLOW over an augmented grammar; the endmarker seeds
    the follow set of the augmented start symbol."""
    if not g.augmented:
        raise GrammarError("FOLLOW is computed on the augmented grammar")
    table = first_sets(g)
    follow: dict[Symbol, set] = {a: set() for a in g.nonterminals}
    follow[g.production(0).driver].add(END)
    changed = True
    while changed:
        changed = False
        for p in sorted(g.productions, key=lambda p: p.id):
            for i, s in enumerate(p.body):
                if s.kind != NONTERMINAL:
                    continue
                acc = follow[s]
                before = len(acc)
                nullable_rest = True
                for t in p.body[i + 1 :]:
                    acc |= table[t] - {EPSILON}
                    if EPSILON not in table[t]:
                        nullable_rest = False
                        break
                if nullable_rest:
                    acc |= follow[p.driver]
                changed = changed or len(acc) != before
    return {a: frozenset(v) for a, v in follow.items()}


def follow(g: Grammar, a: Symbol) -> frozenset:
    """FOLLOW of a nonterminal of an augmented grammar."""
    if a.kind != NONTERMINAL:
        raise UnknownSymbolError(f"FOLLOW is defined on nonterminals, got {a}")
    table = follow_sets(g)
    if a not in table:
        raise UnknownSymbolError(f"symbol {a} does not belong to the grammar")
    return table[a]
