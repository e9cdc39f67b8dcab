"""Pydantic request/response models for the HTTP service.

The JSON bodies double as the CLI's --format json output, so every response
carries format_version and is built deterministically from the core objects.
"""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from .. import engine, tables
from ..automata import Automaton
from ..grammar import Grammar, Production
from ..items import classify, la_sort_key
from ..tables import ClassifyResult, MethodBuild, ParseTable

Method = Literal["slr1", "lr1", "lalr1-merged", "lalr1-symbolic"]
OutputFormat = Literal["text", "json", "dot"]


class GrammarRequest(BaseModel):
    grammar: str = Field(description="Grammar source text")


class AutomatonRequest(GrammarRequest):
    method: Method
    include_dot: bool = False


class TableRequest(GrammarRequest):
    method: Method


class ParseRequest(GrammarRequest):
    method: Method
    input: str
    trace: bool = False


class ProductionModel(BaseModel):
    id: int
    driver: str
    body: list[str]

    @classmethod
    def from_core(cls, p: Production) -> "ProductionModel":
        return cls(id=p.id, driver=p.driver.name, body=[s.name for s in p.body])


class CheckResponse(BaseModel):
    format_version: int = 1
    start: str
    nonterminals: list[str]
    terminals: list[str]
    productions: list[ProductionModel]
    reduced: bool
    useless: list[ProductionModel]

    @classmethod
    def from_core(cls, g: Grammar, useless: list[Production]) -> "CheckResponse":
        return cls(
            start=g.start.name,
            nonterminals=[s.name for s in g.nonterminals],
            terminals=[s.name for s in g.terminals],
            productions=[ProductionModel.from_core(p) for p in g.productions],
            reduced=not useless,
            useless=[ProductionModel.from_core(p) for p in useless],
        )


class FirstFollowEntry(BaseModel):
    symbol: str
    first: list[str]
    nullable: bool
    follow: list[str]


class FirstFollowResponse(BaseModel):
    format_version: int = 1
    entries: list[FirstFollowEntry]

    @classmethod
    def from_core(cls, ga: Grammar) -> "FirstFollowResponse":
        from ..grammar import EPSILON, first_sets, follow_sets

        firsts, follows = first_sets(ga), follow_sets(ga)
        key = la_sort_key(ga)
        aug_start = ga.production(0).driver
        entries = []
        for a in ga.nonterminals:
            if a == aug_start:
                continue
            f = firsts[a]
            entries.append(
                FirstFollowEntry(
                    symbol=a.name,
                    first=[s.name for s in sorted(f - {EPSILON}, key=key)],
                    nullable=EPSILON in f,
                    follow=[s.name for s in sorted(follows[a], key=key)],
                )
            )
        return cls(entries=entries)


class StateModel(BaseModel):
    id: int
    name: str
    final: bool
    items: list[str]
    kernel: list[str]


class TransitionModel(BaseModel):
    source: int
    symbol: str
    target: int


class EquationModel(BaseModel):
    variable: str
    rhs: list[str]
    reducing: bool


class ValuationModel(BaseModel):
    variable: str
    value: list[str]


class AutomatonResponse(BaseModel):
    format_version: int = 1
    method: Method
    kind: str
    initial: int
    states: list[StateModel]
    finals: list[int]
    transitions: list[TransitionModel]
    equations: Optional[list[EquationModel]] = None
    valuation: Optional[list[ValuationModel]] = None
    dot: Optional[str] = None

    @classmethod
    def from_core(cls, build: MethodBuild, dot: str | None = None) -> "AutomatonResponse":
        a: Automaton = build.automaton
        g = a.grammar
        states = []
        for i in range(len(a.states)):
            rendered = a.render_items(i)
            kernel_rendered = [
                text
                for text, core in zip(rendered, a.states[i])
                if classify(core, g).kernel
            ]
            states.append(
                StateModel(
                    id=i,
                    name=a.state_name(i),
                    final=i in a.finals,
                    items=rendered,
                    kernel=kernel_rendered,
                )
            )
        equations = valuation = None
        if build.equations is not None:
            key = la_sort_key(g)
            equations = [
                EquationModel(
                    variable=str(v),
                    rhs=[str(el) for el in sorted(build.equations.equations[v], key=key)],
                    reducing=v in build.equations.reducing,
                )
                for v in build.equations.variables
            ]
            assert build.valuation is not None
            valuation = [
                ValuationModel(
                    variable=str(v),
                    value=[s.name for s in sorted(build.valuation[v], key=key)],
                )
                for v in build.equations.variables
            ]
        return cls(
            method=build.method,
            kind=a.kind,
            initial=a.initial,
            states=states,
            finals=sorted(a.finals),
            transitions=[
                TransitionModel(source=i, symbol=s.name, target=j)
                for i, s, j in a.transitions()
            ],
            equations=equations,
            valuation=valuation,
            dot=dot,
        )


class ConflictModel(BaseModel):
    state: int
    symbol: str
    kind: str
    actions: list[str]


class TableResponse(BaseModel):
    format_version: int = 1
    method: Method
    states: int
    columns: list[str]
    cells: list[list[list[str]]]
    conflicts: list[ConflictModel]

    @classmethod
    def from_core(cls, t: ParseTable) -> "TableResponse":
        return cls(**tables.table_json_dict(t))


class ClassifyResponse(BaseModel):
    format_version: int = 1
    slr1: bool
    lalr1: bool
    lr1: bool
    conflict_counts: dict[str, int]

    @classmethod
    def from_core(cls, result: ClassifyResult) -> "ClassifyResponse":
        return cls(
            slr1=result.slr1,
            lalr1=result.lalr1,
            lr1=result.lr1,
            conflict_counts={
                m: len(result.builds[m].table.conflicts) for m in tables.METHODS
            },
        )


class TreeModel(BaseModel):
    symbol: str
    children: list["TreeModel"] = []

    @classmethod
    def from_core(cls, node: engine.ParseNode) -> "TreeModel":
        return cls(
            symbol=node.symbol.name,
            children=[cls.from_core(c) for c in node.children],
        )


class ParseResponse(BaseModel):
    format_version: int = 1
    method: Method
    verdict: Literal["accepted", "rejected"]
    derivation: list[int]
    derivation_text: list[str]
    tree: Optional[TreeModel] = None
    position: Optional[int] = None
    expected: Optional[list[str]] = None
    trace: Optional[list[str]] = None

    @classmethod
    def from_core(
        cls, build: MethodBuild, result: engine.ParseResult, with_trace: bool
    ) -> "ParseResponse":
        g = build.grammar
        return cls(
            method=build.method,
            verdict="accepted" if result.accepted else "rejected",
            derivation=list(result.derivation),
            derivation_text=[str(g.production(pid)) for pid in result.derivation],
            tree=TreeModel.from_core(result.tree) if result.tree else None,
            position=result.position,
            expected=None if result.accepted else [s.name for s in result.expected],
            trace=list(result.trace) if with_trace else None,
        )


class ErrorResponse(BaseModel):
    error: str
    line: Optional[int] = None
    column: Optional[int] = None
