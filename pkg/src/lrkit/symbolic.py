"""Symbolic characteristic automaton and LALR lookahead valuation.

Kernel items of symbolic states carry a single fresh variable as lookahead;
an equation per variable accumulates the contributions flowing into it over
transitions.  Resolving the equations happens in four steps: split off the
reducing (accumulator-only) variables, collapse alias classes into a reduced
system, evaluate the reduced system's dependency graph by an SCC-aware
depth-first union, and actualize every remaining variable from its class
representative or its accumulated right-hand side.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .automata import SYMBOLIC, Automaton, expansion_symbols, _require_augmented
from .grammar import END, Grammar, Symbol
from .items import (
    Item0,
    LaItemSet,
    classify,
    closure1,
    kernel_of,
    la_sort_key,
    next_symbol,
    render_la_item,
    render_lookahead,
)

INFINITY = float("inf")


@dataclass(frozen=True, order=True)
class Variable:
    index: int

    def __str__(self) -> str:
        return f"X{self.index}"

    def __repr__(self) -> str:
        return f"X{self.index}"


@dataclass
class EquationSystem:
    """One equation per variable, in creation order; right-hand sides hold
    ground symbols and variables.  Reducing variables (attached to reducing
    kernel items) act as accumulators and never occur in a right-hand side."""

    variables: tuple[Variable, ...]
    equations: dict[Variable, tuple]
    reducing: frozenset[Variable]

    @property
    def bypassing(self) -> tuple[Variable, ...]:
        return tuple(x for x in self.variables if x not in self.reducing)


@dataclass
class ReducedSystem:
    """Alias-free equations over the class representatives."""

    rep: dict[Variable, Variable]
    rvars: tuple[Variable, ...]
    requations: dict[Variable, tuple]


@dataclass
class DependencyGraph:
    vertices: tuple[Variable, ...]
    edges: dict[Variable, tuple[Variable, ...]]
    init: dict[Variable, frozenset]


def build_symbolic(g: Grammar) -> tuple[Automaton, EquationSystem]:
    """Construct the symbolic automaton and its equation system.

    States match on the projection of their kernels; a matched transition
    folds the incoming lookaheads into the target's kernel-variable equations,
    a new state mints one fresh variable per kernel item.
    """
    _require_augmented(g)
    sort_key = la_sort_key(g)
    counter = 0

    def newvar() -> Variable:
        nonlocal counter
        v = Variable(counter)
        counter += 1
        return v

    x0 = newvar()
    variables = [x0]
    equations: dict[Variable, dict] = {x0: {END: None}}
    reducing: set[Variable] = set()

    start = closure1(LaItemSet([(Item0(0, 0), {x0})]), g)
    states = [start]
    width = len(g.vocabulary)
    matrix: list[list[int | None]] = [[None] * width]
    proj_index = {frozenset(kernel_of(start, g).cores()): 0}
    queue = deque([0])

    while queue:
        si = queue.popleft()
        state = states[si]
        for y in expansion_symbols(state, g):
            tmp: list[tuple[Item0, frozenset]] = [
                (Item0(core.production, core.dot + 1), la)
                for core, la in state.items()
                if next_symbol(core, g) == y
            ]
            proj_key = frozenset(core for core, _ in tmp)
            target = proj_index.get(proj_key)
            if target is not None:
                kernel = kernel_of(states[target], g)
                for core, delta in tmp:
                    (xvar,) = kernel.la(core)
                    rhs = equations[xvar]
                    for el in sorted(delta, key=sort_key):
                        rhs.setdefault(el)
            else:
                fresh_kernel: list[tuple[Item0, set]] = []
                for core, delta in tmp:
                    xvar = newvar()
                    variables.append(xvar)
                    equations[xvar] = {el: None for el in sorted(delta, key=sort_key)}
                    if classify(core, g).reducing:
                        reducing.add(xvar)
                    fresh_kernel.append((core, {xvar}))
                target = len(states)
                states.append(closure1(LaItemSet(fresh_kernel), g))
                matrix.append([None] * width)
                proj_index[proj_key] = target
                queue.append(target)
            matrix[si][g.ordinal(y)] = target

    automaton = Automaton(SYMBOLIC, g, tuple(states), tuple(tuple(r) for r in matrix))
    system = EquationSystem(
        variables=tuple(variables),
        equations={x: tuple(rhs) for x, rhs in equations.items()},
        reducing=frozenset(reducing),
    )
    return automaton, system


def reduce_system(es: EquationSystem) -> ReducedSystem:
    """Collapse alias equations (a bare variable up to self-reference) into
    class representatives, then rewrite the surviving equations over them."""
    rep: dict[Variable, Variable] = {}
    rvars: list[Variable] = []
    for x in es.bypassing:
        rest = [el for el in es.equations[x] if el != x]
        assert rest, "equation right-hand sides are nonempty besides self-references"
        if len(rest) == 1 and isinstance(rest[0], Variable):
            alias = rest[0]
            assert alias in rep, "alias target created (and processed) before its alias"
            rep[x] = rep[alias]
        else:
            rep[x] = x
            rvars.append(x)

    requations: dict[Variable, tuple] = {}
    for x in rvars:
        out: dict = {}
        for el in es.equations[x]:
            if isinstance(el, Variable):
                el = rep[el]
            if el != x:
                out.setdefault(el)
        requations[x] = tuple(out)
    return ReducedSystem(rep=rep, rvars=tuple(rvars), requations=requations)


def build_dependency_graph(rs: ReducedSystem) -> DependencyGraph:
    """Reachability graph of the reduced equations: one vertex per surviving
    variable, an edge per right-hand-side variable, ground symbols as the
    vertex's initial value."""
    members = set(rs.rvars)
    edges: dict[Variable, tuple[Variable, ...]] = {}
    init: dict[Variable, frozenset] = {}
    for x in rs.rvars:
        outgoing = tuple(el for el in rs.requations[x] if isinstance(el, Variable))
        assert all(el in members for el in outgoing)
        edges[x] = outgoing
        init[x] = frozenset(el for el in rs.requations[x] if not isinstance(el, Variable))
    return DependencyGraph(vertices=rs.rvars, edges=edges, init=init)


def evaluate(dg: DependencyGraph) -> dict[Variable, frozenset]:
    """Depth-first valuation that unions values along edges and recognizes
    strongly connected components on the fly; every vertex of an SCC receives
    the value of the component's entry vertex."""
    scc: dict[Variable, float] = {x: 0 for x in dg.vertices}
    val: dict[Variable, set] = {}
    stack: list[Variable] = []

    def traverse(x: Variable) -> None:
        stack.append(x)
        depth = len(stack)
        scc[x] = depth
        val[x] = set(dg.init[x])
        for y in dg.edges[x]:
            if scc[y] == 0:
                traverse(y)
            scc[x] = min(scc[x], scc[y])
            val[x] |= val[y]
        if scc[x] == depth:
            while True:
                top = stack[-1]
                scc[top] = INFINITY
                val[top] = val[x]
                if stack.pop() == x:
                    break

    for x in dg.vertices:
        if scc[x] == 0:
            traverse(x)
    return {x: frozenset(v) for x, v in val.items()}


def actualize(
    es: EquationSystem, rs: ReducedSystem, partial: dict[Variable, frozenset]
) -> dict[Variable, frozenset]:
    """Extend a valuation of the reduced variables to every variable: aliased
    bypassing variables copy their representative, reducing variables union
    their accumulated right-hand sides."""
    val: dict[Variable, frozenset] = dict(partial)
    for x in es.bypassing:
        if x not in val:
            val[x] = val[rs.rep[x]]
    for x in es.variables:
        if x in es.reducing:
            acc: set = set()
            for el in es.equations[x]:
                if isinstance(el, Variable):
                    assert el in val, "reducing equations reference only valued variables"
                    acc |= val[el]
                else:
                    acc.add(el)
            val[x] = frozenset(acc)
    return val


def solve(es: EquationSystem) -> dict[Variable, frozenset]:
    """Full resolution pipeline: reduce, graph, evaluate, actualize."""
    rs = reduce_system(es)
    dg = build_dependency_graph(rs)
    return actualize(es, rs, evaluate(dg))


# -- rendering ----------------------------------------------------------------


def _render_rhs(rhs: Iterable, g: Grammar) -> str:
    return render_lookahead(rhs, g)


def render_symbolic(a: Automaton, es: EquationSystem) -> str:
    """State listing in the style of the equation-system construction: items
    per state, with each kernel variable's equation alongside."""
    g = a.grammar
    lines: list[str] = []
    for i, state in enumerate(a.states):
        flag = "  (final)" if i in a.finals else ""
        lines.append(f"state {a.state_name(i)}:{flag}")
        for core, la in state.items():
            text = render_la_item(core, la, g)
            if classify(core, g).kernel:
                (xvar,) = la
                eq = _render_rhs(es.equations[xvar], g)
                lines.append(f"  {text:<40} look({xvar}) = {eq}")
            else:
                lines.append(f"  {text}")
    return "\n".join(lines) + "\n"


def render_reduced_system(es: EquationSystem, rs: ReducedSystem, g: Grammar) -> str:
    """Four-column table: bypassing equations, class representative, surviving
    variables, and their cleaned-up equations."""
    header = f"{'bypassing equation':<36}{'class':<8}{'kept':<6}reduced equation"
    lines = [header]
    for x in es.bypassing:
        eq = f"look({x}) = {_render_rhs(es.equations[x], g)}"
        klass = str(rs.rep[x])
        if x in rs.requations:
            reduced = f"look({x}) = {_render_rhs(rs.requations[x], g)}"
            lines.append(f"{eq:<36}{klass:<8}{str(x):<6}{reduced}")
        else:
            lines.append(f"{eq:<36}{klass:<8}")
    return "\n".join(lines) + "\n"


def render_valuation(val: dict[Variable, frozenset], g: Grammar) -> str:
    lines = [f"val({x}) = {render_lookahead(v, g)}" for x, v in sorted(val.items())]
    return "\n".join(lines) + "\n"
