"""lrkit: SLR(1), canonical LR(1), and LALR(1) parsing tables built on
characteristic automata, with both the LR(1)-merging and the symbolic
equation-solving LALR constructions, plus a shift/reduce engine."""

__version__ = "0.1.0"

from .grammar import (
    END,
    EPSILON,
    EmptyGrammarError,
    Grammar,
    GrammarError,
    GrammarSyntaxError,
    NotReducedError,
    Production,
    ReservedSymbolError,
    Symbol,
    UnknownSymbolError,
    augment,
    check_reduced,
    first,
    first_sets,
    follow,
    follow_sets,
    load_grammar,
)
from .items import (
    Item0,
    ItemSet,
    LaItemSet,
    classify,
    closure0,
    closure1,
    closure1_rounds,
    goto_kernel0,
    goto_kernel1,
    kernel_of,
    project,
)
from .automata import Automaton, build_lr0, build_lr1, merge_lr1, to_dot
from .symbolic import (
    DependencyGraph,
    EquationSystem,
    ReducedSystem,
    Variable,
    actualize,
    build_dependency_graph,
    build_symbolic,
    evaluate,
    reduce_system,
    solve,
)
from .tables import (
    METHODS,
    Action,
    ClassifyResult,
    Conflict,
    LookaheadPolicy,
    MethodBuild,
    ParseTable,
    build_for_method,
    build_table,
    classify_grammar,
    find_conflicts,
    la_lalr,
    la_lr,
    la_lrm,
    la_slr,
)
from .engine import (
    ConflictedTableError,
    ParseNode,
    ParseResult,
    Token,
    derivation_check,
    parse,
    tokenize,
)

__all__ = [name for name in dir() if not name.startswith("_")]
