"""Grammar-text-in, core-objects-out operations shared by the HTTP endpoints
and the CLI.  Everything here raises GrammarError subclasses (bad grammars)
or ConflictedTableError (parsing against a conflicted table)."""
from __future__ import annotations

from .. import engine
from ..grammar import Grammar, Production, augment, check_reduced, load_grammar
from ..tables import ClassifyResult, MethodBuild, build_for_method, classify_grammar, reject_if_not_reduced


def check(text: str) -> tuple[Grammar, list[Production]]:
    """Load the grammar and report its useless productions (empty when reduced)."""
    g = load_grammar(text)
    return g, check_reduced(g)


def first_follow(text: str) -> Grammar:
    """Load, reject non-reduced grammars, and return the augmented grammar on
    which FIRST/FOLLOW are computed."""
    g = load_grammar(text)
    reject_if_not_reduced(g)
    return augment(g)


def build(text: str, method: str) -> MethodBuild:
    """Load, reject non-reduced grammars, and run the method's pipeline."""
    return build_for_method(load_grammar(text), method)


def classify(text: str) -> ClassifyResult:
    g = load_grammar(text)
    reject_if_not_reduced(g)
    return classify_grammar(g)


def parse_input(
    text: str, method: str, input_text: str, trace: bool = False
) -> tuple[MethodBuild, list[engine.Token], engine.ParseResult]:
    built = build(text, method)
    tokens = engine.tokenize(built.grammar, input_text)
    result = engine.parse(built.table, built.automaton, tokens, trace=trace)
    return built, tokens, result
