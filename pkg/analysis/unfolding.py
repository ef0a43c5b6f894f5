"""
Unfolding of nonrecursive IDB predicates

Every positive IDB atom P(e:t) in a body is replaced by the body of a rule
defining P, renamed apart, together with the equality e = e' against that
rule's head path. Terms are unified statically. Relations are unfolded in
topological order, so after unfolding every body mentions EDB names only.
"""

from itertools import count
from typing import Dict, Iterator, List, Optional

import networkx as nx
import structlog

from language.dependencies import dependency_graph, is_recursive
from language.desugar import desugar
from language.renaming import rename_apart
from models.errors import PreconditionFailed
from models.program import (
    Const,
    Equality,
    Literal,
    Predicate,
    Program,
    Rule,
    Term,
    Var,
    substitute_rule,
)
from models.terms import EMPTY

logger = structlog.get_logger(__name__)


def _term_mapping(outer: Term, inner: Term) -> Optional[dict]:
    """Mapping making the two terms equal, or None when they never are"""
    if outer == inner:
        return {}
    if outer is EMPTY or inner is EMPTY:
        return None
    if isinstance(outer, Const) and isinstance(inner, Const):
        return None
    if isinstance(outer, Var):
        return {outer: inner}
    return {inner: outer}


def _expand(rule: Rule, definitions: Dict[str, List[Rule]], salts: Iterator[int]) -> List[Rule]:
    position = next(
        (i for i, lit in enumerate(rule.body) if lit.is_predicate and lit.atom.relation in definitions),
        None,
    )
    if position is None:
        return [rule]

    lit = rule.body[position]
    if not lit.positive:
        raise PreconditionFailed([f"negated derived relation {lit.atom.relation} in {rule}"])
    atom: Predicate = lit.atom
    rest = rule.body[:position] + rule.body[position + 1:]

    results: List[Rule] = []
    for definition in definitions[atom.relation]:
        copy = rename_apart(definition, next(salts))
        mapping = _term_mapping(atom.term, copy.head.term)
        if mapping is None:
            continue
        link = Literal(Equality(atom.path, copy.head.path))
        combined = Rule(rule.head, rest + copy.body + (link,), rule.span)
        results.extend(_expand(substitute_rule(combined, mapping), definitions, salts))
    return results


def unfold_program(program: Program) -> Program:
    """
    Equivalent program whose rules define the output relations directly
    from the input relations.

    Raises PreconditionFailed for recursive programs and for derived
    relations used under negation.
    """
    program = desugar(program)
    if is_recursive(program):
        raise PreconditionFailed(["program is recursive"])

    graph = dependency_graph(program)
    salts = count(1)
    definitions: Dict[str, List[Rule]] = {}
    for relation in nx.lexicographical_topological_sort(graph):
        if relation not in program.idb:
            continue
        unfolded: List[Rule] = []
        for rule in program.rules_for(relation):
            for expanded in _expand(rule, definitions, salts):
                if expanded not in unfolded:
                    unfolded.append(expanded)
        definitions[relation] = unfolded

    outputs = sorted(program.output_names)
    rules = [rule for name in outputs for rule in definitions.get(name, [])]
    logger.debug("program_unfolded", before=len(program.rules), after=len(rules))
    return program.with_rules(rules)
