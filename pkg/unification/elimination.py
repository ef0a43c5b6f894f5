"""
Equality elimination

A rule (or jaegd) with positive equalities is equivalent to the finite set
obtained by solving one equality at a time: every most-general unifier of
the equality is applied to the rest of the rule, and the equality is
dropped. Negative equalities are kept.
"""

from typing import List, Optional, Union

import structlog

from language.renaming import variable_names
from models.errors import CyclicEquality
from models.program import (
    Equality,
    Jaegd,
    Literal,
    Program,
    Rule,
    substitute_jaegd,
    substitute_rule,
)
from unification.mgu import enumerate_mgus, is_solvable

logger = structlog.get_logger(__name__)

Carrier = Union[Rule, Jaegd]


def _with_body(source: Carrier, body) -> Carrier:
    if isinstance(source, Rule):
        return Rule(source.head, tuple(body), source.span)
    return Jaegd(tuple(body), source.consequent, source.span)


def _substitute(source: Carrier, mapping) -> Carrier:
    if isinstance(source, Rule):
        return substitute_rule(source, mapping)
    return substitute_jaegd(source, mapping)


def _pick(source: Carrier) -> Optional[int]:
    """Index of the first positive equality the unifier enumeration accepts"""
    pending = False
    for index, lit in enumerate(source.body):
        if lit.positive and lit.is_equality:
            pending = True
            if is_solvable(lit.atom):
                return index
    if pending:
        remaining = [str(l) for l in source.body if l.positive and l.is_equality]
        raise CyclicEquality(f"Cannot eliminate equalities {remaining} of {source}")
    return None


def _eliminate(source: Carrier) -> List[Carrier]:
    index = _pick(source)
    if index is None:
        return [source]

    eq: Equality = source.body[index].atom
    rest = source.body[:index] + source.body[index + 1:]
    remainder = _with_body(source, rest)
    results: List[Carrier] = []
    for unifier in enumerate_mgus(eq.left, eq.right, avoid=variable_names(source)):
        solved = _substitute(remainder, unifier.mapping)
        solved = _with_body(solved, _drop_trivial(solved.body))
        results.extend(_eliminate(solved))
    return results


def _drop_trivial(body) -> List[Literal]:
    kept = []
    for lit in body:
        if lit.positive and lit.is_equality and lit.atom.left == lit.atom.right:
            continue
        if lit not in kept:
            kept.append(lit)
    return kept


def _dedupe(items: List[Carrier]) -> List[Carrier]:
    unique: List[Carrier] = []
    for item in items:
        if item not in unique:
            unique.append(item)
    return unique


def eliminate_equalities_rule(rule: Rule) -> List[Rule]:
    """Equality-free rules whose union is equivalent to rule"""
    rules = _dedupe(_eliminate(rule))
    logger.debug("equalities_eliminated", rule=str(rule), produced=len(rules))
    return rules


def eliminate_equalities_jaegd(j: Jaegd) -> List[Jaegd]:
    return _dedupe(_eliminate(j))


def eliminate_equalities_program(program: Program) -> Program:
    rules: List[Rule] = []
    for rule in program.rules:
        rules.extend(eliminate_equalities_rule(rule))
    return program.with_rules(_dedupe(rules))
