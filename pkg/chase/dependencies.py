"""
The properness jaegds and finite-instance satisfaction
"""

from typing import List, Optional

from engine.evaluator import Evaluator
from engine.matching import Valuation, instantiate_term
from language.parser import parse_jaegds
from models.program import Jaegd
from models.terms import Instance

_DELTA = """
{R}($x:@i), {R}($x:@j) -> @i = @j.
{R}($x:{{}}), {R}($x:@i) -> false.
{R}($x:@i), {R}($x.$y:{{}}) -> false.
{R}($x:@i), {R}($x.$y:@j) -> false.
{R}($x:{{}}), {R}($x.$y:{{}}) -> false.
{R}($x:{{}}), {R}($x.$y:@j) -> false.
"""


def delta_for(relation: str) -> List[Jaegd]:
    """
    Jaegds expressing that a relation holds a proper description: the first
    is the path-to-value dependency, the other five forbid a path having two
    kinds of values or being a proper prefix of another path.
    """
    return parse_jaegds(_DELTA.format(R=relation))


def delta_for_all(relations) -> List[Jaegd]:
    jaegds: List[Jaegd] = []
    for name in sorted(relations):
        jaegds.extend(delta_for(name))
    return jaegds


def violation(instance: Instance, j: Jaegd) -> Optional[Valuation]:
    """A matching of the body that falsifies the consequent, or None"""
    relations = {name: set(pairs) for name, pairs in instance.relations.items()}
    for binding in Evaluator().valuations(j.body, relations):
        if j.consequent is None:
            return binding
        left, right = j.consequent
        if instantiate_term(left, binding) != instantiate_term(right, binding):
            return binding
    return None


def satisfies(instance: Instance, j: Jaegd) -> bool:
    return violation(instance, j) is None


def satisfies_all(instance: Instance, jaegds) -> bool:
    return all(satisfies(instance, j) for j in jaegds)
