"""
Limited variables and rule safety
"""

from dataclasses import dataclass
from typing import FrozenSet, List, Set, Tuple

from models.errors import UnsafeRule
from models.program import Equality, Literal, Rule, item_variables, literal_variables, rule_variables


@dataclass(frozen=True)
class LimitationStep:
    """Variables that became limited because one side of an equality was"""
    equality: Equality
    bound_side: int
    variables: FrozenSet


class SafetyReport:
    """Outcome of a safety check"""

    def __init__(self, rule: Rule, unlimited: List = None):
        self.rule = rule
        self.unlimited = unlimited or []

    @property
    def is_safe(self) -> bool:
        return not self.unlimited

    def __bool__(self):
        return self.is_safe

    @property
    def errors(self) -> List[str]:
        return [f"variable {v} is not limited" for v in self.unlimited]


def limitation_steps(body: Tuple[Literal, ...]) -> Tuple[Set, List[LimitationStep]]:
    """
    Least fixpoint of limitedness.

    Variables of positive predicates are limited; a positive equality with one
    fully limited side limits the variables of its other side. Returns the
    seed set and the propagation steps in the order they fired.
    """
    seed: Set = set()
    for lit in body:
        if lit.positive and lit.is_predicate:
            seed |= literal_variables([lit])
    limited = set(seed)
    steps: List[LimitationStep] = []
    equalities = [lit.atom for lit in body if lit.positive and lit.is_equality]
    changed = True
    while changed:
        changed = False
        for eq in equalities:
            sides = (set(item_variables(eq.left)), set(item_variables(eq.right)))
            for index in (0, 1):
                other = sides[1 - index]
                if sides[index] <= limited and not other <= limited:
                    fresh = frozenset(other - limited)
                    limited |= fresh
                    steps.append(LimitationStep(eq, index, fresh))
                    changed = True
    return seed, steps


def limited_variables(body: Tuple[Literal, ...]) -> Set:
    seed, steps = limitation_steps(body)
    for step in steps:
        seed |= step.variables
    return seed


def check_safety(rule: Rule) -> SafetyReport:
    limited = limited_variables(rule.body)
    unlimited = sorted(rule_variables(rule) - limited, key=lambda v: (v.sort, v.name))
    return SafetyReport(rule, unlimited)


def ensure_safe(rule: Rule):
    report = check_safety(rule)
    if not report:
        raise UnsafeRule(f"Unsafe rule {rule}: " + "; ".join(report.errors), report.unlimited)
