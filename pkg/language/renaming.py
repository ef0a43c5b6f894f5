"""
Variable renaming and fresh-name supply
"""

from typing import Iterable, Set

from models.program import Jaegd, Rule, Var, jaegd_variables, rule_variables, substitute_rule


class FreshNames:
    """
    Yields `prefix1`, `prefix2`, ... skipping names in use.

    Names are shared across sorts, so a fresh atomic variable never looks
    like an existing path variable.
    """

    def __init__(self, used: Iterable[str] = (), prefix: str = "u"):
        self.used: Set[str] = set(used)
        self.prefix = prefix
        self.counter = 0

    def name(self) -> str:
        while True:
            self.counter += 1
            candidate = f"{self.prefix}{self.counter}"
            if candidate not in self.used:
                self.used.add(candidate)
                return candidate

    def var(self, sort: str) -> Var:
        return Var(self.name(), sort)

    def reserve(self, names: Iterable[str]):
        self.used.update(names)


def variable_names(source) -> Set[str]:
    if isinstance(source, Jaegd):
        return {v.name for v in jaegd_variables(source)}
    return {v.name for v in rule_variables(source)}


def rename_apart(rule: Rule, salt) -> Rule:
    """Variable-disjoint copy: every variable x becomes x__salt"""
    renaming = {v: Var(f"{v.name}__{salt}", v.sort) for v in rule_variables(rule)}
    return substitute_rule(rule, renaming)
