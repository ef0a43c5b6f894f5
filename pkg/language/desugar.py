"""
Desugaring of value (%x), optional-path (?x) and key (#x) variables

Every sugar variable splits a rule in two copies:

    %u  ->  @u        | {}
    ?z  ->  $z        | (deleted)
    #z  ->  @z        | <$z>

Value variables are split first, then optional paths, then keys. Equalities
whose sides became {} or empty are decided on the spot: {} only equals {},
and an empty sequence only equals an empty sequence.
"""

from typing import Iterator, List, Optional, Set

import structlog

from models.errors import IllegalSugar
from models.program import (
    PackExpr,
    PathExpr,
    Predicate,
    Program,
    Rule,
    Var,
    item_variables,
    rule_variables,
    substitute_rule,
)
from models.terms import EMPTY

logger = structlog.get_logger(__name__)

_SPLIT_ORDER = (Var.VALUE, Var.OPTIONAL, Var.KEY)


def desugar(program: Program) -> Program:
    """Expand every rule; rules without sugar only lose decided {} equalities"""
    rules: List[Rule] = []
    for rule in program.rules:
        rules.extend(desugar_rule(rule))
    logger.debug("program_desugared", before=len(program.rules), after=len(rules))
    return program.with_rules(rules)


def desugar_rule(rule: Rule) -> List[Rule]:
    _check_sugar_positions(rule)
    sugar = _sugar_variables(rule)
    if not sugar:
        simplified = _resolve(rule)
        return [] if simplified is None else [simplified]

    used = {v.name for v in rule_variables(rule) if not v.is_sugar}
    copies = [rule]
    for var in sugar:
        plain_name = _plain_name(var.name, used)
        used.add(plain_name)
        expanded = []
        for copy in copies:
            for mapping in _branches(var, plain_name):
                expanded.append(substitute_rule(copy, mapping))
        copies = expanded

    resolved = []
    for copy in copies:
        simplified = _resolve(copy)
        if simplified is not None and simplified not in resolved:
            resolved.append(simplified)
    return resolved


def _branches(var: Var, plain_name: str):
    if var.sort == Var.VALUE:
        return ({var: Var(plain_name, Var.ATOMIC)}, {var: EMPTY})
    if var.sort == Var.OPTIONAL:
        return ({var: (Var(plain_name, Var.PATH),)}, {var: ()})
    return (
        {var: Var(plain_name, Var.ATOMIC)},
        {var: PackExpr((Var(plain_name, Var.PATH),))},
    )


def _plain_name(name: str, used: Set[str]) -> str:
    if name not in used:
        return name
    suffix = 1
    while f"{name}_{suffix}" in used:
        suffix += 1
    return f"{name}_{suffix}"


def _sugar_variables(rule: Rule) -> List[Var]:
    seen: List[Var] = []
    occurrences = list(_all_variables(rule))
    for sort in _SPLIT_ORDER:
        for var in occurrences:
            if var.sort == sort and var not in seen:
                seen.append(var)
    return seen


def _all_variables(rule: Rule) -> Iterator[Var]:
    for atom in [rule.head] + [lit.atom for lit in rule.body]:
        if isinstance(atom, Predicate):
            yield from item_variables(atom.path)
            if isinstance(atom.term, Var):
                yield atom.term
        else:
            yield from item_variables(atom.left)
            yield from item_variables(atom.right)


# ---------------------------------------------------------------------------
# Position checks

def _check_sugar_positions(rule: Rule):
    _check_path(rule.head.path, "head")
    for lit in rule.body:
        atom = lit.atom
        if isinstance(atom, Predicate):
            _check_path(atom.path, atom.relation)
        else:
            for side in (atom.left, atom.right):
                if len(side) == 1 and (
                    (isinstance(side[0], Var) and side[0].sort == Var.VALUE) or side[0] is EMPTY
                ):
                    continue
                _check_path(side, "equality", allow_all_optional=True)
            if _only_optional(atom.left) and _only_optional(atom.right):
                raise IllegalSugar(
                    f"Both sides of {atom} may be empty; optional variables must be "
                    "concatenated with other path expressions"
                )


def _check_path(items: PathExpr, where: str, allow_all_optional: bool = False):
    if not allow_all_optional and _only_optional(items):
        raise IllegalSugar(
            f"Path in {where} consists only of optional variables; optional variables "
            "must be concatenated with other path expressions"
        )
    for item in items:
        if item is EMPTY:
            raise IllegalSugar(f"{{}} cannot be part of a path ({where})")
        if isinstance(item, Var) and item.sort == Var.VALUE:
            raise IllegalSugar(f"Value variable {item} used inside a path ({where})")
        if isinstance(item, PackExpr):
            _check_path(item.items, f"packed key in {where}")


def _only_optional(items: PathExpr) -> bool:
    return all(isinstance(i, Var) and i.sort == Var.OPTIONAL for i in items)


# ---------------------------------------------------------------------------
# Resolution of literals touched by {} or by deleted optional variables

def _resolve(rule: Rule) -> Optional[Rule]:
    """Simplify decided literals; None when the copy can never fire"""
    body = []
    for lit in rule.body:
        decided = _decide(lit.atom)
        if decided is None:
            body.append(lit)
            continue
        holds = decided if lit.positive else not decided
        if not holds:
            return None
    return Rule(rule.head, tuple(body), rule.span)


def _decide(atom) -> Optional[bool]:
    if isinstance(atom, Predicate):
        return None
    left, right = atom.left, atom.right
    left_empty_obj = left == (EMPTY,)
    right_empty_obj = right == (EMPTY,)
    if left_empty_obj or right_empty_obj:
        return left_empty_obj and right_empty_obj
    if not left or not right:
        return not left and not right
    return None
