"""
Program AST: key/path expressions, predicates, equalities, rules, programs, jaegds
"""

import json
import re
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Iterator, Mapping, Optional, Set, Tuple, Union

from models.terms import EmptyObject

KEYWORDS = frozenset({"not", "input", "output", "false"})
_BARE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_\-]*\Z")


def format_symbol(symbol: str) -> str:
    """Bare token when the grammar allows it, JSON string otherwise"""
    if _BARE.match(symbol) and symbol not in KEYWORDS:
        return symbol
    return json.dumps(symbol, ensure_ascii=False)


@dataclass(frozen=True, slots=True)
class Const:
    symbol: str

    def __str__(self) -> str:
        return format_symbol(self.symbol)


@dataclass(frozen=True, slots=True)
class Var:
    """
    A variable. Sorts: atomic (@x), path ($x), and the sugar sorts value
    (%x), optional path (?x) and key (#x). Variables of different sorts are
    different even when their names coincide.
    """
    name: str
    sort: str

    ATOMIC = "atomic"
    PATH = "path"
    VALUE = "value"
    OPTIONAL = "optional"
    KEY = "key"

    @property
    def is_sugar(self) -> bool:
        return self.sort in (Var.VALUE, Var.OPTIONAL, Var.KEY)

    def __str__(self) -> str:
        return SIGILS[self.sort] + self.name


SIGILS = {
    Var.ATOMIC: "@",
    Var.PATH: "$",
    Var.VALUE: "%",
    Var.OPTIONAL: "?",
    Var.KEY: "#",
}


@dataclass(frozen=True, slots=True)
class PackExpr:
    """<e>"""
    items: Tuple["Item", ...]

    def __str__(self) -> str:
        return "<" + format_items(self.items) + ">"


Item = Union[Const, Var, PackExpr, EmptyObject]
PathExpr = Tuple[Item, ...]
Term = Union[Const, Var, EmptyObject]


def format_items(items: Iterable[Item]) -> str:
    return ".".join(str(i) for i in items)


@dataclass(frozen=True, slots=True)
class Predicate:
    relation: str
    path: PathExpr
    term: Term

    def __str__(self) -> str:
        return f"{self.relation}({format_items(self.path)}:{self.term})"


@dataclass(frozen=True, slots=True)
class Equality:
    left: PathExpr
    right: PathExpr

    def __str__(self) -> str:
        return f"{format_items(self.left)} = {format_items(self.right)}"


Atom = Union[Predicate, Equality]


@dataclass(frozen=True, slots=True)
class Literal:
    atom: Atom
    positive: bool = True

    @property
    def is_predicate(self) -> bool:
        return isinstance(self.atom, Predicate)

    @property
    def is_equality(self) -> bool:
        return isinstance(self.atom, Equality)

    def __str__(self) -> str:
        if self.positive:
            return str(self.atom)
        if isinstance(self.atom, Equality):
            return f"{format_items(self.atom.left)} != {format_items(self.atom.right)}"
        return f"not {self.atom}"


@dataclass(frozen=True)
class Span:
    line: int
    column: int


@dataclass(frozen=True)
class Rule:
    """H :- B."""
    head: Predicate
    body: Tuple[Literal, ...] = ()
    span: Optional[Span] = field(default=None, compare=False, hash=False)

    def positive_predicates(self) -> Iterator[Predicate]:
        for lit in self.body:
            if lit.positive and lit.is_predicate:
                yield lit.atom

    def equalities(self, positive: bool = True) -> Iterator[Equality]:
        for lit in self.body:
            if lit.positive == positive and lit.is_equality:
                yield lit.atom

    @property
    def is_positive(self) -> bool:
        return all(lit.positive for lit in self.body)

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head} :- ."
        return f"{self.head} :- " + ", ".join(str(l) for l in self.body) + "."


@dataclass(frozen=True)
class Jaegd:
    """
    B -> t1 = t2, or B -> false when consequent is None.

    The body holds positive predicates and, before elimination, positive
    equalities.
    """
    body: Tuple[Literal, ...]
    consequent: Optional[Tuple[Term, Term]] = None
    span: Optional[Span] = field(default=None, compare=False, hash=False)

    @property
    def is_denial(self) -> bool:
        return self.consequent is None

    def predicates(self) -> Tuple[Predicate, ...]:
        return tuple(lit.atom for lit in self.body if lit.is_predicate)

    def equalities(self) -> Tuple[Equality, ...]:
        return tuple(lit.atom for lit in self.body if lit.is_equality)

    def __str__(self) -> str:
        body = ", ".join(str(l) for l in self.body)
        if self.consequent is None:
            return f"{body} -> false."
        return f"{body} -> {self.consequent[0]} = {self.consequent[1]}."


@dataclass(frozen=True)
class Program:
    rules: Tuple[Rule, ...] = ()
    vocab_in: Optional[FrozenSet[str]] = None
    vocab_out: Optional[FrozenSet[str]] = None

    @property
    def idb(self) -> FrozenSet[str]:
        return frozenset(r.head.relation for r in self.rules)

    @property
    def edb(self) -> FrozenSet[str]:
        used = set()
        for rule in self.rules:
            for lit in rule.body:
                if lit.is_predicate:
                    used.add(lit.atom.relation)
        return frozenset(used - self.idb)

    @property
    def input_names(self) -> FrozenSet[str]:
        return self.vocab_in if self.vocab_in is not None else self.edb

    @property
    def output_names(self) -> FrozenSet[str]:
        return self.vocab_out if self.vocab_out is not None else self.idb

    def rules_for(self, relation: str) -> Tuple[Rule, ...]:
        return tuple(r for r in self.rules if r.head.relation == relation)

    def with_rules(self, rules: Iterable[Rule]) -> "Program":
        return Program(tuple(rules), self.vocab_in, self.vocab_out)

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rules)


# ---------------------------------------------------------------------------
# Variables and substitution

def item_variables(items: Iterable[Item]) -> Iterator[Var]:
    """Variable occurrences in order, nested packs included"""
    for item in items:
        if isinstance(item, Var):
            yield item
        elif isinstance(item, PackExpr):
            yield from item_variables(item.items)


def term_variables(term: Term) -> Iterator[Var]:
    if isinstance(term, Var):
        yield term


def atom_variables(atom: Atom) -> Iterator[Var]:
    if isinstance(atom, Predicate):
        yield from item_variables(atom.path)
        yield from term_variables(atom.term)
    else:
        yield from item_variables(atom.left)
        yield from item_variables(atom.right)


def literal_variables(literals: Iterable[Literal]) -> Set[Var]:
    found: Set[Var] = set()
    for lit in literals:
        found.update(atom_variables(lit.atom))
    return found


def rule_variables(rule: Rule) -> Set[Var]:
    found = set(atom_variables(rule.head))
    found |= literal_variables(rule.body)
    return found


def jaegd_variables(j: Jaegd) -> Set[Var]:
    found = literal_variables(j.body)
    if j.consequent:
        for term in j.consequent:
            found.update(term_variables(term))
    return found


# A mapping sends atomic variables to one atomic key expression and path
# variables to a tuple of items.
VariableMapping = Mapping[Var, Union[Item, PathExpr]]


def substitute_items(items: PathExpr, mapping: VariableMapping) -> PathExpr:
    out = []
    for item in items:
        if isinstance(item, Var) and item in mapping:
            image = mapping[item]
            if isinstance(image, tuple):
                out.extend(image)
            else:
                out.append(image)
        elif isinstance(item, PackExpr):
            out.append(PackExpr(substitute_items(item.items, mapping)))
        else:
            out.append(item)
    return tuple(out)


def substitute_term(term: Term, mapping: VariableMapping) -> Term:
    if isinstance(term, Var) and term in mapping:
        image = mapping[term]
        if isinstance(image, tuple):
            if len(image) != 1:
                raise ValueError(f"Cannot place a path in the value position of {term}")
            image = image[0]
        return image
    return term


def substitute_atom(atom: Atom, mapping: VariableMapping) -> Atom:
    if isinstance(atom, Predicate):
        return Predicate(
            atom.relation,
            substitute_items(atom.path, mapping),
            substitute_term(atom.term, mapping),
        )
    return Equality(substitute_items(atom.left, mapping), substitute_items(atom.right, mapping))


def substitute_literal(lit: Literal, mapping: VariableMapping) -> Literal:
    return Literal(substitute_atom(lit.atom, mapping), lit.positive)


def substitute_rule(rule: Rule, mapping: VariableMapping) -> Rule:
    return Rule(
        substitute_atom(rule.head, mapping),
        tuple(substitute_literal(l, mapping) for l in rule.body),
        rule.span,
    )


def substitute_jaegd(j: Jaegd, mapping: VariableMapping) -> Jaegd:
    consequent = None
    if j.consequent is not None:
        consequent = tuple(substitute_term(t, mapping) for t in j.consequent)
    return Jaegd(tuple(substitute_literal(l, mapping) for l in j.body), consequent, j.span)


def contains_pack(items: Iterable[Item]) -> bool:
    return any(isinstance(i, PackExpr) for i in items)


def constants_of(rules: Iterable[Rule]) -> Set[str]:
    """Symbols written as constants anywhere in the rules, packed expressions included"""
    found: Set[str] = set()

    def collect(items: Iterable[Item]) -> None:
        for item in items:
            if isinstance(item, Const):
                found.add(item.symbol)
            elif isinstance(item, PackExpr):
                collect(item.items)

    for rule in rules:
        for atom in [rule.head] + [lit.atom for lit in rule.body]:
            if isinstance(atom, Predicate):
                collect(atom.path)
                collect((atom.term,))
            else:
                collect(atom.left)
                collect(atom.right)
    return found
