"""
Rewriting a program so that every derived relation stays proper

Each pair p:v is stored as the two-key path <p>.<v> with value {}, and
p:{} as <p>.<b.b>:{}. Such relations are proper whatever pairs they hold.
Input relations are encoded by two extra rules, every atom is rewritten to
its encoded relation, and output relations are decoded at the end.
"""

from typing import Dict, Iterable, List

import structlog

from language.desugar import desugar
from models.program import Const, Literal, PackExpr, Predicate, Program, Rule, Var
from models.terms import EMPTY

logger = structlog.get_logger(__name__)


def primed_names(names: Iterable[str], taken: Iterable[str]) -> Dict[str, str]:
    """R -> R', adding primes until the name is free"""
    used = set(taken)
    mapping: Dict[str, str] = {}
    for name in sorted(names):
        candidate = name + "'"
        while candidate in used:
            candidate += "'"
        used.add(candidate)
        mapping[name] = candidate
    return mapping


class Properizer:
    """Builds the encoded program for one marker symbol"""

    def __init__(self, marker: str = "b"):
        self.marker = Const(marker)

    def _value_key(self, term) -> PackExpr:
        if term is EMPTY:
            return PackExpr((self.marker, self.marker))
        return PackExpr((term,))

    def encode_atom(self, pred: Predicate, name: str) -> Predicate:
        return Predicate(name, (PackExpr(pred.path), self._value_key(pred.term)), EMPTY)

    def encode_rule(self, rule: Rule, names: Dict[str, str], inputs: Iterable[str] = ()) -> Rule:
        """Negated input atoms are left on the input relation itself"""
        inputs = set(inputs)
        head = self.encode_atom(rule.head, names[rule.head.relation])
        body = []
        for lit in rule.body:
            if lit.is_predicate and not lit.positive and lit.atom.relation in inputs:
                body.append(lit)
            elif lit.is_predicate:
                body.append(Literal(self.encode_atom(lit.atom, names[lit.atom.relation]), lit.positive))
            else:
                body.append(lit)
        return Rule(head, tuple(body), rule.span)

    def _pair_rules(self, source: str, target: str) -> List[Rule]:
        """target(<$x>.<@u>:{}) :- source($x:@u) and target(<$x>.<b.b>:{}) :- source($x:{})"""
        x, u = Var("x", Var.PATH), Var("u", Var.ATOMIC)
        return [
            Rule(
                self.encode_atom(Predicate(source, (x,), u), target),
                (Literal(Predicate(source, (x,), u)),),
            ),
            Rule(
                self.encode_atom(Predicate(source, (x,), EMPTY), target),
                (Literal(Predicate(source, (x,), EMPTY)),),
            ),
        ]

    def encoding_rules(self, relation: str, encoded: str) -> List[Rule]:
        return self._pair_rules(relation, encoded)

    def decoding_rules(self, relation: str, encoded: str) -> List[Rule]:
        rules = []
        for rule in self._pair_rules(relation, encoded):
            rules.append(Rule(rule.body[0].atom, (Literal(rule.head),)))
        return rules

    def transform(self, program: Program) -> Program:
        program = desugar(program)
        inputs = sorted(program.input_names)
        relations = set(inputs) | program.idb | program.edb
        names = primed_names(relations, relations)

        rules: List[Rule] = []
        for relation in inputs:
            rules.extend(self.encoding_rules(relation, names[relation]))
        for rule in program.rules:
            rules.append(self.encode_rule(rule, names, inputs))
        for relation in sorted(program.output_names):
            rules.extend(self.decoding_rules(relation, names[relation]))

        logger.debug("program_properized", rules=len(rules), relations=len(names))
        return Program(tuple(rules), frozenset(inputs), frozenset(program.output_names))


def properize_intermediates(program: Program, marker: str = "b") -> Program:
    """Equivalent program whose derived relations hold proper descriptions on proper inputs"""
    return Properizer(marker).transform(program)
