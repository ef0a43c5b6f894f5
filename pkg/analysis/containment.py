"""
Containment of positive nonrecursive rules over flat and proper flat instances

Over flat instances a rule is the union of its variants: each path variable
is expanded into a fixed-length run of atomic variables. r1 is contained in
P2 iff for every variant of r1 with chosen lengths up to m+1 (m the number
of atomic variables of P2) some rule of P2 maps its body into the variant
body and its head onto the variant head. The check evaluates the rules of
P2 on the frozen variant body.
"""

from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Set, Tuple

import structlog

from analysis.unfolding import unfold_program
from chase.dependencies import delta_for_all
from chase.morphisms import freeze_body, freeze_items, freeze_term
from chase.procedure import chase_rule
from engine.evaluator import Evaluator
from language.dependencies import is_recursive
from language.desugar import desugar, desugar_rule
from models.errors import CyclicEquality, PreconditionFailed
from models.program import (
    Const,
    Predicate,
    Program,
    Rule,
    Var,
    constants_of,
    contains_pack,
    item_variables,
    rule_variables,
    substitute_rule,
    term_variables,
)
from models.terms import Fact, Instance, fact_order
from models.validation import ContainmentKind, ContainmentVerdict, ContainmentWitness
from unification.elimination import eliminate_equalities_program, eliminate_equalities_rule

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class Variant:
    base: Rule
    chosen_lengths: Tuple[Tuple[Var, int], ...]
    rule: Rule

    def lengths(self) -> Dict[str, int]:
        return {str(var): n for var, n in self.chosen_lengths}


def path_variables(rule: Rule) -> List[Var]:
    """Path variables by first occurrence, body before head"""
    seen: List[Var] = []
    atoms = [lit.atom for lit in rule.body] + [rule.head]
    for atom in atoms:
        for var in _atom_items(atom):
            if var.sort == Var.PATH and var not in seen:
                seen.append(var)
    return seen


def _atom_items(atom):
    if isinstance(atom, Predicate):
        return item_variables(atom.path)
    return list(item_variables(atom.left)) + list(item_variables(atom.right))


def _indexed(name: str, index: int, used: Set[str]) -> str:
    prefix = name
    candidate = f"{prefix}{index}"
    while candidate in used:
        prefix += "_"
        candidate = f"{prefix}{index}"
    used.add(candidate)
    return candidate


def make_variant(rule: Rule, lengths: Dict[Var, int]) -> Variant:
    used = {v.name for v in rule_variables(rule) if v.sort == Var.ATOMIC}
    mapping = {}
    for var, n in lengths.items():
        mapping[var] = tuple(Var(_indexed(var.name, i, used), Var.ATOMIC) for i in range(1, n + 1))
    chosen = tuple(lengths.items())
    return Variant(rule, chosen, substitute_rule(rule, mapping))


def enumerate_variants(rule: Rule, max_len: int) -> List[Variant]:
    """All variants with chosen lengths in 1..max_len"""
    variables = path_variables(rule)
    variants = []
    for lengths in product(range(1, max_len + 1), repeat=len(variables)):
        variants.append(make_variant(rule, dict(zip(variables, lengths))))
    return variants


def atomic_variable_count(rules) -> int:
    total = 0
    for rule in rules:
        total += len({v for v in rule_variables(rule) if v.sort == Var.ATOMIC})
    return total


# ---------------------------------------------------------------------------
# Variant checks

def _frozen_head(rule: Rule) -> Fact:
    head = rule.head
    return Fact(head.relation, freeze_items(head.path), freeze_term(head.term))


def _frozen_body(rule: Rule) -> Instance:
    return Instance(freeze_body(rule.positive_predicates()))


def covers(rules, variant: Variant, evaluator: Optional[Evaluator] = None) -> bool:
    """Some rule maps its body into the variant body and its head onto the variant head"""
    evaluator = evaluator or Evaluator()
    instance = _frozen_body(variant.rule)
    target = _frozen_head(variant.rule)
    for rule in rules:
        if rule.head.relation != target.relation:
            continue
        if target in evaluator.eval_rule(rule, instance):
            return True
    return False


def _minimize(rules, variant: Variant, evaluator: Evaluator) -> Variant:
    lengths = dict(variant.chosen_lengths)
    for var in list(lengths):
        while lengths[var] > 1:
            trial = dict(lengths)
            trial[var] -= 1
            candidate = make_variant(variant.base, trial)
            if covers(rules, candidate, evaluator):
                break
            lengths = trial
    return make_variant(variant.base, lengths)


def counterexample(variant: Variant, others) -> Tuple[Instance, Fact]:
    """The variant body with its variables replaced by distinct fresh keys"""
    used = constants_of([variant.rule]) | constants_of(others)
    keys: Dict[Var, Const] = {}
    counter = 0
    for atom in list(variant.rule.positive_predicates()) + [variant.rule.head]:
        for var in list(item_variables(atom.path)) + list(term_variables(atom.term)):
            if var in keys:
                continue
            counter += 1
            while f"k{counter}" in used:
                counter += 1
            keys[var] = Const(f"k{counter}")
    ground = substitute_rule(variant.rule, keys)
    instance = Instance(freeze_body(ground.positive_predicates()))
    return instance, _frozen_head(ground)


def _witness(variant: Variant, rules) -> ContainmentWitness:
    instance, missing = counterexample(variant, rules)
    return ContainmentWitness(
        rule=str(variant.base),
        chosen_lengths=variant.lengths(),
        variant=str(variant.rule),
        counterexample=[str(f) for f in sorted(instance.facts(), key=fact_order)],
        missing_fact=str(missing),
    )


# ---------------------------------------------------------------------------
# Preconditions

def _check_flat(rules, label: str) -> List[str]:
    reasons = []
    for rule in rules:
        for pred in rule.positive_predicates():
            if contains_pack(pred.path):
                reasons.append(f"{label} body uses packing: {rule}")
                break
    return reasons


def _normalize_right(p2: Program) -> Program:
    p2 = desugar(p2)
    reasons = [f"right program uses negation: {r}" for r in p2.rules if not r.is_positive]
    if is_recursive(p2):
        reasons.append("right program is recursive")
    if reasons:
        raise PreconditionFailed(reasons)
    flat = eliminate_equalities_program(unfold_program(p2))
    reasons = _check_flat(flat.rules, "right")
    if reasons:
        raise PreconditionFailed(reasons)
    return flat


def _normalize_left(r1: Rule) -> List[Rule]:
    rules: List[Rule] = []
    for plain in desugar_rule(r1):
        if not plain.is_positive:
            raise PreconditionFailed([f"left rule uses negation: {plain}"])
        for rule in eliminate_equalities_rule(plain):
            if rule not in rules:
                rules.append(rule)
    reasons = _check_flat(rules, "left")
    if reasons:
        raise PreconditionFailed(reasons)
    return rules


def _failed(e: Exception) -> ContainmentVerdict:
    reasons = getattr(e, "reasons", None) or [str(e)]
    for reason in reasons:
        logger.warning("containment_unsupported", reason=reason)
    return ContainmentVerdict(kind=ContainmentKind.PRECONDITION_FAILED, reasons=reasons)


# ---------------------------------------------------------------------------
# Decisions

def _decide_rules(left: List[Rule], right: Program, extra_lengths: int, label: str) -> ContainmentVerdict:
    evaluator = Evaluator()
    for rule in left:
        candidates = right.rules_for(rule.head.relation)
        max_len = atomic_variable_count(right.rules) + 1 + extra_lengths
        for variant in enumerate_variants(rule, max_len):
            if covers(candidates, variant, evaluator):
                continue
            smallest = _minimize(candidates, variant, evaluator)
            logger.info("containment_refuted", rule=str(rule), lengths=smallest.lengths())
            return ContainmentVerdict(
                kind=ContainmentKind.NOT_CONTAINED, rule=label, witness=_witness(smallest, right.rules)
            )
    return ContainmentVerdict(kind=ContainmentKind.CONTAINED, rule=label)


def decide_containment_flat(r1: Rule, p2: Program, extra_lengths: int = 0) -> ContainmentVerdict:
    """Is r1 contained in P2 on every flat instance"""
    try:
        right = _normalize_right(p2)
        left = _normalize_left(r1)
    except (PreconditionFailed, CyclicEquality) as e:
        return _failed(e)
    return _decide_rules(left, right, extra_lengths, str(r1))


def decide_containment_proper_flat(r1: Rule, p2: Program, extra_lengths: int = 0) -> ContainmentVerdict:
    """
    Is r1 contained in P2 on every proper flat instance. r1 is chased with
    the properness jaegds of its input relations first; a failing chase
    means r1 never fires on proper instances.
    """
    try:
        right = _normalize_right(p2)
        left = _normalize_left(r1)
    except (PreconditionFailed, CyclicEquality) as e:
        return _failed(e)

    inputs = set(right.input_names)
    for rule in left:
        inputs |= {p.relation for p in rule.positive_predicates()}
    delta = delta_for_all(inputs)

    chased: List[Rule] = []
    for rule in left:
        failed, result = chase_rule(rule, delta)
        if not failed:
            chased.append(result)
    if not chased:
        return ContainmentVerdict(kind=ContainmentKind.CONTAINED, rule=str(r1), chase_failed=True)
    return _decide_rules(chased, right, extra_lengths, str(r1))


def decide_program_containment(
    p1: Program, p2: Program, proper: bool = False, extra_lengths: int = 0
) -> Dict[str, ContainmentVerdict]:
    """Per output relation of P1: is it contained in the same relation of P2"""
    decide = decide_containment_proper_flat if proper else decide_containment_flat
    try:
        left = unfold_program(p1)
    except PreconditionFailed as e:
        return {name: _failed(e) for name in sorted(p1.output_names)}

    verdicts: Dict[str, ContainmentVerdict] = {}
    for relation in sorted(left.output_names):
        verdict = ContainmentVerdict(kind=ContainmentKind.CONTAINED, rule=None)
        for rule in left.rules_for(relation):
            verdict = decide(rule, p2, extra_lengths)
            if not verdict.contained:
                break
        verdicts[relation] = verdict
    return verdicts
