"""
The jaegd chase and implication decision

A chase step picks a dependency C -> u = v and a homomorphism h from C into
the current body with h(u) != h(v). Two distinct keys make the chase fail; a
key and a variable substitute the key for the variable; two variables
substitute h(u) for h(v). A denial C -> false fails on any homomorphism.
Steps are tried in dependency order, and within a dependency in canonical
homomorphism order.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import structlog

from chase.morphisms import (
    VariableMapping,
    apply_to_term,
    find_homomorphisms,
    find_weak_morphisms,
    is_variable_mapping,
)
from models.program import (
    Const,
    Jaegd,
    Literal,
    Predicate,
    Rule,
    Term,
    Var,
    substitute_jaegd,
    substitute_rule,
)
from models.validation import ChaseKind, ImplicationKind, ImplicationVerdict
from unification.mgu import format_image

logger = structlog.get_logger(__name__)


@dataclass
class ChaseOutcome:
    failed: bool
    result: Optional[Jaegd] = None
    steps: int = 0
    substitutions: List[Tuple[Var, Term]] = field(default_factory=list)

    @property
    def kind(self) -> ChaseKind:
        return ChaseKind.FAILED if self.failed else ChaseKind.SUCCEEDED

    @property
    def trivial_consequent(self) -> bool:
        if self.failed or self.result is None or self.result.consequent is None:
            return False
        left, right = self.result.consequent
        return left == right


def _body_predicates(body: Sequence[Literal]) -> List[Predicate]:
    preds = []
    for lit in body:
        if not lit.positive or not lit.is_predicate:
            raise ValueError(f"The chase works on equality-free positive bodies, found {lit}")
        preds.append(lit.atom)
    return preds


def _next_step(body: Sequence[Literal], sigma_deps: Sequence[Jaegd]):
    """(failed, substitution) for the first applicable step, or None"""
    target = _body_predicates(body)
    for dependency in sigma_deps:
        for h in find_homomorphisms(dependency.body, target):
            if dependency.is_denial:
                return True, None
            u = apply_to_term(dependency.consequent[0], h)
            v = apply_to_term(dependency.consequent[1], h)
            if u == v:
                continue
            if isinstance(u, Const) and isinstance(v, Const):
                return True, None
            if isinstance(v, Const):
                return False, (u, v)
            return False, (v, u)
    return None


def _unique(body) -> Tuple[Literal, ...]:
    return tuple(dict.fromkeys(body))


def _run(body: Tuple[Literal, ...], sigma_deps: Sequence[Jaegd], apply):
    """Chase body; apply(mapping) rewrites the carrier and returns its new body"""
    substitutions: List[Tuple[Var, Term]] = []
    steps = 0
    while True:
        step = _next_step(body, sigma_deps)
        if step is None:
            return False, substitutions, steps
        steps += 1
        failed, substitution = step
        if failed:
            logger.debug("chase_failed", steps=steps)
            return True, substitutions, steps
        var, image = substitution
        substitutions.append((var, image))
        body = apply({var: image})
        logger.debug("chase_step", step=steps, variable=str(var), image=str(image))


def chase(sigma: Jaegd, sigma_deps: Sequence[Jaegd]) -> ChaseOutcome:
    """Chase sigma with the dependencies until failure or no step applies"""
    current = [sigma]

    def apply(mapping):
        j = substitute_jaegd(current[0], mapping)
        current[0] = Jaegd(_unique(j.body), j.consequent, j.span)
        return current[0].body

    failed, substitutions, steps = _run(sigma.body, sigma_deps, apply)
    if failed:
        return ChaseOutcome(True, None, steps, substitutions)
    return ChaseOutcome(False, current[0], steps, substitutions)


def chase_rule(rule: Rule, sigma_deps: Sequence[Jaegd]) -> Tuple[bool, Optional[Rule]]:
    """Chase a rule's body; substitutions also rewrite the head"""
    current = [rule]

    def apply(mapping):
        r = substitute_rule(current[0], mapping)
        current[0] = Rule(r.head, _unique(r.body), r.span)
        return current[0].body

    failed, _, _ = _run(rule.body, sigma_deps, apply)
    return (True, None) if failed else (False, current[0])


def ambiguity_witness(body: Sequence[Literal], sigma_deps: Sequence[Jaegd]) -> Optional[VariableMapping]:
    """A weak morphism from some dependency body into body that is not a variable mapping"""
    target = _body_predicates(body)
    for dependency in sigma_deps:
        for mapping in find_weak_morphisms(dependency.body, target):
            if not is_variable_mapping(mapping):
                return mapping
    return None


def is_unambiguous(sigma: Jaegd, sigma_deps: Sequence[Jaegd], outcome: Optional[ChaseOutcome] = None):
    """(True, None) or (False, witness), judged on the chased body"""
    outcome = outcome or chase(sigma, sigma_deps)
    if outcome.failed:
        return True, None
    witness = ambiguity_witness(outcome.result.body, sigma_deps)
    return witness is None, witness


def describe_mapping(mapping: VariableMapping) -> Dict[str, str]:
    return {str(v): format_image(img) for v, img in sorted(mapping.items(), key=lambda kv: str(kv[0]))}


def decide_implication(sigma: Jaegd, sigma_deps: Sequence[Jaegd]) -> ImplicationVerdict:
    """
    Implied when the chase fails or ends in a trivial equality. Otherwise the
    answer is a definite NotImpliedByChase only for unambiguous inputs.
    """
    outcome = chase(sigma, sigma_deps)
    result_text = str(outcome.result) if outcome.result is not None else None
    if outcome.failed or outcome.trivial_consequent:
        return ImplicationVerdict(
            kind=ImplicationKind.IMPLIED,
            chase=outcome.kind,
            sigma=str(sigma),
            result=result_text,
            trivial_consequent=outcome.trivial_consequent,
            steps=outcome.steps,
        )
    unambiguous, witness = is_unambiguous(sigma, sigma_deps, outcome)
    if unambiguous:
        return ImplicationVerdict(
            kind=ImplicationKind.NOT_IMPLIED,
            chase=outcome.kind,
            sigma=str(sigma),
            result=result_text,
            steps=outcome.steps,
        )
    logger.warning("ambiguous_implication", sigma=str(sigma))
    return ImplicationVerdict(
        kind=ImplicationKind.AMBIGUOUS,
        chase=outcome.kind,
        sigma=str(sigma),
        result=result_text,
        witness=describe_mapping(witness),
        steps=outcome.steps,
    )
