"""
Stratified evaluation of J-Logic programs

Rules are evaluated by joining matchings of their positive predicates,
solving equalities, filtering negative literals and instantiating the head.
Each stratum is run to its least fixpoint, semi-naively unless the evaluator
is built with naive=True.
"""

from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import structlog

from engine.matching import (
    Valuation,
    instantiate_items,
    instantiate_term,
    is_ground,
    match_items,
    match_predicate,
)
from language.dependencies import check_vocabulary, stratify
from language.desugar import desugar
from language.safety import ensure_safe
from models.errors import LimitExceeded, VocabMismatch
from models.program import (
    Equality,
    Literal,
    Predicate,
    Program,
    Rule,
    item_variables,
    term_variables,
)
from models.terms import Fact, Instance, Pair, pack_depth
from models.validation import EvalLimits

logger = structlog.get_logger(__name__)

Relations = Dict[str, Set[Pair]]


def join_order(body: Sequence[Literal]) -> List[Predicate]:
    """Positive predicates, greedily picking the one sharing most bound variables"""
    remaining = [lit.atom for lit in body if lit.positive and lit.is_predicate]
    bound: Set = set()
    ordered: List[Predicate] = []
    while remaining:
        best = max(
            range(len(remaining)),
            key=lambda i: (len(_pred_vars(remaining[i]) & bound), -i),
        )
        pred = remaining.pop(best)
        ordered.append(pred)
        bound |= _pred_vars(pred)
    return ordered


def _pred_vars(pred: Predicate) -> Set:
    return set(item_variables(pred.path)) | set(term_variables(pred.term))


class Evaluator:
    """Evaluates rules, strata and programs under fixed limits"""

    def __init__(self, limits: Optional[EvalLimits] = None, naive: bool = False):
        self.limits = limits or EvalLimits()
        self.naive = naive

    # -- single rule ---------------------------------------------------------

    def valuations(
        self,
        body: Sequence[Literal],
        relations: Relations,
        delta: Optional[Tuple[int, Set[Pair]]] = None,
        weak: bool = False,
    ) -> Iterator[Valuation]:
        """
        Valuations satisfying body.

        delta=(position, pairs) makes the predicate at that position of the
        join order range over pairs instead of its full relation.
        """
        order = join_order(body)
        equalities = [lit.atom for lit in body if lit.positive and lit.is_equality]
        negatives = [lit for lit in body if not lit.positive]

        def join_all(index: int, binding: Valuation) -> Iterator[Valuation]:
            if index == len(order):
                yield binding
                return
            pred = order[index]
            if delta is not None and delta[0] == index:
                source = delta[1]
            else:
                source = relations.get(pred.relation, ())
            for path, value in source:
                for extended in match_predicate(pred, path, value, binding, weak):
                    yield from join_all(index + 1, extended)

        for binding in join_all(0, {}):
            for solved in solve_equalities(equalities, binding, weak):
                if all(_negative_holds(lit, solved, relations) for lit in negatives):
                    yield solved

    def eval_rule(self, rule: Rule, instance: Instance) -> Set[Fact]:
        """Facts produced by one application of rule on instance"""
        relations = _mutable(instance)
        return {Fact(rule.head.relation, path, value) for path, value in self._fire(rule, relations)}

    def _fire(
        self, rule: Rule, relations: Relations, delta: Optional[Tuple[int, Set[Pair]]] = None
    ) -> Set[Pair]:
        derived: Set[Pair] = set()
        head = rule.head
        for binding in self.valuations(rule.body, relations, delta):
            path = instantiate_items(head.path, binding)
            self._check_path(path, head)
            derived.add((path, instantiate_term(head.term, binding)))
        return derived

    def _check_path(self, path, head: Predicate):
        if len(path) > self.limits.max_path_length:
            raise LimitExceeded(
                "path_length", self.limits.max_path_length, f"derived a path of length {len(path)} for {head.relation}"
            )
        depth = pack_depth(path)
        if depth > self.limits.max_pack_depth:
            raise LimitExceeded(
                "pack_depth", self.limits.max_pack_depth, f"derived a path of packing depth {depth} for {head.relation}"
            )

    # -- strata --------------------------------------------------------------

    def eval_semipositive(self, stratum: Sequence[Rule], instance: Instance) -> Instance:
        relations = _mutable(instance)
        self._run_stratum(tuple(stratum), relations, 0)
        return Instance(relations)

    def _run_stratum(self, stratum: Tuple[Rule, ...], relations: Relations, derived_so_far: int) -> int:
        defined = {rule.head.relation for rule in stratum}
        for name in defined:
            relations.setdefault(name, set())
        derived = derived_so_far

        def absorb(new: Dict[str, Set[Pair]]) -> Dict[str, Set[Pair]]:
            nonlocal derived
            fresh: Dict[str, Set[Pair]] = {}
            for name, pairs in new.items():
                added = pairs - relations[name]
                if added:
                    relations[name] |= added
                    fresh[name] = added
                    derived += len(added)
            if derived > self.limits.max_derived_facts:
                raise LimitExceeded("derived_facts", self.limits.max_derived_facts)
            return fresh

        rounds = 1
        produced: Dict[str, Set[Pair]] = {}
        for rule in stratum:
            produced.setdefault(rule.head.relation, set()).update(self._fire(rule, relations))
        delta = absorb(produced)

        recursive = [r for r in stratum if any(p.relation in defined for p in r.positive_predicates())]
        while delta and recursive:
            rounds += 1
            produced = {}
            for rule in recursive:
                target = produced.setdefault(rule.head.relation, set())
                if self.naive:
                    target.update(self._fire(rule, relations))
                    continue
                for position, pred in enumerate(join_order(rule.body)):
                    if pred.relation in delta:
                        target.update(self._fire(rule, relations, (position, delta[pred.relation])))
            delta = absorb(produced)

        logger.debug("stratum_evaluated", rules=len(stratum), rounds=rounds, derived=derived - derived_so_far)
        return derived

    # -- programs ------------------------------------------------------------

    def eval_program(self, program: Program, instance: Instance) -> Instance:
        """Apply the strata in order; the result includes the input relations"""
        program = prepare(program)
        relations = _mutable(instance)
        derived = 0
        for stratum in stratify(program):
            derived = self._run_stratum(stratum, relations, derived)
        return Instance(relations)

    def eval_query(self, program: Program, instance: Instance) -> Instance:
        program = prepare(program)
        _check_instance(program, instance)
        result = self.eval_program(program, instance)
        return result.restrict(program.output_names)


def prepare(program: Program) -> Program:
    """Check vocabularies, desugar, then check safety and stratifiability"""
    check_vocabulary(program)
    program = desugar(program)
    for rule in program.rules:
        ensure_safe(rule)
    stratify(program)
    return program


def _check_instance(program: Program, instance: Instance):
    names = {name for name, pairs in instance.relations.items() if pairs}
    defined = names & program.idb
    if defined:
        raise VocabMismatch(f"Instance supplies facts for derived relations: {', '.join(sorted(defined))}")
    if program.vocab_in is not None:
        extra = names - program.vocab_in
        if extra:
            raise VocabMismatch(f"Instance relations not declared as input: {', '.join(sorted(extra))}")


def _mutable(instance: Instance) -> Relations:
    return {name: set(pairs) for name, pairs in instance.relations.items()}


def solve_equalities(equalities: Sequence[Equality], binding: Valuation, weak: bool = False) -> Iterator[Valuation]:
    """
    Process equalities in rotation: compare ground sides, match a ground side
    against the other one. Safe rules always make progress.
    """
    if not equalities:
        yield binding
        return
    for index, eq in enumerate(equalities):
        left_ground = is_ground(eq.left, binding)
        right_ground = is_ground(eq.right, binding)
        if not (left_ground or right_ground):
            continue
        rest = list(equalities[:index]) + list(equalities[index + 1:])
        if left_ground and right_ground:
            if instantiate_items(eq.left, binding) == instantiate_items(eq.right, binding):
                yield from solve_equalities(rest, binding, weak)
            return
        ground, other = (eq.left, eq.right) if left_ground else (eq.right, eq.left)
        for extended in match_items(other, instantiate_items(ground, binding), binding, weak):
            yield from solve_equalities(rest, extended, weak)
        return
    raise AssertionError(f"No equality side is bound in {[str(e) for e in equalities]}; rule is unsafe")


def _negative_holds(lit: Literal, binding: Valuation, relations: Relations) -> bool:
    atom = lit.atom
    if isinstance(atom, Predicate):
        pair = (instantiate_items(atom.path, binding), instantiate_term(atom.term, binding))
        return pair not in relations.get(atom.relation, ())
    return instantiate_items(atom.left, binding) != instantiate_items(atom.right, binding)


# ---------------------------------------------------------------------------
# Module-level entry points with default limits

def eval_rule(rule: Rule, instance: Instance, limits: Optional[EvalLimits] = None) -> Set[Fact]:
    return Evaluator(limits).eval_rule(rule, instance)


def eval_semipositive(stratum: Sequence[Rule], instance: Instance, limits: Optional[EvalLimits] = None) -> Instance:
    return Evaluator(limits).eval_semipositive(stratum, instance)


def eval_program(program: Program, instance: Instance, limits: Optional[EvalLimits] = None) -> Instance:
    return Evaluator(limits).eval_program(program, instance)


def eval_query(program: Program, instance: Instance, limits: Optional[EvalLimits] = None) -> Instance:
    return Evaluator(limits).eval_query(program, instance)
