"""
Deciding whether a program maps proper instances to proper instances

For every output relation S, every properness jaegd shape and every ordered
pair of rules defining S, a jaegd is built whose body joins the two rule
bodies so that their head facts form the forbidden shape. The program is
object-object iff all those jaegds are implied by the properness jaegds of
the inputs, which the chase decides.

    shape  first head   second head      consequent
    1      e:t1         e:t2             t1 = t2     (t1, t2 atomic)
    2      e:{}         e:t2             false       (t2 atomic)
    3      e:t1         e.$y:{}          false       (t1 atomic)
    4      e:t1         e.$y:t2          false       (both atomic)
    5      e:{}         e.$y:{}          false
    6      e:{}         e.$y:t2          false       (t2 atomic)
"""

from collections import Counter
from itertools import product
from typing import List, Optional, Sequence, Tuple

import structlog

from analysis.unfolding import unfold_program
from chase.dependencies import delta_for_all
from chase.procedure import decide_implication
from language.dependencies import is_recursive
from language.desugar import desugar
from language.equations import is_equationally_acyclic
from language.renaming import FreshNames, rename_apart, variable_names
from models.errors import CyclicEquality, PreconditionFailed
from models.program import Equality, Jaegd, Literal, Program, Rule, Term, Var, item_variables
from models.terms import EMPTY
from models.validation import ObjectObjectKind, ObjectObjectVerdict, ObjectObjectWitness
from unification.elimination import eliminate_equalities_jaegd, eliminate_equalities_program

logger = structlog.get_logger(__name__)

# (first term empty?, second term empty?, second path extended?, equality consequent?)
SHAPES = {
    1: (False, False, False, True),
    2: (True, False, False, False),
    3: (False, True, True, False),
    4: (False, False, True, False),
    5: (True, True, True, False),
    6: (True, False, True, False),
}


def _fits(term: Term, empty: bool) -> bool:
    return (term is EMPTY) == empty


def shape_jaegd(shape: int, first: Rule, second: Rule) -> Optional[Jaegd]:
    """
    Jaegd stating that the heads of two rule instances never form the given
    shape, or None when the head terms rule the shape out.
    """
    first_empty, second_empty, extended, equation = SHAPES[shape]
    r1 = rename_apart(first, 1)
    r2 = rename_apart(second, 2)
    t1, t2 = r1.head.term, r2.head.term
    if not (_fits(t1, first_empty) and _fits(t2, second_empty)):
        return None

    left = r1.head.path
    if extended:
        names = FreshNames(variable_names(r1) | variable_names(r2), prefix="y")
        left = left + (names.var(Var.PATH),)
    link = Literal(Equality(r2.head.path, left))
    body = r1.body + r2.body + (link,)
    return Jaegd(body, (t1, t2) if equation else None)


def _repeated_head_variables(rule: Rule) -> List[Var]:
    counts = Counter(item_variables(rule.head.path))
    return sorted((v for v, n in counts.items() if n > 1), key=lambda v: (v.sort, v.name))


def _preconditions(program: Program) -> List[str]:
    reasons = []
    for rule in program.rules:
        if not rule.is_positive:
            reasons.append(f"rule uses negation: {rule}")
        if not is_equationally_acyclic(rule):
            reasons.append(f"rule is equationally cyclic: {rule}")
    if is_recursive(program):
        reasons.append("program is recursive")
    return reasons


def _normalize(program: Program) -> Tuple[Optional[Program], List[str]]:
    """Unfolded, equality-free program with linear heads, or the reasons it is out of scope"""
    program = desugar(program)
    reasons = _preconditions(program)
    if reasons:
        return None, reasons
    try:
        flat = eliminate_equalities_program(unfold_program(program))
    except (PreconditionFailed, CyclicEquality) as e:
        return None, getattr(e, "reasons", [str(e)])

    for rule in flat.rules:
        repeated = _repeated_head_variables(rule)
        if repeated:
            names = ", ".join(str(v) for v in repeated)
            reasons.append(f"head repeats {names}: {rule}")
    return (None, reasons) if reasons else (flat, [])


def decide_object_object(program: Program) -> ObjectObjectVerdict:
    """
    yes when every proper input instance yields proper outputs, no with the
    shape and rule pair that can break properness, unsupported when the
    program is outside the decidable fragment.
    """
    flat, reasons = _normalize(program)
    if flat is None:
        for reason in reasons:
            logger.warning("object_object_unsupported", reason=reason)
        return ObjectObjectVerdict(kind=ObjectObjectKind.UNSUPPORTED, reasons=reasons)

    delta = delta_for_all(program.input_names)
    checked = 0
    for relation in sorted(flat.output_names):
        rules = flat.rules_for(relation)
        for shape in SHAPES:
            for first, second in product(rules, repeat=2):
                witness = _check_pair(shape, relation, first, second, delta)
                checked += witness[1]
                if witness[0] is not None:
                    logger.info("object_object_refuted", relation=relation, shape=shape)
                    return ObjectObjectVerdict(kind=ObjectObjectKind.NO, witness=witness[0], checked=checked)

    logger.info("object_object_confirmed", checked=checked)
    return ObjectObjectVerdict(kind=ObjectObjectKind.YES, checked=checked)


def _check_pair(
    shape: int, relation: str, first: Rule, second: Rule, delta: Sequence[Jaegd]
) -> Tuple[Optional[ObjectObjectWitness], int]:
    sigma = shape_jaegd(shape, first, second)
    if sigma is None:
        return None, 0
    checked = 0
    for j in eliminate_equalities_jaegd(sigma):
        checked += 1
        verdict = decide_implication(j, delta)
        if not verdict.implied:
            witness = ObjectObjectWitness(
                delta=shape,
                relation=relation,
                first_rule=str(first),
                second_rule=str(second),
                jaegd=str(j),
            )
            return witness, checked
    return None, checked
