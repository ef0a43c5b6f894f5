"""
Homomorphisms and weak morphisms between bodies

The target body is frozen into an instance (variables become opaque keys)
and the source body is evaluated on it; every valuation, thawed back into
expressions, is a homomorphism.
"""

from typing import Dict, Iterable, List, Sequence

from engine.evaluator import Evaluator, Relations
from models.program import Const, Literal, PackExpr, PathExpr, Predicate, Term, Var
from models.terms import EMPTY, Frozen, Key, Packed
from unification.mgu import Image, format_image

VariableMapping = Dict[Var, Image]


def freeze_items(items: PathExpr) -> tuple:
    keys = []
    for item in items:
        if isinstance(item, Const):
            keys.append(item.symbol)
        elif isinstance(item, PackExpr):
            keys.append(Packed(freeze_items(item.items)))
        elif item is EMPTY:
            raise ValueError("{} cannot occur inside a path")
        else:
            keys.append(Frozen(item))
    return tuple(keys)


def freeze_term(term: Term):
    if term is EMPTY:
        return EMPTY
    if isinstance(term, Const):
        return term.symbol
    return Frozen(term)


def freeze_body(body: Iterable[Predicate]) -> Relations:
    relations: Relations = {}
    for pred in body:
        relations.setdefault(pred.relation, set()).add((freeze_items(pred.path), freeze_term(pred.term)))
    return relations


def thaw_key(key: Key):
    if isinstance(key, Frozen):
        return key.variable
    if isinstance(key, Packed):
        return PackExpr(tuple(thaw_key(k) for k in key.path))
    return Const(key)


def thaw_valuation(valuation) -> VariableMapping:
    mapping: VariableMapping = {}
    for var, image in valuation.items():
        if var.sort == Var.PATH:
            mapping[var] = tuple(thaw_key(k) for k in image)
        else:
            mapping[var] = thaw_key(image)
    return mapping


def mapping_key(mapping: VariableMapping) -> tuple:
    return tuple(sorted((str(v), format_image(img)) for v, img in mapping.items()))


def _predicates(body: Sequence) -> List[Predicate]:
    preds = []
    for entry in body:
        if isinstance(entry, Literal):
            if not entry.is_predicate or not entry.positive:
                raise ValueError(f"Morphisms are defined on positive predicates only, got {entry}")
            preds.append(entry.atom)
        else:
            preds.append(entry)
    return preds


def _morphisms(source: Sequence, target: Sequence, weak: bool) -> List[VariableMapping]:
    pattern = tuple(Literal(p, True) for p in _predicates(source))
    relations = freeze_body(_predicates(target))
    found: Dict[tuple, VariableMapping] = {}
    for valuation in Evaluator().valuations(pattern, relations, weak=weak):
        mapping = thaw_valuation(valuation)
        found.setdefault(mapping_key(mapping), mapping)
    return [found[k] for k in sorted(found)]


def find_homomorphisms(source: Sequence, target: Sequence) -> List[VariableMapping]:
    """All variable mappings h with h(source) a subset of target, in canonical order"""
    return _morphisms(source, target, weak=False)


def find_weak_morphisms(source: Sequence, target: Sequence) -> List[VariableMapping]:
    """Like find_homomorphisms, but atomic variables may also map to path variables"""
    return _morphisms(source, target, weak=True)


def is_variable_mapping(mapping: VariableMapping) -> bool:
    for var, image in mapping.items():
        if var.sort == Var.ATOMIC and isinstance(image, Var) and image.sort == Var.PATH:
            return False
    return True


def apply_to_term(term: Term, mapping: VariableMapping) -> Term:
    if isinstance(term, Var) and term in mapping:
        return mapping[term]
    return term
