"""
Matching path expressions against paths

A path expression with k items matches a path by cutting the path into k
consecutive nonempty pieces: constants and atomic variables take exactly one
atomic key, packed expressions take one packed key whose inner path they
match recursively, and path variables take one or more keys.

Valuations are plain dicts from Var to a key (atomic variables) or to a
nonempty tuple of keys (path variables). Matching never mutates the binding
it receives.
"""

from typing import Dict, Iterator, Optional, Tuple

from models.program import Const, PackExpr, PathExpr, Predicate, Term, Var
from models.terms import EMPTY, AtomicValue, Frozen, Key, Packed, Path, is_atomic_key

Valuation = Dict[Var, object]


def _accepts_atomic(key: Key, weak: bool) -> bool:
    if is_atomic_key(key):
        return True
    return weak and isinstance(key, Frozen)


def _fixed_length(items: PathExpr, binding: Valuation) -> Optional[int]:
    """Exact number of keys the items need, or None if some path variable is free"""
    total = 0
    for item in items:
        if isinstance(item, Var) and item.sort == Var.PATH:
            bound = binding.get(item)
            if bound is None:
                return None
            total += len(bound)
        else:
            total += 1
    return total


def _min_length(items: PathExpr, binding: Valuation) -> int:
    total = 0
    for item in items:
        if isinstance(item, Var) and item.sort == Var.PATH and item in binding:
            total += len(binding[item])
        else:
            total += 1
    return total


def match_items(
    items: PathExpr, keys: Path, binding: Valuation, weak: bool = False
) -> Iterator[Valuation]:
    """
    All extensions of binding mapping items onto keys.

    With weak=True atomic variables may also take a frozen path variable,
    which is what weak morphisms need.
    """
    if not items:
        if not keys:
            yield binding
        return
    if not keys:
        return

    item, rest = items[0], items[1:]

    if isinstance(item, Const):
        if keys[0] == item.symbol:
            yield from match_items(rest, keys[1:], binding, weak)
        return

    if isinstance(item, PackExpr):
        key = keys[0]
        if isinstance(key, Packed):
            for inner in match_items(item.items, key.path, binding, weak):
                yield from match_items(rest, keys[1:], inner, weak)
        return

    if item.sort == Var.ATOMIC:
        key = keys[0]
        if item in binding:
            if binding[item] == key:
                yield from match_items(rest, keys[1:], binding, weak)
        elif _accepts_atomic(key, weak):
            extended = dict(binding)
            extended[item] = key
            yield from match_items(rest, keys[1:], extended, weak)
        return

    if item.sort != Var.PATH:
        raise ValueError(f"Sugar variable {item} reached the matcher; desugar first")

    if item in binding:
        bound = binding[item]
        n = len(bound)
        if keys[:n] == bound:
            yield from match_items(rest, keys[n:], binding, weak)
        return

    fixed = _fixed_length(rest, binding)
    if fixed is not None:
        cuts = [len(keys) - fixed] if len(keys) - fixed >= 1 else []
    else:
        cuts = range(1, len(keys) - _min_length(rest, binding) + 1)
    for cut in cuts:
        extended = dict(binding)
        extended[item] = keys[:cut]
        yield from match_items(rest, keys[cut:], extended, weak)


def match_term(term: Term, value: AtomicValue, binding: Valuation, weak: bool = False) -> Optional[Valuation]:
    if term is EMPTY:
        return binding if value is EMPTY else None
    if isinstance(term, Const):
        return binding if value == term.symbol else None
    if term in binding:
        return binding if binding[term] == value else None
    if value is EMPTY or not _accepts_atomic(value, weak):
        return None
    extended = dict(binding)
    extended[term] = value
    return extended


def match_predicate(
    pred: Predicate, path: Path, value: AtomicValue, binding: Valuation, weak: bool = False
) -> Iterator[Valuation]:
    """Extensions of binding mapping pred onto the pair path:value"""
    seeded = match_term(pred.term, value, binding, weak)
    if seeded is None:
        return
    yield from match_items(pred.path, path, seeded, weak)


# ---------------------------------------------------------------------------
# Instantiation

def is_ground(items: PathExpr, binding: Valuation) -> bool:
    for item in items:
        if isinstance(item, Var):
            if item not in binding:
                return False
        elif isinstance(item, PackExpr) and not is_ground(item.items, binding):
            return False
    return True


def instantiate_items(items: PathExpr, binding: Valuation) -> Tuple[Key, ...]:
    keys = []
    for item in items:
        if isinstance(item, Const):
            keys.append(item.symbol)
        elif isinstance(item, PackExpr):
            keys.append(Packed(instantiate_items(item.items, binding)))
        elif item.sort == Var.PATH:
            keys.extend(binding[item])
        else:
            keys.append(binding[item])
    return tuple(keys)


def instantiate_term(term: Term, binding: Valuation) -> AtomicValue:
    if term is EMPTY:
        return EMPTY
    if isinstance(term, Const):
        return term.symbol
    return binding[term]
