"""
Objects as trees and as object descriptions (sets of path:value pairs)
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Mapping, Set, Union

from models.errors import ImproperDescription, NotInjectiveOnSupport
from models.terms import (
    EMPTY,
    Instance,
    Packed,
    Pair,
    Path,
    format_path,
    format_value,
    sorted_pairs,
)

# An object tree maps keys to atomic keys (str) or to nested trees; {} is the
# empty object.
ObjectTree = Dict
ObjectDescription = FrozenSet[Pair]


class ViolationKind(str, Enum):
    FD = "FD"
    PREFIX = "PREFIX"


@dataclass(frozen=True)
class Violation:
    """Two pairs of a description that cannot both belong to an object"""
    kind: ViolationKind
    first: Pair
    second: Pair

    def describe(self) -> str:
        a = f"{format_path(self.first[0])}:{format_value(self.first[1])}"
        b = f"{format_path(self.second[0])}:{format_value(self.second[1])}"
        if self.kind == ViolationKind.FD:
            return f"path {format_path(self.first[0])} has two values ({a} and {b})"
        return f"path {format_path(self.first[0])} is a prefix of {format_path(self.second[0])} ({a} and {b})"


class PropernessReport:
    """Result of a properness check"""

    def __init__(self, is_proper: bool = True, violations: List[Violation] = None):
        self.is_proper = is_proper
        self.violations = violations or []

    def __bool__(self):
        return self.is_proper

    def add_violation(self, violation: Violation):
        self.violations.append(violation)
        self.is_proper = False

    @property
    def errors(self) -> List[str]:
        return [v.describe() for v in self.violations]


def od_encode(o: ObjectTree) -> ObjectDescription:
    """Object description of a tree: one pair per leaf"""
    pairs: Set[Pair] = set()
    for key, value in o.items():
        if isinstance(value, dict):
            if not value:
                pairs.add(((key,), EMPTY))
            else:
                for path, leaf in od_encode(value):
                    pairs.add(((key,) + path, leaf))
        else:
            pairs.add(((key,), value))
    return frozenset(pairs)


def is_proper(d: Iterable[Pair]) -> PropernessReport:
    """
    Check the path-to-value functional dependency and prefix-freeness.

    Every violating pair of pairs is reported, in canonical order.
    """
    report = PropernessReport()
    ordered = sorted_pairs(set(d))
    by_path: Dict[Path, list] = {}
    for path, value in ordered:
        by_path.setdefault(path, []).append((path, value))

    for path, pairs in by_path.items():
        for other in pairs[1:]:
            report.add_violation(Violation(ViolationKind.FD, pairs[0], other))

    for path, value in ordered:
        for cut in range(1, len(path)):
            prefix = path[:cut]
            if prefix in by_path:
                report.add_violation(
                    Violation(ViolationKind.PREFIX, by_path[prefix][0], (path, value))
                )
    return report


def od_decode(d: Iterable[Pair]) -> ObjectTree:
    """Rebuild the unique object whose description is d"""
    pairs = frozenset(d)
    report = is_proper(pairs)
    if not report:
        raise ImproperDescription(
            "Improper object description: " + "; ".join(report.errors),
            report.violations,
        )
    return _decode(pairs)


def _decode(pairs: FrozenSet[Pair]) -> ObjectTree:
    tree: ObjectTree = {}
    nested: Dict = {}
    for path, value in pairs:
        if len(path) == 1:
            tree[path[0]] = {} if value is EMPTY else value
        else:
            nested.setdefault(path[0], set()).add((path[1:], value))
    for key, rest in nested.items():
        tree[key] = _decode(frozenset(rest))
    return tree


def leaf_count(o: ObjectTree) -> int:
    total = 0
    for value in o.values():
        if isinstance(value, dict) and value:
            total += leaf_count(value)
        else:
            total += 1
    return total


def paths_of(i: Instance) -> Set[Path]:
    return {fact.path for fact in i.facts()}


def subpaths(path: Path) -> Set[Path]:
    """All contiguous nonempty subpaths, including those inside packed keys"""
    found: Set[Path] = set()
    n = len(path)
    for start in range(n):
        for end in range(start + 1, n + 1):
            found.add(path[start:end])
    for key in path:
        if isinstance(key, Packed):
            found |= subpaths(key.path)
    return found


def sub(paths: Iterable[Path]) -> Set[Path]:
    result: Set[Path] = set()
    for path in paths:
        result |= subpaths(path)
    return result


def atomic_symbols(i: Instance) -> Set[str]:
    symbols: Set[str] = set()
    for fact in i.facts():
        symbols |= _path_symbols(fact.path)
        if isinstance(fact.value, str):
            symbols.add(fact.value)
    return symbols


def _path_symbols(path: Path) -> Set[str]:
    symbols: Set[str] = set()
    for key in path:
        if isinstance(key, Packed):
            symbols |= _path_symbols(key.path)
        elif isinstance(key, str):
            symbols.add(key)
    return symbols


def _permute_path(f: Mapping[str, str], path: Path) -> Path:
    return tuple(
        Packed(_permute_path(f, k.path)) if isinstance(k, Packed) else f.get(k, k)
        for k in path
    )


def apply_permutation(f: Mapping[str, str], i: Instance) -> Instance:
    """Rename atomic keys everywhere (paths, packed keys, leaf values)"""
    support = atomic_symbols(i)
    images: Dict[str, str] = {}
    for symbol in sorted(support):
        image = f.get(symbol, symbol)
        if image in images:
            raise NotInjectiveOnSupport(
                f"{images[image]!r} and {symbol!r} both map to {image!r}"
            )
        images[image] = symbol

    relations = {}
    for name, pairs in i.relations.items():
        relations[name] = {
            (_permute_path(f, path), f.get(value, value) if isinstance(value, str) else value)
            for path, value in pairs
        }
    return Instance(relations)


def is_flat(x: Union[Path, Iterable[Pair], Instance]) -> bool:
    """True iff no packed key occurs anywhere in x"""
    if isinstance(x, Instance):
        return all(is_flat(fact.path) for fact in x.facts())
    if isinstance(x, tuple) and (not x or not isinstance(x[0], tuple)):
        return not any(isinstance(k, Packed) for k in x)
    return all(is_flat(path) for path, _ in x)
