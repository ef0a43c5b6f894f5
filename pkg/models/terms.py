"""
Value universe for J-Logic: keys, paths, atomic values, facts and instances
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Tuple, Union


@dataclass(frozen=True, slots=True)
class Packed:
    """A packed key <p> wrapping a nonempty path"""
    path: Tuple["Key", ...]

    def __post_init__(self):
        if not self.path:
            raise ValueError("Packed key needs a nonempty path")

    def __str__(self) -> str:
        return "<" + format_path(self.path) + ">"


@dataclass(frozen=True, slots=True)
class Frozen:
    """
    A variable treated as an opaque key.

    Frozen keys let bodies of rules and jaegds be evaluated as if they were
    instances. A frozen atomic variable behaves like an atomic key; a frozen
    path variable is a single opaque symbol that only path variables may
    cover (or atomic variables, under weak morphisms).
    """
    variable: object

    @property
    def is_atomic(self) -> bool:
        return getattr(self.variable, "sort", None) == "atomic"

    def __str__(self) -> str:
        return str(self.variable)


class EmptyObject:
    """The empty-object leaf marker (written {} in programs and JSON trees)"""

    _instance: Optional["EmptyObject"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "{}"

    __str__ = __repr__

    def __reduce__(self):
        return (EmptyObject, ())


EMPTY = EmptyObject()

# Atomic keys are plain strings.
Key = Union[str, Packed, Frozen]
Path = Tuple[Key, ...]
AtomicValue = Union[str, EmptyObject, Frozen]
Pair = Tuple[Path, AtomicValue]


def is_atomic_key(key: Key) -> bool:
    return isinstance(key, str) or (isinstance(key, Frozen) and key.is_atomic)


def pack_depth(path: Path) -> int:
    depth = 0
    for key in path:
        if isinstance(key, Packed):
            depth = max(depth, 1 + pack_depth(key.path))
    return depth


def format_key(key: Key) -> str:
    return str(key)


def format_path(path: Path) -> str:
    return ".".join(format_key(k) for k in path)


def format_value(value: AtomicValue) -> str:
    return str(value)


# ---------------------------------------------------------------------------
# Canonical ordering: atomic < packed, packed compared by inner path

def key_order(key: Key) -> tuple:
    if isinstance(key, str):
        return (0, key)
    if isinstance(key, Packed):
        return (1, path_order(key.path))
    return (2, str(key.variable))


def path_order(path: Path) -> tuple:
    return tuple(key_order(k) for k in path)


def value_order(value: AtomicValue) -> tuple:
    if value is EMPTY:
        return (0, "")
    if isinstance(value, Frozen):
        return (2, str(value.variable))
    return (1, value)


def pair_order(pair: Pair) -> tuple:
    return (path_order(pair[0]), value_order(pair[1]))


def sorted_pairs(pairs: Iterable[Pair]) -> list:
    return sorted(pairs, key=pair_order)


@dataclass(frozen=True, slots=True)
class Fact:
    """R(p:v)"""
    relation: str
    path: Path
    value: AtomicValue

    def __post_init__(self):
        if not self.relation:
            raise ValueError("Relation name must be nonempty")
        if not self.path:
            raise ValueError("Fact paths are nonempty")

    def __str__(self) -> str:
        return f"{self.relation}({format_path(self.path)}:{format_value(self.value)})"


def fact_order(fact: Fact) -> tuple:
    return (fact.relation, path_order(fact.path), value_order(fact.value))


class Instance:
    """
    Named object descriptions.

    Both views are available: `relations` maps names to frozensets of
    (path, value) pairs, and iterating yields Facts. Instances are immutable.
    """

    __slots__ = ("_relations",)

    def __init__(self, relations: Optional[Mapping[str, Iterable[Pair]]] = None):
        rels: Dict[str, FrozenSet[Pair]] = {}
        for name, pairs in (relations or {}).items():
            rels[name] = frozenset(pairs)
        self._relations = rels

    @classmethod
    def from_facts(cls, facts: Iterable[Fact], names: Iterable[str] = ()) -> "Instance":
        rels: Dict[str, set] = {name: set() for name in names}
        for fact in facts:
            rels.setdefault(fact.relation, set()).add((fact.path, fact.value))
        return cls(rels)

    @property
    def relations(self) -> Mapping[str, FrozenSet[Pair]]:
        return self._relations

    @property
    def names(self) -> FrozenSet[str]:
        return frozenset(self._relations)

    def pairs(self, name: str) -> FrozenSet[Pair]:
        return self._relations.get(name, frozenset())

    def facts(self) -> Iterator[Fact]:
        for name, pairs in self._relations.items():
            for path, value in pairs:
                yield Fact(name, path, value)

    def sorted_facts(self) -> list:
        return sorted(self.facts(), key=fact_order)

    def restrict(self, names: Iterable[str]) -> "Instance":
        wanted = set(names)
        return Instance({n: self.pairs(n) for n in sorted(wanted)})

    def union(self, other: "Instance") -> "Instance":
        rels = {n: set(p) for n, p in self._relations.items()}
        for n, p in other.relations.items():
            rels.setdefault(n, set()).update(p)
        return Instance(rels)

    def __iter__(self) -> Iterator[Fact]:
        return self.facts()

    def __contains__(self, fact: Fact) -> bool:
        return (fact.path, fact.value) in self.pairs(fact.relation)

    def __len__(self) -> int:
        return sum(len(p) for p in self._relations.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return set(self.facts()) == set(other.facts())

    def __hash__(self) -> int:
        return hash(frozenset(self.facts()))

    def __repr__(self) -> str:
        return "Instance{" + ", ".join(str(f) for f in self.sorted_facts()) + "}"
