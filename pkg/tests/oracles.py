"""
Brute-force reference implementations used as test oracles

Everything here enumerates: valuations range over all subpaths, keys and
atomic symbols of the instance, instances range over all small flat
instances. Keep inputs tiny.
"""

import random
from itertools import combinations, product
from typing import Dict, Iterator, List, Optional, Sequence

from engine.matching import instantiate_term
from models.objects import atomic_symbols, paths_of, sub
from models.program import Const, Jaegd, Literal, PackExpr, Predicate, Rule, Var, literal_variables
from models.terms import EMPTY, Fact, Instance, Packed


# ---------------------------------------------------------------------------
# Objects

def trees_equal(left, right) -> bool:
    """Structural equality of two object trees"""
    if isinstance(left, dict) != isinstance(right, dict):
        return False
    if not isinstance(left, dict):
        return left == right
    if set(left) != set(right):
        return False
    return all(trees_equal(left[k], right[k]) for k in left)


def random_tree(rng: random.Random, depth: int, keys: Sequence[str] = ("a", "b", "c"), values=("1", "2")):
    """A random object of depth at most depth; subobjects may be empty"""
    tree = {}
    for key in keys:
        roll = rng.random()
        if roll < 0.3:
            continue
        if depth > 1 and roll < 0.6:
            tree[key] = random_tree(rng, depth - 1, keys, values)
        else:
            tree[key] = rng.choice(values)
    return tree


# ---------------------------------------------------------------------------
# Valuations

def _candidates(var: Var, paths, symbols):
    if var.sort == Var.PATH:
        return sorted(paths, key=repr)
    if var.sort == Var.OPTIONAL:
        return [()] + sorted(paths, key=repr)
    if var.sort == Var.KEY:
        packed = {key for path in paths for key in path if isinstance(key, Packed)}
        return sorted(symbols) + sorted(packed, key=repr)
    if var.sort == Var.VALUE:
        return sorted(symbols) + [EMPTY]
    return sorted(symbols)


def _keys(items, binding) -> tuple:
    """Like instantiate_items, for sugar variables and {} as well"""
    keys = []
    for item in items:
        if isinstance(item, Const):
            keys.append(item.symbol)
        elif isinstance(item, PackExpr):
            keys.append(Packed(_keys(item.items, binding)))
        elif item is EMPTY:
            keys.append(EMPTY)
        elif item.sort in (Var.PATH, Var.OPTIONAL):
            keys.extend(binding[item])
        else:
            keys.append(binding[item])
    return tuple(keys)


def valuations(body: Sequence[Literal], instance: Instance) -> Iterator[Dict[Var, object]]:
    """
    Every valuation of the body variables into subpaths and atomic symbols
    of the instance that satisfies the body. Optional variables may also be
    empty, key variables packed keys and value variables {}. Variables must
    occur in positive predicates.
    """
    paths = sub(paths_of(instance))
    symbols = atomic_symbols(instance)
    variables = sorted(literal_variables(body), key=lambda v: (v.sort, v.name))
    pools = [_candidates(v, paths, symbols) for v in variables]
    for images in product(*pools):
        binding = dict(zip(variables, images))
        if all(_holds(lit, binding, instance) for lit in body):
            yield binding


def _holds(lit: Literal, binding, instance: Instance) -> bool:
    atom = lit.atom
    if isinstance(atom, Predicate):
        fact = Fact(atom.relation, _keys(atom.path, binding), instantiate_term(atom.term, binding))
        truth = fact in instance
    else:
        truth = _keys(atom.left, binding) == _keys(atom.right, binding)
    return truth if lit.positive else not truth


def eval_rule_brute(rule: Rule, instance: Instance) -> set:
    """Head facts of all satisfying valuations of a rule, sugar variables included"""
    out = set()
    for binding in valuations(rule.body, instance):
        head = rule.head
        out.add(Fact(head.relation, _keys(head.path, binding), instantiate_term(head.term, binding)))
    return out


def violates(instance: Instance, j: Jaegd) -> bool:
    for binding in valuations(j.body, instance):
        if j.consequent is None:
            return True
        left, right = (instantiate_term(t, binding) for t in j.consequent)
        if left != right:
            return True
    return False


# ---------------------------------------------------------------------------
# Small instances

def flat_pairs(alphabet: Sequence[str], max_length: int, values: Sequence = (EMPTY,)) -> List[tuple]:
    pairs = []
    for length in range(1, max_length + 1):
        for path in product(alphabet, repeat=length):
            for value in values:
                pairs.append((tuple(path), value))
    return pairs


def flat_instances(
    relation: str, alphabet: Sequence[str], max_length: int, max_facts: int, values: Sequence = (EMPTY,)
) -> Iterator[Instance]:
    """Every instance of one relation with at most max_facts flat pairs"""
    pairs = flat_pairs(alphabet, max_length, values)
    for size in range(0, max_facts + 1):
        for chosen in combinations(pairs, size):
            yield Instance({relation: chosen})


def counterexample_to_implication(
    sigma_deps: Sequence[Jaegd], sigma: Jaegd, candidates: Sequence[Instance]
) -> Optional[Instance]:
    """An instance satisfying every dependency but violating sigma"""
    for candidate in candidates:
        if violates(candidate, sigma):
            if not any(violates(candidate, d) for d in sigma_deps):
                return candidate
    return None


# ---------------------------------------------------------------------------
# Random dependencies

def random_dependency_predicate(rng: random.Random, relation: str = "D") -> Predicate:
    pool = [Var("x", Var.PATH), Var("y", Var.PATH), Var("p", Var.ATOMIC), Const("a")]
    items = tuple(rng.choice(pool) for _ in range(rng.randint(1, 2)))
    term = rng.choice([EMPTY, Var("i", Var.ATOMIC), Var("j", Var.ATOMIC), Const("a")])
    return Predicate(relation, items, term)


def random_jaegd(rng: random.Random, max_predicates: int = 3) -> Jaegd:
    body = tuple(
        Literal(random_dependency_predicate(rng)) for _ in range(rng.randint(1, max_predicates))
    )
    atomic = sorted((v for v in literal_variables(body) if v.sort == Var.ATOMIC), key=lambda v: v.name)
    if len(atomic) >= 2 and rng.random() < 0.7:
        first, second = rng.sample(atomic, 2)
        return Jaegd(body, (first, second))
    return Jaegd(body, None)


# ---------------------------------------------------------------------------
# Random rules

RULE_ITEMS = (Var("x", Var.ATOMIC), Var("y", Var.ATOMIC), Var("x", Var.PATH), Var("y", Var.PATH), Const("a"))
VALUE = Var("u", Var.ATOMIC)


def random_flat_rule(rng: random.Random, max_atoms: int = 2, head: str = "S", body: str = "R") -> Rule:
    """A positive rule without packing whose head path repeats no variable"""
    literals = []
    for _ in range(rng.randint(1, max_atoms)):
        items = tuple(rng.choice(RULE_ITEMS) for _ in range(rng.randint(1, 2)))
        term = rng.choice([EMPTY, EMPTY, VALUE, Const("1")])
        literals.append(Literal(Predicate(body, items, term)))
    bound = literal_variables(literals)
    candidates = sorted(bound - {VALUE}, key=lambda v: (v.sort, v.name))
    items = tuple(rng.sample(candidates, rng.randint(0, len(candidates))))
    if not items or rng.random() < 0.3:
        items = (Const("c"),) + items
    term = VALUE if VALUE in bound and rng.random() < 0.5 else EMPTY
    return Rule(Predicate(head, items, term), tuple(literals))
