"""
Tests for unifier enumeration and equality elimination

Run with: pytest tests/test_unification.py -v
"""

from itertools import product

import pytest

from engine.evaluator import eval_rule
from engine.matching import instantiate_items
from language.desugar import desugar_rule
from language.parser import parse_jaegd, parse_rule
from models.errors import CyclicEquality
from models.program import Const, Equality, PackExpr, Var, format_items, item_variables
from models.terms import EMPTY, Instance
from tests.oracles import flat_pairs
from unification.elimination import (
    eliminate_equalities_jaegd,
    eliminate_equalities_program,
    eliminate_equalities_rule,
)
from unification.mgu import enumerate_mgus, is_solvable, unify

A, B = Const("a"), Const("b")
X, Y, Z = Var("x", Var.PATH), Var("y", Var.PATH), Var("z", Var.PATH)
I = Var("i", Var.ATOMIC)


def _ground_images(var: Var, alphabet=("a", "b"), max_length: int = 2):
    if var.sort == Var.ATOMIC:
        return list(alphabet)
    return [tuple(p) for n in range(1, max_length + 1) for p in product(alphabet, repeat=n)]


def _instances_of(items, max_length: int = 2) -> set:
    """Ground paths obtained by valuating items over a two-key alphabet"""
    variables = list(dict.fromkeys(item_variables(items)))
    found = set()
    for images in product(*(_ground_images(v, max_length=max_length) for v in variables)):
        found.add(instantiate_items(items, dict(zip(variables, images))))
    return found


def _common_instances(left, right) -> set:
    variables = list(dict.fromkeys(list(item_variables(left)) + list(item_variables(right))))
    found = set()
    for images in product(*(_ground_images(v) for v in variables)):
        binding = dict(zip(variables, images))
        path = instantiate_items(left, binding)
        if path == instantiate_items(right, binding):
            found.add(path)
    return found


def _random_linear_equality(rng, max_variables: int = 4):
    """Each variable occurs once; retried until few enough variables"""
    counter = iter(range(10_000))

    def side():
        items = []
        for _ in range(rng.randint(1, 3)):
            roll = rng.random()
            if roll < 0.3:
                items.append(rng.choice([A, B]))
            elif roll < 0.5:
                items.append(Var(f"v{next(counter)}", Var.ATOMIC))
            else:
                items.append(Var(f"v{next(counter)}", Var.PATH))
        return tuple(items)

    while True:
        left, right = side(), side()
        if len(list(item_variables(left + right))) <= max_variables:
            return left, right


class TestUnifiers:
    """Enumeration of most general unifiers"""

    def test_shifted_sides(self):
        """$x.a = a.$y has the solutions x = y = a and x = a.u, y = u.a"""
        unifiers = enumerate_mgus((X, A), (A, Y))

        assert sorted(format_items(u.unified) for u in unifiers) == ["a.$u1.a", "a.a"]

    def test_every_unifier_unifies(self):
        unifiers = enumerate_mgus((X, A, Z), (Y, B))

        assert unifiers
        for u in unifiers:
            assert u.apply((X, A, Z)) == u.apply((Y, B)) == u.unified

    def test_distinct_constants_do_not_unify(self):
        assert enumerate_mgus((A, X), (B, Y)) == []
        assert unify((A, X), (B, Y)) is None

    def test_ground_side(self):
        """Non-linear equalities are fine when one side is ground"""
        unifiers = enumerate_mgus((X, X), (A, A))

        assert len(unifiers) == 1
        assert unifiers[0].mapping[X] == (A,)
        assert enumerate_mgus((X, X), (A, B)) == []

    def test_atomic_variables_take_one_key(self):
        unifiers = enumerate_mgus((I, Y), (A, B, A))

        assert len(unifiers) == 1
        assert unifiers[0].mapping[I] == A
        assert unifiers[0].mapping[Y] == (B, A)

    def test_atomic_variable_never_matches_pack(self):
        assert enumerate_mgus((I,), (PackExpr((X,)),)) == []

    def test_packed_expressions_unify_inside(self):
        unifiers = enumerate_mgus((PackExpr((X, B)),), (PackExpr((A, Y)),))

        assert sorted(format_items(u.unified) for u in unifiers) == ["<a.$u1.b>", "<a.b>"]

    def test_cyclic_equality_rejected(self):
        eq = Equality((A, X), (X, A))

        assert not is_solvable(eq)
        with pytest.raises(CyclicEquality):
            enumerate_mgus(eq.left, eq.right)

    def test_fresh_names_avoid_given_names(self):
        unifiers = enumerate_mgus((X, A), (A, Y), avoid={"u1"})

        assert "a.$u2.a" in [format_items(u.unified) for u in unifiers]

    def test_random_linear_equalities(self, rng, budget):
        """Unifiers are sound and cover every common ground instance"""
        for _ in range(budget(40, 400)):
            left, right = _random_linear_equality(rng)
            unifiers = enumerate_mgus(left, right)

            covered = set()
            for u in unifiers:
                assert u.apply(left) == u.unified == u.apply(right)
                covered |= _instances_of(u.unified)
            assert _common_instances(left, right) <= covered, (format_items(left), format_items(right))


class TestElimination:
    """Rewriting rules and jaegds into equality-free form"""

    @pytest.mark.parametrize(
        "text",
        [
            "S($y:{}) :- R($x:{}), $x = a.$y.",
            "S($x:{}) :- R($x.$y:{}), $x.b = b.$y.",
            "S($z:{}) :- R($x.@i:{}), R($y:{}), $x.@i = $y.$z.",
            "S($x:{}) :- R($x:{}), $x = a.a.",
            "S($x:{}) :- R($x:{}), R($y:{}), $x = $y, not R(a.$x:{}).",
        ],
    )
    def test_elimination_preserves_answers(self, rng, budget, text):
        rule = parse_rule(text)
        eliminated = eliminate_equalities_rule(rule)
        pairs = flat_pairs(["a", "b"], 3)

        for produced in eliminated:
            assert not any(lit.positive and lit.is_equality for lit in produced.body)
        for _ in range(budget(15, 150)):
            data = Instance({"R": rng.sample(pairs, rng.randint(1, 5))})
            combined = set()
            for produced in eliminated:
                combined |= eval_rule(produced, data)

            assert combined == eval_rule(rule, data)

    def test_single_rule_result(self):
        rules = eliminate_equalities_rule(parse_rule("S($y:{}) :- R($x:{}), $x = a.$y."))

        assert [str(r) for r in rules] == ["S($u1:{}) :- R(a.$u1:{})."]

    def test_non_unifiable_equality_drops_rule(self):
        rule = parse_rule("S($x:{}) :- R($x:{}), R($y:{}), a.$x = b.$y.")

        assert eliminate_equalities_rule(rule) == []

    def test_negative_equalities_are_kept(self):
        rule = parse_rule("S($x.@i:{}) :- R($x.@i:{}), @i != a.")

        assert eliminate_equalities_rule(rule) == [rule]

    def test_cycle_through_two_equalities(self, program):
        (rule,) = [r for r in desugar_rule(program("cyclic_equality").rules[0]) if r.head.term is not EMPTY]

        with pytest.raises(CyclicEquality):
            eliminate_equalities_rule(rule)

    def test_jaegd(self):
        (result,) = eliminate_equalities_jaegd(parse_jaegd("D($x:@i), D($y:@j), $x = $y -> @i = @j."))

        assert str(result) == "D($u1:@i), D($u1:@j) -> @i = @j."

    def test_program(self, program):
        p = program("length_two")

        assert eliminate_equalities_program(p) == p
