"""
Tests for jaegds, homomorphisms and the chase

Run with: pytest tests/test_chase.py -v
"""

import pytest

from chase.dependencies import delta_for, delta_for_all, satisfies, satisfies_all, violation
from chase.morphisms import find_homomorphisms, find_weak_morphisms, is_variable_mapping
from chase.procedure import chase, chase_rule, decide_implication
from language.parser import parse_jaegd, parse_rule
from models.objects import is_proper
from models.program import Const, Var
from models.terms import EMPTY, Instance
from models.validation import ChaseKind, ImplicationKind
from tests.oracles import counterexample_to_implication, flat_instances, random_jaegd
from unification.elimination import eliminate_equalities_jaegd
from utils.config import get_data_path
from utils.data_loaders import load_jaegds


def _jaegds(name):
    return load_jaegds(get_data_path(f"jaegds/{name}.jl"))


class TestDependencies:
    """Properness jaegds and satisfaction on instances"""

    def test_delta_has_six_jaegds(self):
        deltas = delta_for("R")

        assert len(deltas) == 6
        assert str(deltas[0]) == "R($x:@i), R($x:@j) -> @i = @j."
        assert all(d.is_denial for d in deltas[1:])

    def test_delta_for_all_is_sorted(self):
        relations = [d.predicates()[0].relation for d in delta_for_all({"S", "R"})]

        assert relations == ["R"] * 6 + ["S"] * 6

    @pytest.mark.parametrize("name", ["improper_fd", "improper_prefix", "layered", "family", "sequence"])
    def test_delta_characterizes_properness(self, instance, name):
        """An instance satisfies the properness jaegds exactly when R is proper"""
        data = instance(name)

        assert satisfies_all(data, delta_for("R")) == bool(is_proper(data.pairs("R")))

    def test_violation_binding(self, instance):
        binding = violation(instance("improper_fd"), delta_for("R")[0])

        assert binding[Var("x", Var.PATH)] == ("a",)
        assert {binding[Var("i", Var.ATOMIC)], binding[Var("j", Var.ATOMIC)]} == {"1", "2"}

    def test_denial(self):
        denial = parse_jaegd("D(a:1), D(a:2) -> false.")

        assert not satisfies(Instance({"D": {(("a",), "1"), (("a",), "2")}}), denial)
        assert satisfies(Instance({"D": {(("a",), "1")}}), denial)


class TestMorphisms:
    """Homomorphisms between bodies"""

    def test_path_variable_takes_a_sequence(self):
        source = parse_jaegd("D($x:@i) -> false.").body
        target = parse_jaegd("D($y.b:@j) -> false.").body
        (h,) = find_homomorphisms(source, target)

        assert h[Var("x", Var.PATH)] == (Var("y", Var.PATH), Const("b"))
        assert h[Var("i", Var.ATOMIC)] == Var("j", Var.ATOMIC)

    def test_atomic_variable_needs_atomic_image(self):
        source = parse_jaegd("P(@x:{}) -> false.").body
        target = parse_jaegd("P($x:{}) -> false.").body

        assert find_homomorphisms(source, target) == []
        (weak,) = find_weak_morphisms(source, target)
        assert not is_variable_mapping(weak)


class TestChase:
    """Chasing jaegds and deciding implication"""

    def test_functional_dependency_violation_is_implied(self):
        """Two values under one path contradict the path-to-value dependency"""
        (sigma,) = _jaegds("fd_violation")
        verdict = decide_implication(sigma, delta_for("D"))

        assert verdict.kind == ImplicationKind.IMPLIED
        assert verdict.chase == ChaseKind.FAILED
        assert verdict.steps == 1

    def test_chase_merges_variables(self):
        sigma = parse_jaegd("D($x.b:@i), D($x.b:@j) -> @i = @j.")
        outcome = chase(sigma, delta_for("D"))

        assert not outcome.failed
        assert outcome.trivial_consequent
        assert str(outcome.result) == "D($x.b:@i) -> @i = @i."
        assert outcome.substitutions == [(Var("j", Var.ATOMIC), Var("i", Var.ATOMIC))]

    def test_equalities_eliminated_before_chasing(self):
        deps = delta_for("D")
        for sigma in _jaegds("fd_consequence"):
            for form in eliminate_equalities_jaegd(sigma):
                assert decide_implication(form, deps).implied

    def test_not_implied_when_unambiguous(self):
        sigma = parse_jaegd("D($x:@i), D($y:@j) -> @i = @j.")
        verdict = decide_implication(sigma, delta_for("D"))

        assert verdict.kind == ImplicationKind.NOT_IMPLIED
        assert verdict.chase == ChaseKind.SUCCEEDED
        assert verdict.steps == 0

        counterexample = Instance({"D": {(("a",), "1"), (("b",), "2")}})
        assert satisfies_all(counterexample, delta_for("D"))
        assert not satisfies(counterexample, sigma)

    def test_incompleteness_is_reported_as_ambiguous(self):
        """No chase step applies, yet every instance satisfies sigma"""
        (sigma,) = _jaegds("unambiguity_sigma")
        verdict = decide_implication(sigma, _jaegds("unambiguity_deps"))

        assert verdict.kind == ImplicationKind.AMBIGUOUS
        assert verdict.chase == ChaseKind.SUCCEEDED
        assert verdict.witness == {"@x": "$x"}
        assert not verdict.implied

    def test_constant_substitution(self):
        sigma = parse_jaegd("D(a:@i), D(a:1), D(b:@i) -> @i = 1.")
        outcome = chase(sigma, delta_for("D"))

        assert outcome.trivial_consequent
        assert (Var("i", Var.ATOMIC), Const("1")) in outcome.substitutions

    def test_chase_rule_rewrites_head(self):
        failed, chased = chase_rule(parse_rule("S($x:@j) :- D($x:@i), D($x:@j)."), delta_for("D"))

        assert not failed
        assert str(chased) == "S($x:@i) :- D($x:@i)."

    def test_chase_rule_failure(self):
        failed, chased = chase_rule(parse_rule("S(a:{}) :- D(a:1), D(a.b:{})."), delta_for("D"))

        assert failed
        assert chased is None

    def test_chase_requires_equality_free_body(self):
        with pytest.raises(ValueError):
            chase(parse_jaegd("D($x:@i), $x = a -> false."), delta_for("D"))

    def test_implied_verdicts_are_sound(self, rng, budget):
        """No small instance satisfies the dependencies but violates an implied jaegd"""
        candidates = list(flat_instances("D", ["a", "b"], 2, 2, [EMPTY, "a"]))
        for _ in range(budget(15, 300)):
            deps = [random_jaegd(rng, 2) for _ in range(rng.randint(1, 2))]
            sigma = random_jaegd(rng, 2)
            if not decide_implication(sigma, deps).implied:
                continue

            assert counterexample_to_implication(deps, sigma, candidates) is None, (
                [str(d) for d in deps],
                str(sigma),
            )

    def test_dependency_order_does_not_matter(self, rng, budget):
        """Chasing with the dependencies in another order ends in the same jaegd up to renaming"""
        for _ in range(budget(20, 300)):
            deps = delta_for("D") + [random_jaegd(rng, 2) for _ in range(rng.randint(1, 2))]
            sigma = random_jaegd(rng, 3)
            first = chase(sigma, deps)
            second = chase(sigma, rng.sample(deps, len(deps)))

            assert first.failed == second.failed, str(sigma)
            if first.failed:
                continue
            assert first.trivial_consequent == second.trivial_consequent
            assert len(first.result.body) == len(second.result.body)
            assert find_homomorphisms(first.result.body, second.result.body)
            assert find_homomorphisms(second.result.body, first.result.body)
