"""
Tests for matching and stratified evaluation

Run with: pytest tests/test_engine.py -v
"""

import copy

import pytest

from engine.evaluator import Evaluator, eval_query, eval_rule, join_order
from engine.matching import match_items, match_predicate
from language.desugar import desugar
from language.parser import parse, parse_rule
from models.errors import LimitExceeded, NotStratifiable, UnsafeRule, VocabMismatch
from models.objects import apply_permutation, is_proper, od_encode
from models.program import Const, Literal, PackExpr, Predicate, Rule, Var, literal_variables
from models.terms import EMPTY, Fact, Instance, Packed
from models.validation import EvalLimits
from tests.oracles import eval_rule_brute, flat_pairs, random_tree, trees_equal

X, Y = Var("x", Var.PATH), Var("y", Var.PATH)
I = Var("i", Var.ATOMIC)


class TestMatching:
    """Cutting a path into pieces"""

    def test_two_path_variables_split_every_way(self):
        splits = list(match_items((X, Y), ("a", "b", "c"), {}))

        assert [(v[X], v[Y]) for v in splits] == [(("a",), ("b", "c")), (("a", "b"), ("c",))]

    def test_atomic_variable_takes_one_atomic_key(self):
        assert list(match_items((I,), (Packed(("a",)),), {})) == []
        assert list(match_items((I, X), ("a", "b"), {})) == [{I: "a", X: ("b",)}]

    def test_bound_variable_must_agree(self):
        assert list(match_items((X, Const("c"), X), ("a", "c", "a"), {})) == [{X: ("a",)}]
        assert list(match_items((X, Const("c"), X), ("a", "c", "b"), {})) == []

    def test_packed_expression_matches_inside(self):
        found = list(match_items((PackExpr((X,)), I), (Packed(("a", "b")), "c"), {}))

        assert found == [{X: ("a", "b"), I: "c"}]

    def test_term_matching(self):
        pred = Predicate("R", (X,), I)

        assert list(match_predicate(pred, ("a",), EMPTY, {})) == []
        assert list(match_predicate(pred, ("a",), "1", {})) == [{I: "1", X: ("a",)}]

    def test_join_order_prefers_shared_variables(self):
        rule = parse_rule("S(a:{}) :- A($x:{}), B($y:{}), C($x.$y:{}).")

        assert [p.relation for p in join_order(rule.body)] == ["A", "C", "B"]


class TestRules:
    """Single rule application"""

    def test_cartesian_product(self, program, instance):
        """Each pair of top-level keys gets a packed key"""
        output = eval_query(program("cartesian"), instance("cartesian"))

        expected = set()
        for x, u in (("a", "1"), ("b", "2")):
            for y, v in (("c", "3"), ("d", "4")):
                expected.add(Fact("T", (Packed((x, y)), "r", x, "n"), u))
                expected.add(Fact("T", (Packed((x, y)), "s", y, "m"), v))
        assert set(output.facts()) == expected
        assert is_proper(output.pairs("T"))

    def test_unnest(self, program, instance):
        output = eval_query(program("unnest"), instance("family"))

        key = Packed(("children", "2"))
        assert set(output.facts()) == {Fact("S", (key, "name"), "John"), Fact("S", (key, "age"), "18")}

    def test_nest(self, program, instance):
        output = eval_query(program("nest"), instance("references"))

        assert set(output.facts()) == {
            Fact("S", ("order", "ref", Packed(("catalog", "x"))), "widget"),
            Fact("S", ("order", "ref", Packed(("catalog", "y")), "color"), "red"),
            Fact("S", ("order", "qty"), "2"),
            Fact("S", ("catalog", "x", "p1"), "widget"),
            Fact("S", ("catalog", "y", "p1", "color"), "red"),
        }

    def test_strip_top_layer_may_be_improper(self, program, instance):
        output = eval_query(program("strip_top_layer"), instance("layered"))

        assert Fact("S", ("k",), "1") in output
        assert not is_proper(output.pairs("S"))

    def test_shift_equality_keeps_runs_of_a(self, program):
        data = Instance({"R": {(("a", "a"), EMPTY), (("a", "b"), EMPTY)}})
        output = eval_query(program("shift_equality"), data)

        assert set(output.facts()) == {Fact("S", ("a", "a"), EMPTY)}

    def test_unsatisfiable_equality(self):
        rule = parse_rule("S($x:{}) :- R($x:{}), a.$x = b.$x.")

        assert eval_rule(rule, Instance({"R": {(("a",), EMPTY)}})) == set()

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("S(a:{}) :- R(a:@u), @u != {}.", {Fact("S", ("a",), EMPTY)}),
            ("S(a:{}) :- R(a:@u), @u = {}.", set()),
        ],
    )
    def test_atomic_value_never_equals_empty_object(self, text, expected):
        output = eval_query(parse(text), Instance({"R": {(("a",), "1")}}))

        assert set(output.facts()) == expected

    def test_empty_body_fires_once(self):
        assert eval_rule(parse_rule("S(a:{}) :- ."), Instance()) == {Fact("S", ("a",), EMPTY)}

    def test_matches_brute_force(self, rng, budget):
        """Evaluator and exhaustive valuation search agree on random rules"""
        pool = [Var("x", Var.ATOMIC), Var("y", Var.ATOMIC), X, Y, Const("a")]
        pairs = flat_pairs(["a", "b"], 3, [EMPTY, "a"])
        for _ in range(budget(40, 400)):
            items = tuple(rng.choice(pool) for _ in range(rng.randint(1, 3)))
            term = rng.choice([EMPTY, I])
            body = [Literal(Predicate("R", items, term))]
            if rng.random() < 0.5:
                body.append(Literal(Predicate("R", tuple(rng.choice(pool) for _ in range(2)), EMPTY), rng.random() < 0.5))
            if not literal_variables(body) <= literal_variables([lit for lit in body if lit.positive]):
                continue
            head = Predicate("S", tuple(reversed(items)), term)
            rule = Rule(head, tuple(body))
            data = Instance({"R": rng.sample(pairs, rng.randint(1, 4))})

            assert eval_rule(rule, data) == eval_rule_brute(rule, data), str(rule)

    @pytest.mark.parametrize(
        "name,data",
        [("cartesian", "cartesian"), ("nest", "references"), ("bad_filter", "layered"), ("deep_equality", "deep_equal")],
    )
    def test_body_order_does_not_matter(self, program, instance, rng, budget, name, data):
        original, i = program(name), instance(data)
        expected = eval_query(original, i)
        for _ in range(budget(5, 50)):
            shuffled = [Rule(r.head, tuple(rng.sample(r.body, len(r.body))), r.span) for r in original.rules]

            assert eval_query(original.with_rules(shuffled), i) == expected


class TestPrograms:
    """Stratified programs and limits"""

    def test_deep_equality_detects_equal(self, program, instance):
        output = eval_query(program("deep_equality"), instance("deep_equal"))

        assert set(output.facts()) == {Fact("Q", ("yes",), EMPTY)}

    def test_deep_equality_detects_unequal(self, program, instance):
        output = eval_query(program("deep_equality"), instance("deep_unequal"))

        assert len(output) == 0
        assert output.names == {"Q"}

    def test_deep_equality_on_random_trees(self, program, rng, budget):
        """Q(yes) is derived exactly when the two subobjects are equal"""
        deep = program("deep_equality")
        for _ in range(budget(30, 300)):
            left = random_tree(rng, 3)
            right = copy.deepcopy(left) if rng.random() < 0.4 else random_tree(rng, 3)
            data = Instance({"R": od_encode({"a": left, "b": right})})

            derived = Fact("Q", ("yes",), EMPTY) in eval_query(deep, data)

            assert derived == trees_equal(left, right), (left, right)

    @pytest.mark.parametrize(
        "name,data",
        [("interleave_packing", "sequence"), ("nest", "references"), ("deep_equality", "deep_equal"), ("bad_filter", "layered")],
    )
    def test_naive_and_semi_naive_agree(self, program, instance, name, data):
        p, i = program(name), instance(data)

        assert Evaluator(naive=True).eval_program(p, i) == Evaluator().eval_program(p, i)

    def test_interleave_with_packed_cursor(self, program, instance):
        output = eval_query(program("interleave_packing"), instance("sequence"))

        assert set(output.facts()) == {Fact("S", ("x", "c", "y", "c", "z", "c"), EMPTY)}

    def test_cursor_without_packing_agrees(self, program, rng, budget):
        """Both interleaving programs compute the same query on inputs without a"""
        packing, cursor = program("interleave_packing"), program("interleave_cursor")
        pairs = flat_pairs(["x", "y", "c"], 3)
        for _ in range(budget(10, 100)):
            data = Instance({"R": rng.sample(pairs, rng.randint(1, 3))})

            assert eval_query(cursor, data) == eval_query(packing, data)

    @pytest.mark.parametrize(
        "name,tree,permutation",
        [
            ("copy", lambda rng: random_tree(rng, 3), {"a": "b", "b": "c", "c": "a", "1": "2", "2": "1"}),
            ("bad_filter", lambda rng: random_tree(rng, 3), {"a": "c", "c": "a", "1": "2", "2": "1"}),
            ("nest", lambda rng: random_tree(rng, 3, ("ref", "x", "y"), ("x", "y")), {"x": "y", "y": "x"}),
            (
                "deep_equality",
                lambda rng: {"a": random_tree(rng, 2, ("c", "d")), "b": random_tree(rng, 2, ("c", "d"))},
                {"c": "d", "d": "c", "1": "2", "2": "1"},
            ),
        ],
    )
    def test_renaming_keys_commutes_with_queries(self, program, rng, budget, name, tree, permutation):
        """Keys the program never mentions can be renamed before or after evaluation"""
        p = program(name)
        for _ in range(budget(10, 100)):
            data = Instance({"R": od_encode(tree(rng))})

            renamed_first = eval_query(p, apply_permutation(permutation, data))

            assert renamed_first == apply_permutation(permutation, eval_query(p, data))

    @pytest.mark.parametrize(
        "name,alphabet,values",
        [
            ("copy", ["a", "b"], [EMPTY, "1"]),
            ("unnest", ["k", "name", "age"], ["John", "1"]),
            ("cartesian", ["a", "c"], ["1"]),
            ("interleave_packing", ["x", "c"], [EMPTY]),
        ],
    )
    def test_positive_programs_are_monotone(self, program, rng, budget, name, alphabet, values):
        p = program(name)
        pairs = flat_pairs(alphabet, 3, values)
        for _ in range(budget(10, 100)):
            larger = {rel: rng.sample(pairs, rng.randint(1, 4)) for rel in sorted(p.input_names)}
            smaller = {rel: chosen[: rng.randint(0, len(chosen))] for rel, chosen in larger.items()}

            small = set(eval_query(p, Instance(smaller)).facts())
            assert small <= set(eval_query(p, Instance(larger)).facts())

    @pytest.mark.parametrize(
        "name,data",
        [("nest", "references"), ("bad_filter", "layered"), ("deep_equality", "deep_equal"), ("interleave_packing", "sequence")],
    )
    def test_result_is_a_supported_fixpoint(self, program, instance, name, data):
        """No rule derives anything new, and every derived fact comes from some rule"""
        p, i = program(name), instance(data)
        result = Evaluator().eval_program(p, i)
        derived = set()
        for rule in desugar(p).rules:
            derived |= eval_rule(rule, result)

        assert derived <= set(result.facts())
        assert set(result.facts()) - set(i.facts()) <= derived

    def test_bad_filter_output_is_proper(self, program, instance):
        output = eval_query(program("bad_filter"), instance("layered"))

        assert is_proper(output.pairs("S"))
        assert Fact("S", ("k",), "1") in output
        assert Fact("S", ("l",), "3") in output
        assert Fact("S", ("l", "m"), "2") not in output

    def test_nonterminating_hits_fact_limit(self, program):
        with pytest.raises(LimitExceeded) as excinfo:
            Evaluator(EvalLimits(max_derived_facts=50)).eval_program(program("nonterminating"), Instance())

        assert excinfo.value.kind == "derived_facts"

    def test_nonterminating_hits_path_limit(self, program):
        with pytest.raises(LimitExceeded) as excinfo:
            Evaluator(EvalLimits(max_path_length=5)).eval_program(program("nonterminating"), Instance())

        assert excinfo.value.kind == "path_length"

    def test_pack_depth_limit(self):
        nested = parse("S(<$x>:{}) :- R($x:{}).\nS(<$x>:{}) :- S($x:{}).")

        with pytest.raises(LimitExceeded) as excinfo:
            Evaluator(EvalLimits(max_pack_depth=3)).eval_program(nested, Instance({"R": {(("a",), EMPTY)}}))

        assert excinfo.value.kind == "pack_depth"

    def test_unsafe_program_rejected(self, program):
        with pytest.raises(UnsafeRule):
            eval_query(program("unsafe"), Instance())

    def test_unstratified_program_rejected(self, program):
        with pytest.raises(NotStratifiable):
            eval_query(program("unstratified"), Instance())

    def test_instance_must_not_define_derived_relations(self, program):
        with pytest.raises(VocabMismatch):
            eval_query(program("copy"), Instance({"S": {(("a",), EMPTY)}}))

    def test_instance_outside_declared_inputs(self, program):
        with pytest.raises(VocabMismatch):
            eval_query(program("nest"), Instance({"X": {(("a",), EMPTY)}}))

    def test_eval_program_keeps_inputs(self, program, instance):
        result = Evaluator().eval_program(program("copy"), instance("layered"))

        assert result.pairs("R") == result.pairs("S")
