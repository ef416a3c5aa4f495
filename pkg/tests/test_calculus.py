"""
Tests for formulas, tensor negation, sequents, rule checking and bounded proof search
"""

import pytest
from hypothesis import given, settings, strategies as st

from src.calculus import (
    DEFAULT_RULES, Atom, BoolProd, BoolSum, DualAtom, Entailment, Equivalence, FormulaGenerator, IdType, One,
    Orthogonality, Sequent, Tensor, TensorSum, Zero, check_derivation, derive_nabla_monotonicity, equal_modulo,
    first_failure, lift_vector_entailment, make_language, negate_formula, node, prove_bounded, sequent_product,
    sequent_sum, sequent_tensor_terms, vector_negation,
)
from src.errors import IllTypedFormulaError, UnknownRuleError, UnmappedSymbolError

seeds = st.integers(min_value=0, max_value=10_000)


@pytest.fixture(scope="module")
def L():
    return make_language(["x", "y"], [("a", "x", "y"), ("c", "x", "x")])


@pytest.fixture
def a(L):
    return L.atom("a")


@pytest.fixture
def c(L):
    return L.atom("c")


class TestLanguage:
    def test_unknown_type(self):
        with pytest.raises(UnmappedSymbolError):
            make_language(["x"], [("a", "x", "z")])

    def test_duplicate_atom(self):
        with pytest.raises(IllTypedFormulaError):
            make_language(["x"], [("a", "x", "x"), ("a", "x", "x")])

    def test_unknown_atom(self, L):
        with pytest.raises(UnmappedSymbolError):
            L.atom("zz")

    def test_literals_include_duals(self, L):
        assert [str(lit) for lit in L.literals()] == ["(atom a x y)", "(dual a)", "(atom c x x)", "(dual c)"]

    def test_contains_checks_typing(self, L):
        assert L.contains(Tensor(L.atom("a"), L.dual("a")))
        assert not L.contains(Atom("a", "x", "x"))
        assert not L.contains(Atom("b", "x", "y"))


class TestFormulas:
    def test_s_expressions(self, a):
        assert str(Tensor(a, ~a)) == "(ot (atom a x y) (dual a))"
        assert str(BoolSum(Zero("x", "y"), One("x", "y"))) == "(bs (zero x y) (one x y))"
        assert str(IdType("x")) == "(id x)"

    def test_ill_typed_connectives(self, a):
        with pytest.raises(IllTypedFormulaError):
            Tensor(a, a)
        with pytest.raises(IllTypedFormulaError):
            BoolSum(a, ~a)

    def test_ill_typed_assertions(self, a):
        with pytest.raises(IllTypedFormulaError):
            Entailment(a, ~a)
        with pytest.raises(IllTypedFormulaError):
            Orthogonality(a, a)

    def test_negation_reverses_typing(self, a):
        n = negate_formula(a)
        assert isinstance(n, DualAtom)
        assert n.typing == ("y", "x")
        assert negate_formula(Zero("x", "y")) == One("y", "x")
        assert negate_formula(IdType("x")) == IdType("x")

    def test_negation_swaps_connectives(self, a, c):
        assert ~Tensor(c, a) == TensorSum(~a, ~c)
        assert ~BoolProd(a, a) == BoolSum(~a, ~a)

    @given(seeds, st.integers(min_value=0, max_value=4))
    def test_negation_is_involutive(self, seed, depth):
        L = make_language(["x", "y"], [("a", "x", "y"), ("c", "x", "x")])
        phi = FormulaGenerator(L, seed).formula(depth=depth)
        assert negate_formula(negate_formula(phi)) == phi
        assert negate_formula(phi).typing == (phi.target, phi.source)


class TestSequents:
    def test_empty_needs_a_base(self):
        with pytest.raises(IllTypedFormulaError):
            Sequent(())
        assert len(Sequent.empty("x")) == 0

    def test_broken_path(self, a):
        with pytest.raises(IllTypedFormulaError):
            Sequent((a, a))

    def test_product_and_sum(self, a):
        alpha = Sequent((a, ~a))
        assert sequent_product(alpha) == Tensor(a, Tensor(~a, IdType("x")))
        assert sequent_sum(alpha) == TensorSum(TensorSum(IdType("x"), a), ~a)
        assert vector_negation(alpha).formulas == (a, ~a)

    def test_empty_sequent_terms(self):
        terms = sequent_tensor_terms(Sequent.empty("y"))
        assert terms.product == terms.sum == IdType("y")
        assert terms.vneg.source == "y"

    @given(seeds, st.integers(min_value=0, max_value=4))
    def test_negation_turns_products_into_sums(self, seed, length):
        L = make_language(["x", "y"], [("a", "x", "y"), ("c", "x", "x")])
        alpha = FormulaGenerator(L, seed).sequent(length)
        assert negate_formula(sequent_product(alpha)) == sequent_sum(vector_negation(alpha))


class TestChecking:
    def test_logical_axiom(self, L, a):
        report = check_derivation(L, node("logical axiom", Orthogonality(a, ~a)))
        assert report.passed
        assert first_failure(report) is None

    def test_hyphenated_rule_names(self, L, a):
        assert "logical-axiom" in DEFAULT_RULES
        assert check_derivation(L, node("logical-axiom", Orthogonality(a, ~a))).passed

    def test_unknown_rule(self, L, a):
        with pytest.raises(UnknownRuleError):
            check_derivation(L, node("magic", Entailment(a, a)))

    def test_first_failing_node_is_reported(self, L, a):
        good = node("reflexivity", Entailment(a, a))
        bad = node("reflexivity", Entailment(a, BoolSum(a, a)))
        d = node("transitivity", Entailment(a, BoolSum(a, a)), good, bad)
        report = check_derivation(L, d)
        assert not report.passed
        assert first_failure(report).startswith("node root.1 (reflexivity)")

    def test_wrong_conclusion(self, L, a):
        premise = node("reflexivity", Entailment(a, a))
        d = node("contravariance", Entailment(a, a), premise)
        assert first_failure(check_derivation(L, d)).startswith("node root (contravariance)")

    def test_foreign_symbols(self, L):
        b = Atom("b", "x", "y")
        assert not check_derivation(L, node("reflexivity", Entailment(b, b))).passed

    def test_derived_nabla_monotonicity(self, L, a):
        d = derive_nabla_monotonicity(node("reflexivity", Entailment(a, a)), node("reflexivity", Entailment(~a, ~a)))
        assert d.conclusion == Entailment(TensorSum(a, ~a), TensorSum(a, ~a))
        assert check_derivation(L, d).passed

    def test_lifted_vector_entailment(self, L, a):
        d = lift_vector_entailment([node("reflexivity", Entailment(a, a)), node("reflexivity", Entailment(~a, ~a))])
        assert d.conclusion.left == sequent_product(Sequent((a, ~a)))
        assert check_derivation(L, d).passed

    @settings(max_examples=60, deadline=None)
    @given(seeds, st.integers(min_value=1, max_value=5))
    def test_generated_derivations_check(self, seed, depth):
        L = make_language(["x", "y"], [("a", "x", "y"), ("c", "x", "x")])
        d = FormulaGenerator(L, seed).derivation(depth)
        report = check_derivation(L, d)
        assert report.passed, first_failure(report)


class TestSearch:
    def test_reflexivity(self, L, a):
        d = prove_bounded(L, Entailment(a, a))
        assert d.rule == "reflexivity" and d.size == 1

    def test_logical_axiom(self, L, a):
        d = prove_bounded(L, Orthogonality(a, ~a))
        assert d.rule == "logical axiom"

    def test_found_proofs_check(self, L, a):
        d = prove_bounded(L, Entailment(BoolSum(a, a), a), depth=3)
        assert d is not None and d.depth <= 3
        assert check_derivation(L, d).passed

    def test_depth_bound(self, L, a):
        assert prove_bounded(L, Entailment(BoolSum(a, a), a), depth=1) is None

    def test_duplication_is_not_derivable(self, L, c):
        assert prove_bounded(L, Entailment(c, Tensor(c, c)), depth=3) is None

    def test_foreign_goal(self, L):
        b = Atom("b", "x", "y")
        with pytest.raises(UnmappedSymbolError):
            prove_bounded(L, Entailment(b, b))

    def test_bottom(self, L, a):
        d = prove_bounded(L, Entailment(Zero(*a.typing), a))
        assert d.rule == "bottom" and d.size == 1

    def test_orthogonal_to_a_meet_of_duals(self, L, a):
        goal = Orthogonality(a, BoolProd(~a, ~a))
        found = prove_bounded(L, goal)
        assert found is not None and found.conclusion == goal
        assert check_derivation(L, found).passed
        by_hand = node("symmetry", goal,
                       node("1st △", Orthogonality(BoolProd(~a, ~a), a),
                            node("logical axiom", Orthogonality(~a, a))))
        assert check_derivation(L, by_hand).passed

    def test_equivalence(self, L, a):
        assert equal_modulo(L, a, BoolSum(a, a), depth=3) is Equivalence.EQUIVALENT
        with pytest.raises(IllTypedFormulaError):
            equal_modulo(L, a, ~a)

    def test_unit_law_equivalence(self, L, a):
        left_unit = Tensor(IdType(a.source), a)
        assert prove_bounded(L, Entailment(left_unit, a), depth=1).rule == "identity"
        assert equal_modulo(L, left_unit, a, depth=1) is Equivalence.EQUIVALENT

    def test_models_separate_duplication(self, lang, structures):
        c = lang.atom("c")
        verdict = equal_modulo(lang, c, Tensor(c, c), depth=2, structures=structures)
        assert verdict is Equivalence.INEQUIVALENT_BY_MODEL
        assert equal_modulo(lang, c, Tensor(c, c), depth=2) is Equivalence.UNKNOWN
