"""
Tests for classical structures, validity, the soundness harness and tautology search
"""

import pytest
from hypothesis import given, settings, strategies as st

from src.calculus import (
    BoolSum, Entailment, FormulaGenerator, IdType, Orthogonality, Sequent, Tensor, TensorSum, negate_formula, node,
)
from src.errors import CapabilityError, UnmappedSymbolError
from src.semantics import (
    harness_language, interpret, interpret_sequent, is_valid, make_structure, negative_control, polar_coherence,
    soundness_harness, tautology_semidecision, weakening_instances,
)


@pytest.fixture(scope="module")
def cyclic_structure(lang):
    return make_structure("cyclic:3", {"y": "*", "x": "*"}, {"a": "{1}", "b": "{0,1,2}", "c": "{2}"}, lang)


class TestStructures:
    def test_default_structures(self, structures):
        assert [S.name for S in structures] == [
            "B(center:rel:2,2)", "B(rel:2)", "B(cyclic:3)", "B(cyclic:2)"]

    def test_interpretation_in_the_cyclic_group(self, lang, cyclic_structure):
        S = cyclic_structure
        c = lang.atom("c")
        assert S.model.label(interpret(S, Tensor(c, c))) == "{1}"
        assert S.model.label(interpret(S, BoolSum(c, lang.atom("a")))) == "{1,2}"
        assert S.interpret(IdType("x")) == S.model.identity("*")

    def test_duals_are_negations(self, lang, structures):
        for S in structures:
            a = lang.atom("a")
            assert S.interpret(negate_formula(a)) == S.model.negate(S.interpret(a))

    def test_unknown_atom(self, lang):
        with pytest.raises(UnmappedSymbolError):
            make_structure("cyclic:3", {"y": "*", "x": "*"}, {"z": "{1}"}, lang)

    def test_unmapped_type(self, lang):
        with pytest.raises(UnmappedSymbolError):
            make_structure("cyclic:3", {"y": "*"}, {"a": "{1}"}, lang)

    def test_missing_atom(self, lang):
        with pytest.raises(UnmappedSymbolError):
            make_structure("cyclic:3", {"y": "*", "x": "*"}, {"a": "{1}", "b": "{1}"}, lang)

    def test_model_type_must_exist(self, lang):
        with pytest.raises(UnmappedSymbolError):
            make_structure("cyclic:3", {"y": "t9", "x": "*"}, {}, lang)

    def test_structures_need_a_heyting_model(self, lang):
        with pytest.raises(CapabilityError):
            make_structure("group:3", {"y": "*", "x": "*"}, {}, lang)


class TestValidity:
    def test_entailment(self, lang, cyclic_structure):
        c = lang.atom("c")
        assert is_valid(cyclic_structure, Entailment(c, c))
        assert not is_valid(cyclic_structure, Entailment(c, Tensor(c, c)))

    def test_orthogonality(self, lang, structures):
        a = lang.atom("a")
        for S in structures:
            assert is_valid(S, Orthogonality(a, negate_formula(a)))

    def test_polarity_names(self, lang, cyclic_structure):
        alpha = Sequent((lang.atom("c"),))
        assert interpret_sequent(cyclic_structure, alpha, "polar") == cyclic_structure.interpret(lang.atom("c"))
        with pytest.raises(ValueError):
            interpret_sequent(cyclic_structure, alpha, "sideways")

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=0, max_value=3))
    def test_polar_coherence(self, seed, length):
        L = harness_language()
        alpha = FormulaGenerator(L, seed).sequent(length)
        S = make_structure("rel:2", {"y": "t0", "x": "t0"},
                           {"a": "{01,10}", "b": "{00,01,10,11}", "c": "{00,11}"}, L)
        assert polar_coherence(S, alpha)

    def test_nabla_of_units(self, lang, structures):
        for S in structures:
            unit = IdType("x")
            assert S.interpret(TensorSum(unit, unit)) == S.model.negate(S.interpret(Tensor(unit, unit)))


class TestSoundness:
    def test_generated_derivations_are_sound(self, lang, structures):
        derivations = FormulaGenerator(lang, 11).derivations(200, 4)
        report = soundness_harness(lang, derivations, structures)
        assert report.passed, report.lines()
        assert report["derivations well-formed"].failures == 0

    @pytest.mark.slow
    def test_thousand_derivations(self, lang, structures):
        derivations = FormulaGenerator(lang, 2024).derivations(1000, 6)
        report = soundness_harness(lang, derivations, structures, jobs=4)
        assert report["soundness"].failures == 0

    def test_malformed_derivations_are_counted(self, lang, structures):
        c = lang.atom("c")
        bad = node("reflexivity", Entailment(c, Tensor(c, c)))
        report = soundness_harness(lang, [bad], structures)
        assert report["derivations well-formed"].failures == 1
        assert report["soundness"].failures == 0

    def test_negative_control_fails(self, lang, structures):
        assert len(weakening_instances(lang)) == 4
        report = negative_control(lang, structures)
        assert report["derivations well-formed"].failures == 0
        assert report["soundness"].failures > 0
        assert not report.passed


class TestTautologies:
    def test_duplication_is_refuted(self, lang, structures):
        c = lang.atom("c")
        A = Entailment(c, Tensor(c, c))
        verdict = tautology_semidecision(lang, A, structures)
        assert verdict.refuted
        assert not is_valid(verdict.structure, A)
        assert str(verdict).startswith("refuted by ")

    def test_reflexivity_is_unrefuted(self, lang, structures):
        a = lang.atom("a")
        verdict = tautology_semidecision(lang, Entailment(a, a), structures)
        assert not verdict.refuted
        assert verdict.assignments > 0

    def test_assignment_limit(self, lang, structures):
        a = lang.atom("a")
        verdict = tautology_semidecision(lang, Entailment(a, a), structures, max_assignments=3)
        assert not verdict.refuted
        assert verdict.assignments == 3
