"""
Tests for tensor implications, tensor negation and Boolean centers
"""

import pytest

from src.errors import ModelConstructionError, TypeMismatchError
from src.biposet import is_coquasisymmetric
from src.heyting import (
    boolean_center, boolean_connectives, center_model, center_reflection_check, check_functional_complements,
    classical_connectives, dn_closed_terms, double_negation, functoriality_lemma_check, heyting_center,
    is_heyting_coquasisymmetric, make_heyting, pole_of, same_structure, tensor_imply, tensor_negation,
    validate_boolean_category, validate_heyting,
)
from src.models import build_model, relation_term, truncated_difference
from src.reports import Report


def _t(H, label):
    return H.term(H.types[0], H.types[0], label)


class TestTropical:
    def test_truncated_difference(self, trop8):
        assert trop8.label(trop8.right_imply(_t(trop8, "5"), _t(trop8, "3"))) == "2"
        assert trop8.label(trop8.right_imply(_t(trop8, "3"), _t(trop8, "5"))) == "0"
        assert trop8.label(trop8.right_imply(_t(trop8, "inf"), _t(trop8, "4"))) == "inf"

    def test_left_and_right_agree_on_a_commutative_model(self, trop8):
        for s in trop8.all_terms():
            for r in trop8.all_terms():
                assert trop8.left_imply(r, s) == trop8.right_imply(s, r)

    @pytest.mark.parametrize("s,r", [(5, 3), (3, 5), (8, 0), (0, 8), (7, 7)])
    def test_closed_form(self, trop8, s, r):
        got = trop8.right_imply(_t(trop8, str(s)), _t(trop8, str(r)))
        assert trop8.value(got) == truncated_difference(s, r)

    def test_unit_is_neutral(self, trop8):
        zero = trop8.identity(trop8.types[0])
        assert all(trop8.compose(zero, r) == r == trop8.compose(r, zero) for r in trop8.all_terms())

    def test_negation_collapses_to_top(self, trop8):
        top = trop8.top("*", "*")
        assert all(trop8.negate(r) == top for r in trop8.all_terms())
        assert dn_closed_terms(trop8, "*", "*") == {top}

    def test_wrapping_saturation_is_rejected(self):
        with pytest.raises(ModelConstructionError):
            build_model("trop:8,wrap")

    def test_capped_saturation_is_accepted(self):
        assert validate_heyting(build_model("trop:4,cap")).passed


class TestRelations:
    @pytest.mark.parametrize("pairs,expected", [
        ([(0, 0), (1, 1)], "{00,11}"),
        ([], "{00,01,10,11}"),
        ([(0, 0), (0, 1), (1, 0), (1, 1)], "{}"),
        ([(0, 1), (1, 0)], "{01,10}"),
    ])
    def test_negations(self, rel22, pairs, expected):
        r = relation_term(rel22, "t0", "t0", pairs)
        assert rel22.label(rel22.negate(r)) == expected

    def test_negation_of_a_cross_relation(self, rel22):
        r = relation_term(rel22, "t0", "t1", [(0, 1)])
        n = rel22.negate(r)
        assert n.hom == ("t1", "t0")
        assert rel22.label(n) == "{01,10}"

    def test_implications_invert_the_swap(self, rel2):
        swap = relation_term(rel2, "t0", "t0", [(0, 1), (1, 0)])
        ident = rel2.identity("t0")
        assert rel2.right_imply(ident, swap) == swap
        assert rel2.left_imply(swap, ident) == swap

    def test_implication_types(self, rel21):
        r = rel21.top("t0", "t1")
        with pytest.raises(TypeMismatchError):
            rel21.right_imply(r, rel21.top("t1", "t0"))

    def test_functional_complements(self, rel21):
        report = check_functional_complements(rel21, Report("complements"))
        assert report.passed, report.lines()


class TestLaws:
    @pytest.mark.parametrize("descriptor", ["bool2", "trop:8", "rel:2,2", "cyclic:3", "powerset:2", "lang:ab,1"])
    def test_validate_heyting(self, descriptor):
        report = validate_heyting(build_model(descriptor))
        assert report.passed, report.lines()

    @pytest.mark.parametrize("descriptor", ["rel:2,2", "cyclic:3", "trop:8"])
    def test_functoriality_lemma(self, descriptor):
        assert functoriality_lemma_check(build_model(descriptor)).passed


class TestBooleanCenter:
    def test_center_of_rel2(self, rel2):
        Bc = boolean_center(rel2)
        labels = sorted(Bc.label(t) for t in Bc.terms("t0", "t0"))
        assert labels == ["{00,01,10,11}", "{00,11}", "{01,10}", "{}"]
        swap = Bc.term("t0", "t0", "{01,10}")
        assert Bc.negate(swap) == swap
        assert Bc.label(Bc.tensor(swap, swap)) == "{00,11}"
        assert Bc.label(Bc.negate(Bc.zero("t0", "t0"))) == "{00,01,10,11}"

    def test_lift_returns_parent_terms(self, rel2):
        Bc = boolean_center(rel2)
        swap = Bc.term("t0", "t0", "{01,10}")
        assert rel2.label(Bc.lift(swap)) == "{01,10}"

    def test_trivial_centers(self, bool2, trop8):
        assert boolean_center(bool2).carrier_size() == 1
        assert boolean_center(trop8).carrier_size() == 1

    def test_cyclic_center(self, cyclic3):
        Bc = boolean_center(cyclic3)
        labels = sorted(Bc.label(t) for t in Bc.terms("*", "*"))
        assert labels == ["{0,1,2}", "{0}", "{1}", "{2}", "{}"]
        assert validate_boolean_category(Bc).passed

    @pytest.mark.parametrize("descriptor", ["bool2", "trop:8", "rel:2,2", "center:rel:2,2", "cyclic:3"])
    def test_center_reflection(self, descriptor):
        report = center_reflection_check(build_model(descriptor))
        assert report.passed, report.lines()

    def test_round_trip_structure(self, rel2):
        Bc = boolean_center(rel2)
        assert same_structure(Bc, boolean_center(heyting_center(Bc)))

    def test_center_model_is_heyting(self, rel2):
        Z = center_model(rel2)
        assert len(Z.terms("t0", "t0")) == 4
        assert validate_heyting(Z).passed


class TestOperations:
    def test_tensor_imply_sides(self, trop8):
        five, three = _t(trop8, "5"), _t(trop8, "3")
        assert trop8.label(tensor_imply(trop8, "right", five, three)) == "2"
        assert tensor_imply(trop8, "left", three, five) == tensor_imply(trop8, "right", five, three)
        with pytest.raises(ValueError):
            tensor_imply(trop8, "up", five, three)

    def test_negation_in_rel(self, rel2):
        ident = rel2.identity("t0")
        assert tensor_negation(rel2, ident) == ident
        assert rel2.label(tensor_negation(rel2, _t(rel2, "{00,01}"))) == "{}"
        assert double_negation(rel2, _t(rel2, "{00}")) == ident
        assert rel2.is_closed(_t(rel2, "{01,10}"))
        assert not rel2.is_closed(_t(rel2, "{00,01}"))

    def test_connectives_in_rel(self, rel2):
        ident = rel2.identity("t0")
        pair = classical_connectives(rel2, ident, ident)
        assert pair.otimes == ident
        assert pair.nabla == ident
        bools = boolean_connectives(rel2, _t(rel2, "{00}"), _t(rel2, "{11}"))
        assert rel2.label(bools.oplus) == "{00,11}"
        assert rel2.label(bools.triangle) == "{}"

    @pytest.mark.parametrize("label,expected", [
        ("{00,01}", "{}"),
        ("{00,11}", "{00,11}"),
        ("{00,01,10}", "{01,10}"),
    ])
    def test_pole(self, rel2, label, expected):
        assert rel2.label(pole_of(rel2, _t(rel2, label))) == expected

    def test_coquasisymmetry_readings_differ(self, rel2):
        top = rel2.top("t0", "t0")
        assert is_heyting_coquasisymmetric(rel2, top)
        assert not is_coquasisymmetric(rel2, top)
        swap = _t(rel2, "{01,10}")
        assert is_heyting_coquasisymmetric(rel2, swap) and is_coquasisymmetric(rel2, swap)
        assert not is_heyting_coquasisymmetric(rel2, _t(rel2, "{00,01}"))

    def test_make_heyting_keeps_heyting_models(self, rel2):
        assert make_heyting(rel2) is rel2
