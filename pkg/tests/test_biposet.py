"""
Tests for finite biposets: construction, axioms, orthogonality, functional terms and quasisymmetry
"""

import pytest

from src.biposet import (
    Orthoterm, build_biposet, compose_orthoterms, direct_inverse_image, functional_adjoint, functional_terms,
    is_quasisymmetric, orthogonal, orthogonality, orthogonality_functor_check, orthogonality_ideal,
    quasisymmetry_center, validate_biposet,
)
from src.errors import CapabilityError, NotFunctionalError, SizeBoundError, TypeMismatchError
from src.models import build_model, relation_term


def _xor_category():
    """Z_2 under xor with 0 ≤ 1: associative and unital, but xor is not monotone"""
    return build_biposet(
        "xor", ["*"], {("*", "*"): [0, 1]},
        le=lambda y, x, a, b: a <= b,
        compose=lambda z, y, x, s, r: s ^ r,
        identity=lambda x: 0,
    )


class TestConstruction:
    def test_tables_follow_composition(self, rel2):
        s = relation_term(rel2, "t0", "t0", [(0, 1)])
        r = relation_term(rel2, "t0", "t0", [(1, 0)])
        assert rel2.label(rel2.compose(s, r)) == "{00}"
        assert rel2.label(rel2.compose(r, s)) == "{11}"

    def test_identity_and_bounds(self, rel2):
        assert rel2.label(rel2.identity("t0")) == "{00,11}"
        assert rel2.label(rel2.bottom("t0", "t0")) == "{}"
        assert rel2.label(rel2.top("t0", "t0")) == "{00,01,10,11}"

    def test_compose_needs_matching_types(self, rel21):
        r = rel21.top("t0", "t1")
        with pytest.raises(TypeMismatchError):
            rel21.compose(r, r)

    def test_lattice_capability(self):
        G = build_model("group:3")
        assert not G.has_joins
        with pytest.raises(CapabilityError):
            G.require("joins")
        with pytest.raises(CapabilityError):
            G.bottom("*", "*")

    def test_homset_bound(self, monkeypatch):
        from src.config import get_settings
        monkeypatch.setattr(get_settings(), "max_homset_size", 3)
        with pytest.raises(SizeBoundError):
            build_model("chain:4")

    def test_join_and_meet(self, rel2):
        a = relation_term(rel2, "t0", "t0", [(0, 0)])
        b = relation_term(rel2, "t0", "t0", [(1, 1)])
        assert rel2.join(a, b) == rel2.identity("t0")
        assert rel2.meet(a, b) == rel2.bottom("t0", "t0")
        assert rel2.entails(a, rel2.join(a, b))


class TestValidation:
    @pytest.mark.parametrize("descriptor", ["bool2", "trop:8", "rel:2,2", "cyclic:3", "powerset:2"])
    def test_heyting_models_pass_with_cHc(self, descriptor):
        report = validate_biposet(build_model(descriptor), ["cHc"])
        assert report.passed, report.lines()

    def test_group_skips_lattice_laws(self):
        report = validate_biposet(build_model("group:3"), ["joins", "meets"])
        assert report.passed
        assert report["join-bisemilattice distributivity"].status == "SKIP"

    def test_chain_monoid_breaks_nullary_distributivity(self):
        M = build_model("chain:3")
        assert validate_biposet(M).passed
        report = validate_biposet(M, ["joins"])
        assert not report.passed
        assert report["join-bisemilattice distributivity"].failures > 0

    def test_non_monotone_composition_is_caught(self):
        report = validate_biposet(_xor_category())
        assert report["associativity"].passed
        assert report["unitality"].passed
        assert report["bilateral monotonicity"].status == "FAIL"
        assert not report.passed

    def test_monotonicity_witnesses_cover_both_arguments(self):
        check = validate_biposet(_xor_category())["bilateral monotonicity"]
        assert check.failures == 2
        assert check.witnesses == ["*,*,*: left argument 0⪯1 at r=1", "*,*,*: right argument 0⪯1 at s=1"]


class TestOrthogonality:
    def test_opposed_partial_bijections(self, rel2):
        r = relation_term(rel2, "t0", "t0", [(0, 1)])
        s = relation_term(rel2, "t0", "t0", [(1, 0)])
        assert orthogonal(rel2, r, s)

    def test_semi_orthogonality(self, rel2):
        r = relation_term(rel2, "t0", "t0", [(0, 1)])
        s = relation_term(rel2, "t0", "t0", [(0, 0), (1, 0)])
        verdict = orthogonality(rel2, r, s)
        assert verdict.semi_at_source
        assert not verdict.semi_at_target
        assert not verdict.orthogonal

    def test_requires_opposed_terms(self, rel21):
        r = rel21.top("t0", "t1")
        with pytest.raises(TypeMismatchError):
            orthogonal(rel21, r, r)

    def test_ideal_of_bottom_is_everything(self, rel21):
        ideal = orthogonality_ideal(rel21, rel21.bottom("t0", "t1"))
        assert ideal == set(rel21.terms("t1", "t0"))

    @pytest.mark.parametrize("descriptor", ["rel:2,1", "trop:8", "cyclic:3"])
    def test_functor_laws(self, descriptor):
        report = orthogonality_functor_check(build_model(descriptor))
        assert report.passed, report.lines()

    def test_functor_checks_are_distinct(self, rel2):
        report = orthogonality_functor_check(rel2)
        laws = [c.law for c in report.checks]
        assert len(laws) == len(set(laws))
        assert "orthoterm composition" not in report
        assert report["orthoterm identities"].instances > report["identity ideal is principal"].instances


class TestFunctionalTerms:
    def test_functions_of_a_two_element_set(self, rel2):
        found = functional_terms(rel2, "t0", "t0")
        assert len(found) == 4
        kinds = sorted(fa.kind for fa in found)
        assert kinds == ["functional", "functional", "inverse", "inverse"]

    def test_injection_is_a_subtype(self, rel21):
        f = relation_term(rel21, "t1", "t0", [(0, 1)])
        fa = functional_adjoint(rel21, f)
        assert fa is not None and fa.kind == "subtype"
        assert rel21.label(fa.adjoint) == "{10}"

    def test_surjection_is_reflective(self, rel21):
        f = relation_term(rel21, "t0", "t1", [(0, 0), (1, 0)])
        assert functional_adjoint(rel21, f).kind == "reflective"

    def test_partial_map_is_not_functional(self, rel2):
        f = relation_term(rel2, "t0", "t0", [(0, 1)])
        assert functional_adjoint(rel2, f) is None
        with pytest.raises(NotFunctionalError):
            direct_inverse_image(rel2, f)

    def test_image_maps_are_adjoint(self, rel21):
        f = relation_term(rel21, "t1", "t0", [(0, 1)])
        assert direct_inverse_image(rel21, f).verdict.is_adjoint


class TestQuasisymmetry:
    def test_center_of_rel2(self, rel2):
        result = quasisymmetry_center(rel2)
        central = sorted(rel2.label(t) for t, flag in result.per_term.items() if flag)
        assert central == ["{00,01,10,11}", "{00,11}", "{01,10}", "{}"]
        assert result.identities_central
        assert result.closed_under_composition

    def test_partial_bijection_is_not_central(self, rel2):
        assert not is_quasisymmetric(rel2, relation_term(rel2, "t0", "t0", [(0, 1)]))

    def test_commutative_models_are_central(self, trop8):
        assert all(is_quasisymmetric(trop8, t) for t in trop8.all_terms())


class TestOrthoterms:
    def test_composition(self, rel2):
        swap = relation_term(rel2, "t0", "t0", [(0, 1), (1, 0)])
        composed = compose_orthoterms(rel2, Orthoterm(swap, swap), Orthoterm(swap, swap))
        assert composed == Orthoterm(rel2.identity("t0"), rel2.identity("t0"))

    def test_components_must_be_orthogonal(self, rel2):
        row = relation_term(rel2, "t0", "t0", [(0, 0), (0, 1)])
        ident = rel2.identity("t0")
        with pytest.raises(TypeMismatchError):
            compose_orthoterms(rel2, Orthoterm(row, row), Orthoterm(ident, ident))
