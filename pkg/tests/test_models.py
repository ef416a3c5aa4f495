"""
Tests for the concrete model constructors and model descriptors
"""

import pytest

from src.biposet import validate_biposet
from src.errors import CapabilityError, SizeBoundError, UnknownDescriptorError
from src.heyting import HeytingModel, validate_heyting
from src.models import (
    DEFAULT_MODELS, build_model, distributor_fibers, function_graph, language_division, make_distributor,
    make_group_category, matrix_entry, matrix_imply, parse_descriptor, type_sum,
)


class TestDescriptors:
    @pytest.mark.parametrize("text,kind,params", [
        ("bool2", "bool2", ()),
        ("rel:2,3", "rel", (2, 3)),
        ("trop:8", "trop", (8, "infinity")),
        ("trop:8,cap", "trop", (8, "cap")),
        ("lang:ab,2", "lang", ("ab", 2)),
        ("mat:bool2:1,2", "mat", (1, 2)),
    ])
    def test_parse(self, text, kind, params):
        d = parse_descriptor(text)
        assert d.kind == kind
        assert d.params == params

    def test_nested_inner(self):
        d = parse_descriptor("center:closed:group:2")
        assert d.kind == "center"
        assert d.inner.kind == "closed"
        assert d.inner.inner.params == (2,)

    @pytest.mark.parametrize("text", ["foo", "rel:", "lang:ab", "mat:bool2", "center:", "powerset:1,2", "rel:a"])
    def test_rejects_bad_descriptors(self, text):
        with pytest.raises(UnknownDescriptorError):
            parse_descriptor(text)

    @pytest.mark.parametrize("text", ["powerset:9", "rel:3"])
    def test_size_bounds(self, text):
        with pytest.raises(SizeBoundError):
            build_model(text)

    def test_center_needs_heyting_inner(self):
        with pytest.raises(CapabilityError):
            build_model("center:group:3")

    @pytest.mark.parametrize("descriptor", DEFAULT_MODELS)
    def test_default_models_are_heyting(self, descriptor):
        M = build_model(descriptor)
        assert isinstance(M, HeytingModel)
        assert "cHc" in M.meta["claims"]


class TestCarriers:
    def test_bool2(self, bool2):
        assert [bool2.label(t) for t in bool2.terms("*", "*")] == ["0", "1"]
        assert bool2.label(bool2.identity("*")) == "1"

    def test_trop_order_is_reversed(self, trop8):
        assert trop8.label(trop8.bottom("*", "*")) == "inf"
        assert trop8.label(trop8.top("*", "*")) == "0"
        three, five = trop8.term("*", "*", "3"), trop8.term("*", "*", "5")
        assert trop8.entails(five, three)
        assert trop8.label(trop8.compose(three, five)) == "8"
        assert trop8.label(trop8.compose(five, five)) == "inf"

    def test_rel_sizes(self, rel21):
        assert rel21.types == ("t0", "t1")
        assert len(rel21.terms("t0", "t0")) == 16
        assert len(rel21.terms("t0", "t1")) == 4
        assert len(rel21.terms("t1", "t1")) == 2

    def test_function_graph(self, rel2):
        f = function_graph(rel2, "t0", "t0", [1, 0])
        assert rel2.label(f) == "{01,10}"

    def test_cyclic_composition(self, cyclic3):
        one, two = cyclic3.term("*", "*", "{1}"), cyclic3.term("*", "*", "{2}")
        assert cyclic3.label(cyclic3.compose(one, two)) == "{0}"
        assert cyclic3.label(cyclic3.compose(two, two)) == "{1}"
        assert cyclic3.label(cyclic3.identity("*")) == "{0}"


class TestLanguages:
    @pytest.fixture(scope="class")
    def lang2(self):
        return build_model("lang:ab,2")

    def test_truncated_concatenation(self, lang2):
        a, b = lang2.term("*", "*", "{a}"), lang2.term("*", "*", "{b}")
        ab = lang2.compose(a, b)
        assert lang2.label(ab) == "{ab}"
        assert lang2.label(lang2.compose(ab, a)) == "{}"
        assert lang2.label(lang2.identity("*")) == "{ε}"

    def test_division_matches_left_implication(self, lang2):
        a, ab = lang2.term("*", "*", "{a}"), lang2.term("*", "*", "{ab}")
        quotient = language_division(frozenset({"a"}), frozenset({"ab"}), lang2.meta["strings"], 2)
        assert quotient == {"b", "aa", "ab", "ba", "bb"}
        assert lang2.value(lang2.left_imply(a, ab)) == quotient


class TestSubsetFamilies:
    def test_subset_category_of_a_group(self):
        M = build_model("subset:group:2")
        assert M.kind == "subsetcat"
        assert len(M.terms("*", "*")) == 4
        assert validate_heyting(M).passed

    def test_closed_subsets_of_a_chain(self):
        M = build_model("closed:chain:3")
        labels = [M.label(t) for t in M.terms("*", "*")]
        assert labels == ["{}", "{0}", "{0,1}", "{0,1,2}"]
        assert validate_biposet(M, ["joins"]).passed


class TestMatrices:
    @pytest.fixture(scope="class")
    def mat2(self):
        return build_model("mat:bool2:2")

    def test_matrices_over_bool2_are_relations(self, mat2):
        assert len(mat2.terms("t0", "t0")) == 16
        assert mat2.label(mat2.identity("t0")) == "[1;0|0;1]"
        swap = mat2.term("t0", "t0", "[0;1|1;0]")
        assert mat2.label(mat2.negate(swap)) == "[0;1|1;0]"

    def test_entry_formulas_for_implications(self, mat2):
        terms = mat2.terms("t0", "t0")
        for s in terms:
            for r in terms:
                assert matrix_imply(mat2, "right", s, r) == mat2.right_imply(s, r)
                assert matrix_imply(mat2, "left", r, s) == mat2.left_imply(r, s)

    def test_matrix_entry(self, mat2):
        swap = mat2.term("t0", "t0", "[0;1|1;0]")
        assert mat2.meta["base"].label(matrix_entry(mat2, swap, 0, 1)) == "1"
        assert mat2.meta["base"].label(matrix_entry(mat2, swap, 1, 1)) == "0"

    def test_type_sum_laws(self):
        M = build_model("mat:bool2:1,1")
        ts = type_sum(M, "t0", "t1")
        report = ts.check()
        assert report.passed, report.lines()

    def test_type_sum_needs_matrices(self, rel2):
        with pytest.raises(CapabilityError):
            type_sum(rel2, "t0", "t0")


class TestDistributors:
    def test_distributor_of_a_group(self):
        D = make_distributor(make_group_category(2))
        assert D.kind == "distributor"
        assert len(D.terms("*", "*")) == 4
        full = D.top("*", "*")
        assert distributor_fibers(D, full) == {(0, 0): frozenset({0, 1})}
        assert validate_heyting(D).passed
