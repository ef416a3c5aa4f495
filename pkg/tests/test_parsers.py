"""
Tests for the input file readers
"""

import textwrap

import pytest

from src.biposet import validate_biposet
from src.calculus import DualAtom, Entailment, Orthogonality, Tensor, check_derivation
from src.errors import InvalidTopotypeError, NonGroundClauseError, ParseError
from src.flowfix import horn_eval
from src.parsers import (
    load_language_file, load_model_file, load_structure_file, parse_assertions, parse_datalog, parse_derivations,
    parse_formulas, parse_items, parse_language, parse_model_text, parse_sexprs, parse_structure, parse_topotype,
    split_top_level,
)

BOOL2_MODEL = textwrap.dedent("""\
    # two-element Boolean quantale
    types *
    hom * *: 0 1
    le * *: 0<=1
    comp * * *: (0,0)->0 (0,1)->0 (1,0)->0 (1,1)->1
    id *: 1
    join * *: (0,1)->1
    bot * *: 0
""")

TC_PROGRAM = textwrap.dedent("""\
    domain node{1..3}
    pred edge/2 domain node
    pred path/2 domain node
    fact edge(1,2).
    fact edge(2,3).
    rule path(X,Y) :- edge(X,Y).
    rule path(X,Z) :- path(X,Y), edge(Y,Z).
""")


class TestModelFiles:
    def test_bool2(self):
        M = parse_model_text(BOOL2_MODEL, "bool2.model")
        assert M.name == "bool2"
        assert M.label(M.identity("*")) == "1"
        assert validate_biposet(M, ["cHc"]).passed

    def test_load_from_disk(self, tmp_path):
        path = tmp_path / "two.model"
        path.write_text(BOOL2_MODEL)
        assert load_model_file(path).kind == "file"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError, match="cannot read file"):
            load_model_file(tmp_path / "absent.model")

    def test_missing_colon(self):
        with pytest.raises(ParseError) as info:
            parse_model_text("types *\nhom * * 0 1\n")
        assert info.value.line == 2
        assert info.value.column == len("hom * * 0 1") + 1

    def test_missing_section_keyword(self):
        with pytest.raises(ParseError, match="section keyword") as info:
            parse_model_text("types *\n: 0 1\n")
        assert (info.value.line, info.value.column) == (2, 1)

    def test_unknown_type(self):
        with pytest.raises(ParseError) as info:
            parse_model_text("types *\nhom * z: 0\n")
        assert (info.value.line, info.value.column) == (2, 7)

    def test_malformed_table_entry(self):
        with pytest.raises(ParseError, match="expected"):
            parse_model_text(BOOL2_MODEL.replace("(0,0)->0", "(0,0)=0"))

    def test_missing_composition_entry(self):
        with pytest.raises(ParseError, match="no entry"):
            parse_model_text(BOOL2_MODEL.replace(" (1,1)->1", ""))

    def test_declared_join_must_agree(self):
        with pytest.raises(ParseError, match="join"):
            parse_model_text(BOOL2_MODEL.replace("(0,1)->1", "(0,1)->0"))

    def test_missing_identity(self):
        with pytest.raises(ParseError, match="missing 'id"):
            parse_model_text(BOOL2_MODEL.replace("id *: 1\n", ""))


class TestSExpressions:
    def test_nesting_and_comments(self):
        items = parse_sexprs('; header\n(a (b "c d"))  # trailing\n(e)')
        assert len(items) == 2
        assert items[0].items[1].items[1].text == "c d"
        assert items[1].line == 3

    def test_unclosed(self):
        with pytest.raises(ParseError) as info:
            parse_sexprs("\n  (x (y)", "f.proof")
        assert (info.value.line, info.value.column) == (2, 3)
        assert str(info.value).startswith("f.proof:2:3:")

    def test_unbalanced(self):
        with pytest.raises(ParseError) as info:
            parse_sexprs("(a))")
        assert info.value.column == 4

    def test_split_top_level(self):
        assert split_top_level("{},{00},{00,11}") == ["{}", "{00}", "{00,11}"]
        assert split_top_level("") == []


class TestFormulaFiles:
    def test_formula_round_trip(self, lang):
        text = "(ot (atom a y x) (dual a))"
        (phi,) = parse_formulas(text, lang)
        assert isinstance(phi, Tensor) and isinstance(phi.right, DualAtom)
        assert str(phi) == text

    @pytest.mark.parametrize("text", [
        "(ot (atom a y x) (atom a y x))",
        "(atom a x y)",
        "(atom z y x)",
        "(foo)",
        "(bs (atom c x x))",
        "atom",
    ])
    def test_rejected_formulas(self, lang, text):
        with pytest.raises(ParseError):
            parse_formulas(text, lang)

    def test_error_position(self, lang):
        with pytest.raises(ParseError) as info:
            parse_formulas("(bs (atom c x x)\n    (atom a y x))", lang)
        assert (info.value.line, info.value.column) == (1, 1)

    def test_assertions(self, lang):
        (goal,) = parse_assertions("(ent (atom c x x) (ot (atom c x x) (atom c x x)))", lang)
        assert isinstance(goal, Entailment)
        with pytest.raises(ParseError):
            parse_assertions("(ent (atom a y x) (atom b x y))", lang)

    def test_mixed_items(self, lang):
        items = parse_items("(atom c x x)\n(orth (atom a y x) (dual a))", lang)
        assert isinstance(items[1], Orthogonality)

    def test_derivations(self, lang):
        (d,) = parse_derivations('(rule "logical axiom" (premises) (concl (orth (atom a y x) (dual a))))', lang)
        assert d.rule == "logical axiom"
        assert check_derivation(lang, d).passed

    def test_empty_proof(self, lang):
        with pytest.raises(ParseError, match="no derivation"):
            parse_derivations("; nothing here\n", lang)

    def test_malformed_rule(self, lang):
        with pytest.raises(ParseError):
            parse_derivations('(rule "cut" (concl (orth (atom a y x) (dual a))))', lang)


class TestLanguages:
    def test_language(self, tmp_path):
        path = tmp_path / "harness.lang"
        path.write_text("types y x\natom a y x\natom b x y\natom c x x\n")
        L = load_language_file(path)
        assert L.types == ("y", "x")
        assert sorted(L.atoms) == ["a", "b", "c"]

    def test_atom_before_types(self):
        with pytest.raises(ParseError) as info:
            parse_language("atom a y x\ntypes y x\n")
        assert info.value.line == 1

    def test_unknown_type(self):
        with pytest.raises(ParseError) as info:
            parse_language("types y\natom a y x\n")
        assert info.value.line == 2


class TestStructures:
    def test_structure_spec(self):
        spec = parse_structure("model cyclic:3\ntype y -> *\ntype x -> *\natom a -> {1}\n")
        assert spec.descriptor == "cyclic:3"
        assert spec.type_map == {"y": "*", "x": "*"}
        assert spec.atom_labels == {"a": "{1}"}

    def test_missing_model_line(self):
        with pytest.raises(ParseError, match="model"):
            parse_structure("type y -> *\n")

    def test_load_structure(self, tmp_path, lang):
        path = tmp_path / "cyc.struct"
        path.write_text("model cyclic:3\ntype y -> *\ntype x -> *\n"
                        "atom a -> {1}\natom b -> {0,1,2}\natom c -> {2}\n")
        S = load_structure_file(path, lang)
        assert S.name == "cyc"
        assert S.model.label(S.interpret(lang.atom("c"))) == "{2}"

    def test_unmapped_atoms_become_parse_errors(self, tmp_path, lang):
        path = tmp_path / "partial.struct"
        path.write_text("model cyclic:3\ntype y -> *\ntype x -> *\natom a -> {1}\n")
        with pytest.raises(ParseError):
            load_structure_file(path, lang)


class TestDatalog:
    def test_transitive_closure(self):
        result = horn_eval(parse_datalog(TC_PROGRAM))
        assert result.lines() == ["edge(1,2)", "edge(2,3)", "path(1,2)", "path(1,3)", "path(2,3)"]

    def test_inline_domains(self):
        program = parse_datalog("pred p/1 domain {a,b}\nfact p(a).\n")
        assert horn_eval(program).lines() == ["p(a)"]

    @pytest.mark.parametrize("line", [
        "fact edge(X,2).",
        "rule path(X,Y) :- edge(X,X).",
        "rule path(f(X),X) :- edge(X,X).",
        "fact edge(1,9).",
    ])
    def test_non_ground_clauses(self, line):
        with pytest.raises(NonGroundClauseError):
            parse_datalog(TC_PROGRAM + line + "\n")

    @pytest.mark.parametrize("line", ["fact edge(1,2)", "pred q domain node", "query path(1,3)."])
    def test_syntax_errors(self, line):
        with pytest.raises(ParseError) as info:
            parse_datalog(TC_PROGRAM + line + "\n")
        assert info.value.line == 8


class TestTopotypeLiterals:
    def test_closed_literal(self, rel2):
        V = parse_topotype("topo t0: {{},{00},{00,11}}", rel2)
        assert V.type == "t0" and len(V) == 3

    def test_unclosed_literal(self, rel2):
        with pytest.raises(InvalidTopotypeError):
            parse_topotype("topo t0: {{00}}", rel2)

    @pytest.mark.parametrize("text", ["topo t9: {{}}", "topotype t0", "topo t0: {{02}}"])
    def test_rejected_literals(self, rel2, text):
        with pytest.raises(ParseError):
            parse_topotype(text, rel2)
