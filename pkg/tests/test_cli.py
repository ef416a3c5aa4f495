"""
Tests for the command line interface and the command runner
"""

import orjson
import pytest
from click.testing import CliRunner

from app import main
from src.errors import KernelError
from src.runner import EXIT_FAILURES, EXIT_INPUT, EXIT_OK, make_invocation, run

LANGUAGE = "types y x\natom a y x\natom b x y\natom c x x\n"
STRUCTURE = ("model cyclic:3\ntype y -> *\ntype x -> *\n"
             "atom a -> {1}\natom b -> {0,1,2}\natom c -> {2}\n")
PROGRAM = ("domain node{1..3}\npred edge/2 domain node\npred path/2 domain node\n"
           "fact edge(1,2).\nfact edge(2,3).\n"
           "rule path(X,Y) :- edge(X,Y).\nrule path(X,Z) :- path(X,Y), edge(Y,Z).\n")


@pytest.fixture
def cli():
    return CliRunner()


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


class TestValidate:
    def test_relational_model(self, cli):
        result = cli.invoke(main, ["validate", "rel:2,2", "--laws", "cHc"])
        assert result.exit_code == EXIT_OK, result.output
        assert result.output.startswith("biposet rel:2,2")
        assert "FAIL" not in result.output

    def test_tsv(self, cli):
        result = cli.invoke(main, ["validate", "bool2", "--format", "tsv"])
        assert result.exit_code == EXIT_OK
        assert result.output.splitlines()[0] == "subject\tlaw\tstatus\tinstances\tviolations"

    def test_unknown_descriptor(self, cli):
        result = cli.invoke(main, ["validate", "foo"])
        assert result.exit_code == EXIT_INPUT
        assert "error:" in result.output

    def test_broken_model_file(self, cli, files):
        path = files("broken.model", "types *\nhom * * 0 1\n")
        result = cli.invoke(main, ["validate", path])
        assert result.exit_code == EXIT_INPUT
        assert "broken.model:2:" in result.output

    def test_heyting_laws_need_a_heyting_model(self, cli):
        result = cli.invoke(main, ["validate", "group:3", "--laws", "cHc"])
        assert result.exit_code == EXIT_INPUT


class TestProofs:
    def test_check_proof(self, cli, files):
        lang = files("h.lang", LANGUAGE)
        proof = files("ax.proof", '(rule "logical axiom" (premises) (concl (orth (atom a y x) (dual a))))\n')
        result = cli.invoke(main, ["check-proof", lang, proof])
        assert result.exit_code == EXIT_OK
        assert result.output.strip() == "OK (1 node)"

    def test_failing_proof(self, cli, files):
        lang = files("h.lang", LANGUAGE)
        proof = files("bad.proof", '(rule "reflexivity" (premises) '
                                   '(concl (ent (atom c x x) (ot (atom c x x) (atom c x x)))))\n')
        result = cli.invoke(main, ["check-proof", lang, proof])
        assert result.exit_code == EXIT_FAILURES
        assert result.output.startswith("FAIL node root (reflexivity)")

    def test_missing_file(self, cli, files, tmp_path):
        lang = files("h.lang", LANGUAGE)
        result = cli.invoke(main, ["check-proof", lang, str(tmp_path / "absent.proof")])
        assert result.exit_code == EXIT_INPUT

    def test_prove(self, cli, files):
        lang = files("h.lang", LANGUAGE)
        goals = files("g.goal", "(ent (atom a y x) (atom a y x))\n")
        result = cli.invoke(main, ["prove", lang, goals])
        assert result.exit_code == EXIT_OK
        assert result.output.startswith('(rule "reflexivity"')

    def test_duplication_is_not_found(self, cli, files):
        lang = files("h.lang", LANGUAGE)
        goals = files("g.goal", "(ent (atom c x x) (ot (atom c x x) (atom c x x)))\n")
        result = cli.invoke(main, ["prove", lang, goals, "--depth", "2"])
        assert result.exit_code == EXIT_FAILURES
        assert result.output.startswith("NOT FOUND ")
        assert "(depth 2)" in result.output


class TestEval:
    def test_values_and_verdicts(self, cli, files):
        lang = files("h.lang", LANGUAGE)
        structure = files("cyc.struct", STRUCTURE)
        formulas = files("f.formulas", "(ot (atom c x x) (atom c x x))\n"
                                       "(ent (atom c x x) (atom c x x))\n"
                                       "(ent (atom c x x) (ot (atom c x x) (atom c x x)))\n")
        result = cli.invoke(main, ["eval", lang, structure, formulas])
        assert result.exit_code == EXIT_FAILURES
        lines = result.output.splitlines()
        assert lines[0] == "(ot (atom c x x) (atom c x x)) = {1}"
        assert lines[1].endswith(" = VALID")
        assert lines[2].endswith(" = INVALID")

    def test_json(self, cli, files):
        lang = files("h.lang", LANGUAGE)
        structure = files("cyc.struct", STRUCTURE)
        formulas = files("f.formulas", "(orth (atom a y x) (dual a))\n")
        result = cli.invoke(main, ["eval", lang, structure, formulas, "--format", "json"])
        assert result.exit_code == EXIT_OK
        payload = orjson.loads(result.output)
        assert payload["passed"] is True
        assert payload["rows"][0]["value"] == "VALID"


class TestModels:
    def test_center(self, cli):
        result = cli.invoke(main, ["center", "rel:2"])
        assert result.exit_code == EXIT_OK, result.output
        assert result.output.startswith("hom(t0,t0): 4 terms: ")

    def test_center_of_a_group(self, cli):
        result = cli.invoke(main, ["center", "group:3"])
        assert result.exit_code == EXIT_INPUT

    def test_fixpoint(self, cli):
        result = cli.invoke(main, ["fixpoint", "rel:2,1", "{00}", "{}"])
        assert result.exit_code == EXIT_OK, result.output
        lines = result.output.splitlines()
        assert lines[0] == "least fixpoint: {00} after 2 iterations (1 fixpoints)"
        assert lines[1].startswith("greatest fixpoint: {00} ")

    def test_fixpoint_with_full_topotype(self, cli):
        result = cli.invoke(main, ["fixpoint", "rel:2,1", "{01,11}", "{00,10}", "--topotype", "full"])
        assert result.exit_code == EXIT_OK, result.output

    def test_bad_homset(self, cli):
        result = cli.invoke(main, ["fixpoint", "rel:2,1", "{00}", "{}", "--hom", "t0"])
        assert result.exit_code == EXIT_INPUT


class TestDatalog:
    def test_transitive_closure(self, cli, files):
        program = files("tc.dl", PROGRAM)
        result = cli.invoke(main, ["datalog", program])
        assert result.exit_code == EXIT_OK
        assert result.output.splitlines() == ["edge(1,2)", "edge(2,3)", "path(1,2)", "path(1,3)", "path(2,3)"]

    def test_non_ground_program(self, cli, files):
        program = files("bad.dl", PROGRAM + "fact edge(X,2).\n")
        result = cli.invoke(main, ["datalog", program])
        assert result.exit_code == EXIT_INPUT


class TestLaws:
    def test_selected_law_as_json(self, cli):
        result = cli.invoke(main, ["laws", "bool2", "--law", "modus-ponens", "--format", "json"])
        assert result.exit_code == EXIT_OK
        payload = orjson.loads(result.output)
        assert payload["passed"] is True
        assert [row["law"] for row in payload["rows"]] == ["modus-ponens"]

    def test_skips_do_not_fail(self, cli):
        result = cli.invoke(main, ["laws", "trop:8", "--law", "domains"])
        assert result.exit_code == EXIT_OK
        assert result.output.startswith("SKIP domains - ")

    def test_unknown_law(self, cli):
        result = cli.invoke(main, ["laws", "bool2", "--law", "nope"])
        assert result.exit_code == EXIT_INPUT


class TestInvocations:
    def test_input_count(self):
        with pytest.raises(KernelError, match="takes 2 input"):
            make_invocation("check-proof", ["only.lang"])

    def test_jobs_must_be_positive(self):
        with pytest.raises(KernelError):
            make_invocation("laws", ["bool2"], jobs=0)

    def test_run_reports_input_errors(self):
        result = run(make_invocation("center", ["nonsense:4"]))
        assert result.exit_code == EXIT_INPUT
        assert result.output.startswith("error: ")
