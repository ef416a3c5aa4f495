"""
Tests for the law registry, the laws runner and law reports
"""

import random

import pytest

from src.errors import UnknownDescriptorError
from src.laws import LAWS, law_names, random_topotype, run_laws, select_laws
from src.performance_monitor import PerformanceMonitor
from src.reports import Report


class TestRegistry:
    def test_names_are_sorted(self):
        names = law_names()
        assert names == sorted(LAWS)
        assert {"soundness", "negative-control", "biposet-axioms", "comodal"} <= set(names)

    def test_select_all(self):
        assert [law.name for law in select_laws()] == law_names()

    def test_underscores_are_accepted(self):
        assert [law.name for law in select_laws(["modus_ponens", "domains"])] == ["domains", "modus-ponens"]

    def test_unknown_law(self):
        with pytest.raises(UnknownDescriptorError, match="unknown law"):
            select_laws(["nope"])

    def test_random_topotypes_are_closed(self, rel2):
        V = random_topotype(rel2, "t0", random.Random(3))
        assert rel2.bottom("t0", "t0") in V and rel2.identity("t0") in V


class TestRunner:
    def test_bool2(self):
        outcomes = run_laws("bool2", ["modus-ponens", "domains", "tensor-negation"])
        assert [o.name for o in outcomes] == ["domains", "modus-ponens", "tensor-negation"]
        assert all(o.status == "PASS" for o in outcomes)
        assert outcomes[1].line().startswith("PASS modus-ponens (")

    def test_domains_are_skipped_on_tropical_models(self):
        (outcome,) = run_laws("trop:8", ["domains"])
        assert outcome.status == "SKIP"
        assert outcome.line() == "SKIP domains - domain identities are stated for relational models"

    def test_heyting_laws_skip_on_groups(self):
        (outcome,) = run_laws("group:3", ["modus-ponens"])
        assert outcome.status == "SKIP"
        (axioms,) = run_laws("group:3", ["biposet-axioms"])
        assert axioms.status == "PASS"

    def test_bad_descriptor(self):
        with pytest.raises(UnknownDescriptorError):
            run_laws("nonsense:1")

    def test_results_do_not_depend_on_jobs(self):
        names = ["sequent-demorgan", "polar-coherence", "representation"]
        serial = [o.line() for o in run_laws("rel:2", names, seed=5, jobs=1)]
        parallel = [o.line() for o in run_laws("rel:2", names, seed=5, jobs=3)]
        assert serial == parallel
        assert all(line.startswith("PASS") for line in serial)

    def test_representation_and_domains_on_two_relational_types(self):
        outcomes = run_laws("rel:2,2", ["representation", "domains"], seed=7)
        assert [o.name for o in outcomes] == ["domains", "representation"]
        assert all(o.status == "PASS" for o in outcomes), [o.line() for o in outcomes]

    def test_negative_control_law_passes_when_weakening_is_refuted(self):
        (outcome,) = run_laws("bool2", ["negative-control"])
        assert outcome.status == "PASS"

    @pytest.mark.slow
    @pytest.mark.parametrize("descriptor", ["bool2", "trop:8", "rel:2,1", "cyclic:3"])
    def test_full_suite(self, descriptor):
        outcomes = run_laws(descriptor, jobs=4)
        failed = [o.line() for o in outcomes if o.status == "FAIL"]
        assert not failed, failed

    def test_monitor_records_every_law(self):
        monitor = PerformanceMonitor()
        run_laws("bool2", ["modus-ponens", "dialectical-axioms"], monitor=monitor)
        summary = monitor.get_metrics_summary()
        assert summary["law_count"] == 2
        assert summary["total_instances"] > 0
        assert monitor.elapsed_ms("modus-ponens") is not None


class TestReports:
    def test_witnesses_are_bounded(self):
        report = Report("bounded")
        check = report.check("always fails")
        for k in range(100):
            check.record(False, lambda: f"case {k}")
        assert check.failures == 100
        assert len(check.witnesses) == 20
        assert check.line() == "FAIL always fails (100 instances, 100 violations)"

    def test_skipped_checks_do_not_fail_a_report(self):
        report = Report("skips")
        report.check("lattice").skip("no joins")
        report.check("order").record(True)
        assert report.passed
        assert report["lattice"].status == "SKIP"
        assert report.to_dict()["checks"][0]["status"] == "SKIP"

    def test_extend(self):
        first, second = Report("a"), Report("b")
        second.check("x").record(False, "bad")
        assert not first.extend(second).passed
        assert "x" in first
