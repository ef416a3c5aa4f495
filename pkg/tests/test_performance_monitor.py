"""
Tests for law timing, alerts and settings
"""

import pytest

from src.config import KernelSettings, get_settings
from src.performance_monitor import PerformanceMonitor


class TestPerformanceMonitor:
    def test_measure_records_instances(self):
        monitor = PerformanceMonitor()
        with monitor.measure("order") as record:
            record['instances'] = 12
        assert monitor.elapsed_ms("order") >= 0.0
        assert monitor.elapsed_ms("absent") is None
        summary = monitor.get_metrics_summary()
        assert summary['law_count'] == 1
        assert summary['total_instances'] == 12
        assert summary['slowest_law'] == "order"

    def test_failed_blocks_are_still_recorded(self):
        monitor = PerformanceMonitor()
        with pytest.raises(RuntimeError):
            with monitor.measure("broken"):
                raise RuntimeError("boom")
        assert monitor.elapsed_ms("broken") is not None

    def test_empty_summary(self):
        assert PerformanceMonitor().get_metrics_summary() == {}
        assert PerformanceMonitor().get_metrics_frame().empty

    def test_history_is_bounded(self):
        monitor = PerformanceMonitor(max_history=3)
        for k in range(5):
            with monitor.measure(f"law{k}"):
                pass
        assert [m.law for m in monitor.metrics_history] == ["law2", "law3", "law4"]

    def test_slow_law_alert(self):
        monitor = PerformanceMonitor()
        monitor.thresholds['max_law_seconds'] = 1e-9
        with monitor.measure("slow"):
            sum(range(1000))
        assert [a['type'] for a in monitor.alerts][:1] == ['slow_law']
        assert any("--jobs" in tip for tip in monitor.get_optimization_recommendations())

    def test_no_alerts_no_recommendations(self):
        monitor = PerformanceMonitor()
        monitor.thresholds['max_memory_percent'] = 101.0
        with monitor.measure("quick"):
            pass
        assert monitor.get_optimization_recommendations() == []


class TestSettings:
    def test_defaults(self):
        settings = KernelSettings(_env_file=None)
        assert settings.max_witnesses == 20
        assert settings.harness_derivations == 1000
        assert settings.harness_max_depth == 6

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("MAX_ASSIGNMENTS", "17")
        assert KernelSettings(_env_file=None).max_assignments == 17

    def test_bounds_are_validated(self, monkeypatch):
        monkeypatch.setenv("JOBS", "0")
        with pytest.raises(ValueError):
            KernelSettings(_env_file=None)

    def test_settings_are_cached(self):
        assert get_settings() is get_settings()
