"""
Performance Monitor Module for DialecticKernel
Timing and resource tracking for law checks
"""

import time
import psutil
from contextlib import contextmanager
from datetime import datetime
from typing import Dict, List, Any, Optional
import pandas as pd
from dataclasses import dataclass, asdict
import logging

from src.config import get_settings

logger = logging.getLogger(__name__)

@dataclass
class LawMetrics:
    """Resource usage of one law check"""
    timestamp: datetime
    law: str
    elapsed_ms: float
    cpu_percent: float
    memory_mb: float
    memory_percent: float
    instances: int = 0

class PerformanceMonitor:
    """Per-law timing with threshold alerts"""

    def __init__(self, max_history: int = 1000):
        self.max_history = max_history
        self.metrics_history: List[LawMetrics] = []
        self.start_time = datetime.now()

        settings = get_settings()
        self.thresholds = {
            'max_law_seconds': settings.max_law_seconds,
            'max_memory_percent': settings.max_memory_percent,
        }

        self.alerts: List[Dict[str, Any]] = []
        self._process = psutil.Process()

    @contextmanager
    def measure(self, law: str):
        """Time the enclosed block and record it under `law`"""
        started = time.perf_counter()
        self._process.cpu_percent(interval=None)
        record = {'instances': 0}
        try:
            yield record
        finally:
            elapsed_ms = (time.perf_counter() - started) * 1000.0
            metrics = self._collect_metrics(law, elapsed_ms, record.get('instances', 0))
            self.metrics_history.append(metrics)
            if len(self.metrics_history) > self.max_history:
                self.metrics_history = self.metrics_history[-self.max_history:]
            self._check_performance_alerts(metrics)

    def _collect_metrics(self, law: str, elapsed_ms: float, instances: int) -> LawMetrics:
        try:
            memory = psutil.virtual_memory()
            return LawMetrics(
                timestamp=datetime.now(),
                law=law,
                elapsed_ms=elapsed_ms,
                cpu_percent=self._process.cpu_percent(interval=None),
                memory_mb=self._process.memory_info().rss / (1024 * 1024),
                memory_percent=memory.percent,
                instances=instances,
            )
        except Exception as e:
            logger.error(f"Error collecting metrics: {e}")
            return LawMetrics(datetime.now(), law, elapsed_ms, 0.0, 0.0, 0.0, instances)

    def _check_performance_alerts(self, metrics: LawMetrics) -> None:
        seconds = metrics.elapsed_ms / 1000.0
        if seconds > self.thresholds['max_law_seconds']:
            self._add_alert(
                'slow_law',
                f"Law {metrics.law} took {seconds:.1f}s (threshold: {self.thresholds['max_law_seconds']:.0f}s)",
                metrics.timestamp,
            )
        if metrics.memory_percent > self.thresholds['max_memory_percent']:
            self._add_alert(
                'high_memory',
                f"High memory usage: {metrics.memory_percent:.1f}% (threshold: {self.thresholds['max_memory_percent']}%)",
                metrics.timestamp,
            )

    def _add_alert(self, alert_type: str, message: str, timestamp: datetime) -> None:
        self.alerts.append({'type': alert_type, 'message': message, 'timestamp': timestamp})
        if len(self.alerts) > 50:
            self.alerts = self.alerts[-50:]
        logger.warning(f"Performance alert: {message}")

    def elapsed_ms(self, law: str) -> Optional[float]:
        for m in reversed(self.metrics_history):
            if m.law == law:
                return m.elapsed_ms
        return None

    def get_metrics_frame(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(m) for m in self.metrics_history])

    def get_metrics_summary(self) -> Dict[str, Any]:
        if not self.metrics_history:
            return {}
        df = self.get_metrics_frame()
        return {
            'law_count': len(df),
            'total_seconds': float(df['elapsed_ms'].sum()) / 1000.0,
            'slowest_law': str(df.loc[df['elapsed_ms'].idxmax(), 'law']),
            'max_elapsed_ms': float(df['elapsed_ms'].max()),
            'peak_memory_mb': float(df['memory_mb'].max()),
            'total_instances': int(df['instances'].sum()),
        }

    def get_optimization_recommendations(self) -> List[str]:
        recommendations = []
        kinds = {a['type'] for a in self.alerts}
        if 'slow_law' in kinds:
            recommendations.append("Lower HARNESS_DERIVATIONS or --depth for the randomized laws")
            recommendations.append("Raise --jobs to run independent laws in parallel")
        if 'high_memory' in kinds:
            recommendations.append("Use smaller model descriptors; carriers are tabulated densely")
        return recommendations
