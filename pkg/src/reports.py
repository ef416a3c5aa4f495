"""
Report Module for DialecticKernel
Law-check results shared by every validator, the laws runner and the CLI
"""

from dataclasses import dataclass, field, asdict
from typing import Any, Callable, Dict, Iterable, List, Optional, Union

from src.config import get_settings


Witness = Union[str, Callable[[], str]]


@dataclass
class LawCheck:
    """Outcome of one exhaustive (or sampled) law check"""
    law: str
    instances: int = 0
    failures: int = 0
    witnesses: List[str] = field(default_factory=list)
    skipped: Optional[str] = None
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.skipped is None and self.failures == 0

    @property
    def status(self) -> str:
        if self.skipped is not None:
            return "SKIP"
        return "PASS" if self.failures == 0 else "FAIL"

    def record(self, ok: bool, witness: Witness = "") -> bool:
        """Count one instance; keep a bounded number of counterexample descriptions"""
        self.instances += 1
        if not ok:
            self.failures += 1
            if len(self.witnesses) < get_settings().max_witnesses:
                self.witnesses.append(witness() if callable(witness) else witness)
        return ok

    def record_many(self, total: int, bad: Iterable[str], bad_count: Optional[int] = None) -> None:
        """Account for a vectorized check of `total` instances"""
        bad = list(bad)
        self.instances += total
        self.failures += len(bad) if bad_count is None else bad_count
        room = get_settings().max_witnesses - len(self.witnesses)
        self.witnesses.extend(bad[:max(room, 0)])

    def skip(self, reason: str) -> "LawCheck":
        self.skipped = reason
        return self

    def line(self) -> str:
        text = f"{self.status} {self.law} ({self.instances} instances"
        if self.failures:
            text += f", {self.failures} violations"
        text += ")"
        if self.skipped:
            text += f" - {self.skipped}"
        return text


@dataclass
class Report:
    """A named collection of law checks"""
    subject: str
    checks: List[LawCheck] = field(default_factory=list)

    def check(self, law: str) -> LawCheck:
        for existing in self.checks:
            if existing.law == law:
                return existing
        created = LawCheck(law)
        self.checks.append(created)
        return created

    def extend(self, other: "Report") -> "Report":
        for item in other.checks:
            self.checks.append(item)
        return self

    @property
    def passed(self) -> bool:
        return all(c.passed or c.skipped is not None for c in self.checks)

    def failed_checks(self) -> List[LawCheck]:
        return [c for c in self.checks if c.status == "FAIL"]

    def __getitem__(self, law: str) -> LawCheck:
        for existing in self.checks:
            if existing.law == law:
                return existing
        raise KeyError(law)

    def __contains__(self, law: str) -> bool:
        return any(c.law == law for c in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "checks": [dict(asdict(c), status=c.status) for c in self.checks],
        }

    def lines(self) -> List[str]:
        return [c.line() for c in self.checks]
