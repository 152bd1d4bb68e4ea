from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from app.config import get_settings


def jsonable(value: Any) -> Any:
    """Convert numpy scalars, tuples and nested containers to plain JSON types."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [jsonable(v) for v in items]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


@dataclass
class CheckReport:
    """Outcome of one verification target at one half-dimension m."""

    target: str
    m: int
    holds: bool = True
    asserted: bool = True
    counterexamples: List[Any] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    limit: int = field(default_factory=lambda: get_settings().verification.counterexample_limit)

    @property
    def passed(self) -> bool:
        return self.holds or not self.asserted

    def record(self, counterexample: Any) -> None:
        self.holds = False
        if len(self.counterexamples) < self.limit:
            self.counterexamples.append(counterexample)

    def summary_line(self) -> str:
        if not self.asserted:
            status = "REPORT"
        else:
            status = "PASS" if self.holds else "FAIL"
        extra = ""
        if self.counterexamples:
            extra = f" counterexamples={len(self.counterexamples)}"
        return f"{self.target} m={self.m}: {status}{extra}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "target": self.target,
            "m": self.m,
            "holds": self.holds,
            "asserted": self.asserted,
            "counterexamples": jsonable(self.counterexamples),
            "details": jsonable(self.details),
        }


@dataclass
class MetricResult:
    name: str
    value: Any = None
    status: str = "ok"  # "ok" or "skipped"
    message: Optional[str] = None
    runtime_s: Optional[float] = None

    @classmethod
    def skipped(cls, name: str, message: str) -> "MetricResult":
        return cls(name=name, status="skipped", message=message)

    def to_dict(self, with_timings: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {"status": self.status, "value": jsonable(self.value)}
        if self.message:
            data["message"] = self.message
        if with_timings and self.runtime_s is not None:
            data["runtime_s"] = self.runtime_s
        return data


@dataclass
class AnalysisReport:
    identity: Dict[str, Any]
    metrics: Dict[str, MetricResult] = field(default_factory=dict)

    def add(self, result: MetricResult) -> None:
        self.metrics[result.name] = result

    def value(self, name: str) -> Any:
        return self.metrics[name].value

    def to_dict(self, with_timings: bool = False) -> Dict[str, Any]:
        return {
            "function": jsonable(self.identity),
            "metrics": {name: res.to_dict(with_timings) for name, res in self.metrics.items()},
        }

    def flat_rows(self) -> List[Dict[str, Any]]:
        rows = []
        for name, res in self.metrics.items():
            rows.append(
                {
                    "metric": name,
                    "status": res.status,
                    "value": res.value,
                    "message": res.message or "",
                }
            )
        return rows


__all__ = ["AnalysisReport", "CheckReport", "MetricResult", "jsonable"]
