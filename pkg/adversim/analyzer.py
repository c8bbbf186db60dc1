"""Base analyzer abstractions for adversim."""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any, Optional

from .trace import ExecutionTrace


class TraceAnalyzer(ABC):
    """Base analyzer that checks one invariant on an execution trace."""

    check: str = "trace"
    needs_states: bool = True

    def __init__(self, trace: ExecutionTrace, **kwargs: Any) -> None:
        self.trace = trace
        self._analysis: dict[str, Any] = {"check": self.check, "passed": None}

    @abstractmethod
    def run(self) -> None:
        """Run the check."""

    def get_analysis(self) -> dict[str, Any]:
        """Return ``check``, ``passed``, ``first_violating_round`` and details."""
        return self._analysis

    def _report(self, failures: list[dict[str, Any]], **extra: Any) -> None:
        rounds = [f["round"] for f in failures if isinstance(f.get("round"), int)]
        first: Optional[int] = min(rounds) if rounds else None
        self._analysis = {
            "check": self.check,
            "passed": not failures,
            "first_violating_round": first,
            "failures": failures,
            **extra,
        }

    def skip(self, reason: str) -> None:
        self._analysis = {"check": self.check, "passed": None, "skipped": reason}

    def print_analysis(self) -> None:
        """Pretty print analysis results."""
        analysis = self.get_analysis()
        for key, value in analysis.items():
            print(f"{key}: {value}")


class AnalyzerProperty:
    """Picklable trace predicate backed by an analyzer class."""

    def __init__(self, analyzer_cls: type[TraceAnalyzer], **kwargs: Any) -> None:
        self.analyzer_cls = analyzer_cls
        self.kwargs = kwargs

    def __call__(self, trace: ExecutionTrace) -> bool:
        analyzer = self.analyzer_cls(trace, **self.kwargs)
        analyzer.run()
        return bool(analyzer.get_analysis()["passed"])

    def __repr__(self) -> str:
        return f"AnalyzerProperty({self.analyzer_cls.__name__})"
