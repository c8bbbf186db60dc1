"""Round-graph legality analyzer."""

from __future__ import annotations

from ..analyzer import TraceAnalyzer


class RcgLegalityAnalyzer(TraceAnalyzer):
    """Every recorded round graph satisfies the trace's adversary."""

    check = "rcg-legality"
    needs_states = False

    def run(self) -> None:
        bad = self.trace.first_invalid_round()
        failures = [] if bad is None else [{"round": bad, "rcg": self.trace.rcgs[bad - 1].to_dict()}]
        self._report(failures, rounds=self.trace.rounds)
