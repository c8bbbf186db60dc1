"""Register simulation analyzers."""

from __future__ import annotations

from ..adversary import AdversaryKind
from ..analyzer import TraceAnalyzer
from ..protocols.register import check_king_soundness


class KingSoundnessAnalyzer(TraceAnalyzer):
    """Every king round leaves the king's write with all processors still running."""

    check = "king-soundness"

    def run(self) -> None:
        if self.trace.spec.kind != AdversaryKind.TP_COMPLETE:
            self.skip(f"kings are only certified under tp-complete, trace uses {self.trace.spec}")
            return
        self._report(check_king_soundness(self.trace))


class KingLivenessAnalyzer(TraceAnalyzer):
    """Some processor finished by the end of the trace."""

    check = "king-liveness"
    needs_states = False

    def run(self) -> None:
        finished = [pid for pid, out in enumerate(self.trace.outputs) if out is not None]
        failures = [] if finished else [{"round": self.trace.rounds, "reason": "no processor finished"}]
        self._report(failures, finished=finished)
