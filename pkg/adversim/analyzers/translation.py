"""TP-pairs / TP-complete translation analyzer."""

from __future__ import annotations

from ..adversary import AdversaryKind
from ..analyzer import TraceAnalyzer
from ..graph import contains_tournament
from ..protocols.pairs import PairFilter, PairsCollector, collected_rcg, trace_schedule, translation_failures


class PairsTranslationAnalyzer(TraceAnalyzer):
    """Collected sweeps contain a tournament; filtered rounds are legal pair rounds."""

    check = "pairs-translation"

    def run(self) -> None:
        schedule = trace_schedule(self.trace)
        kind = self.trace.spec.kind
        if self.trace.protocol == PairsCollector.name and kind == AdversaryKind.TP_PAIRS:
            failures = []
            if self.trace.rounds >= schedule.cycle_length:
                rcg = collected_rcg(self.trace.final_states)
                if not contains_tournament(rcg):
                    failures.append({"round": self.trace.rounds, "collected": rcg.to_dict()})
            self._report(failures)
        elif self.trace.protocol == PairFilter.name and kind == AdversaryKind.TP_COMPLETE:
            self._report(translation_failures(self.trace, schedule))
        else:
            self.skip(f"no translation check for {self.trace.protocol} under {self.trace.spec}")
