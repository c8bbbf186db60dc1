"""Gossip analyzers."""

from __future__ import annotations

from itertools import combinations

from ..adversary import AdversaryKind
from ..analyzer import TraceAnalyzer
from ..graph import contains_tournament
from ..protocols.gossip import check_gossip_progress, emulated_rcg, final_sets


class TournamentEmulationAnalyzer(TraceAnalyzer):
    """The final id sets cover every pair in at least one direction."""

    check = "tournament-emulation"
    needs_states = False

    def run(self) -> None:
        if self.trace.states:
            sets = final_sets(self.trace)
        elif all(out is not None for out in self.trace.outputs):
            sets = [frozenset(out[0]) for out in self.trace.outputs]
        else:
            self.skip("trace has neither states nor gossip outputs")
            return
        rcg = emulated_rcg(sets)
        failures = []
        if not contains_tournament(rcg):
            uncovered = [
                [i, j] for i, j in combinations(range(rcg.n), 2) if not (rcg.has_edge(i, j) or rcg.has_edge(j, i))
            ]
            failures.append({"round": self.trace.rounds, "uncovered": uncovered})
        self._report(failures, emulated=rcg.to_dict())


class GossipProgressAnalyzer(TraceAnalyzer):
    """Each TP round spreads the id of some endpoint of every uncovered pair."""

    check = "gossip-progress"

    def run(self) -> None:
        if self.trace.spec.kind != AdversaryKind.TP:
            self.skip(f"progress is only guaranteed under tp, trace uses {self.trace.spec}")
            return
        self._report(check_gossip_progress(self.trace))
