"""Snapshot termination and validity analyzer."""

from __future__ import annotations

from ..analyzer import TraceAnalyzer
from ..protocols.snapshot import snapshot_failures


class SnapshotAnalyzer(TraceAnalyzer):
    """Each processor returns by round n and the returned sets form a chain."""

    check = "snapshot-valid"
    needs_states = False

    def run(self) -> None:
        self._report(snapshot_failures(self.trace))
