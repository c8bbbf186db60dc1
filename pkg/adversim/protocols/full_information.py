"""Full-information protocol: every round each processor broadcasts its whole history."""

from __future__ import annotations

from typing import Any, Mapping, Optional

from ..protocol import Protocol
from ..view import View


class FullInformation(Protocol):
    """Broadcast the entire View; optionally output it after ``k`` rounds."""

    name = "full-information"
    params = {"k": None}

    def init(self, pid: int, item: Any) -> View:
        return View(pid, item)

    def message(self, state: View) -> View:
        return state

    def receive(self, state: View, received: Mapping[int, View]) -> View:
        return state.extend(received)

    def output(self, state: View) -> Optional[View]:
        if self.p.k is None or state.depth < self.p.k:
            return None
        return state

    def state_digest(self, state: View) -> str:
        return state.digest
