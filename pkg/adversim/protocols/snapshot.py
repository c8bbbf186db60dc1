"""Snapshot over TP-complete: return the id set once its size equals the round number."""

from __future__ import annotations

from dataclasses import replace
from typing import Any, Iterable, Mapping, Optional, Sequence, Union

from ..adversary import AdversaryKind, AdversarySpec
from ..engine import Engine
from ..errors import ProtocolViolation
from ..graph import Rcg
from ..protocol import Protocol
from ..trace import ExecutionTrace
from .gossip import IdSetState

SnapshotOutputs = Union[Mapping[int, Iterable[int]], Iterable[tuple[int, Iterable[int]]]]


class SnapshotProtocol(Protocol):
    """Gossip id sets; at the end of round ``l`` return ``S`` if ``|S| == l``.

    A returned processor freezes its set and keeps relaying it.
    """

    name = "snapshot"

    def init(self, pid: int, item: Any) -> IdSetState:
        return IdSetState.initial(pid)

    def message(self, state: IdSetState) -> frozenset[int]:
        if state.returned is not None:
            return state.returned[1]
        return state.s

    def receive(self, state: IdSetState, received: Mapping[int, frozenset[int]]) -> IdSetState:
        round_number = state.round + 1
        if state.returned is not None:
            return replace(state, round=round_number)
        merged = state.s.union(*received.values())
        returned = (round_number, merged) if len(merged) == round_number else None
        return IdSetState(state.owner, merged, returned, round_number)

    def output(self, state: IdSetState) -> Optional[frozenset[int]]:
        return None if state.returned is None else state.returned[1]


def validate_snapshot(outputs: SnapshotOutputs) -> bool:
    """Self-inclusion for every processor and a containment chain across all of them."""
    items = outputs.items() if isinstance(outputs, Mapping) else outputs
    sets = []
    for pid, returned in items:
        s = frozenset(returned)
        if pid not in s:
            return False
        sets.append(s)
    sets.sort(key=len)
    return all(a <= b for a, b in zip(sets, sets[1:]))


def snapshot_failures(trace: ExecutionTrace) -> list[dict[str, Any]]:
    """Processors that did not return by round n, and any chain violation."""
    failures: list[dict[str, Any]] = []
    returned: dict[int, frozenset[int]] = {}
    for pid, out in enumerate(trace.outputs):
        if out is None or out[1] > trace.n:
            failures.append({"pid": pid, "reason": "did not return by round n"})
        else:
            returned[pid] = frozenset(out[0])
    if returned and not validate_snapshot(returned):
        failures.append({"reason": "returned sets are not snapshots", "sets": {p: sorted(s) for p, s in returned.items()}})
    return failures


def snapshot_over_tp_complete(
    inputs: Sequence[Any],
    seed: Optional[int] = 0,
    engine: Optional[Engine] = None,
    rcgs: Optional[Sequence[Rcg]] = None,
    spec: Optional[AdversarySpec] = None,
) -> dict[int, frozenset[int]]:
    """Run n rounds of the snapshot protocol and return each processor's set."""
    n = len(inputs)
    spec = spec or AdversarySpec.tp_complete(n)
    if spec.kind != AdversaryKind.TP_COMPLETE:
        raise ValueError(f"Snapshot rounds need tp-complete, got {spec}.")
    engine = engine or Engine()
    protocol = SnapshotProtocol()
    if rcgs is None:
        trace = engine.run(protocol, spec, n, inputs, seed=seed)
    else:
        trace = engine.replay(protocol, spec, inputs, rcgs)
    failures = snapshot_failures(trace)
    if failures:
        trace.violations.extend(failures)
        raise ProtocolViolation(f"Snapshot over {spec} failed: {failures[0]['reason']}.", trace=trace, detail=failures)
    return {pid: frozenset(out[0]) for pid, out in enumerate(trace.outputs) if out is not None}
