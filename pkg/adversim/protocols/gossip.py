"""Id-set gossip and the tournament emulation it provides over TP."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from itertools import combinations
from typing import Any, Mapping, Optional, Sequence

from ..adversary import AdversaryKind, AdversarySpec
from ..engine import Engine
from ..errors import ProtocolViolation
from ..graph import Rcg, contains_tournament
from ..protocol import Protocol
from ..trace import ExecutionTrace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IdSetState:
    """Ids a processor has heard of, plus its returned set once it returns."""

    owner: int
    s: frozenset[int]
    returned: Optional[tuple[int, frozenset[int]]] = None
    round: int = 0

    def __post_init__(self) -> None:
        if self.owner not in self.s:
            raise ValueError(f"Processor {self.owner} must belong to its own id set.")

    @classmethod
    def initial(cls, owner: int) -> "IdSetState":
        return cls(owner, frozenset({owner}))


class GossipProtocol(Protocol):
    """Broadcast the id set, union on receive; output the set after ``rounds`` rounds."""

    name = "gossip"
    params = {"rounds": None}

    def init(self, pid: int, item: Any) -> IdSetState:
        return IdSetState.initial(pid)

    def message(self, state: IdSetState) -> frozenset[int]:
        return state.s

    def receive(self, state: IdSetState, received: Mapping[int, frozenset[int]]) -> IdSetState:
        merged = state.s.union(*received.values())
        return replace(state, s=merged, round=state.round + 1)

    def output(self, state: IdSetState) -> Optional[frozenset[int]]:
        if self.p.rounds is None or state.round < self.p.rounds:
            return None
        return state.s


@dataclass
class GossipEmulation:
    rcg: Rcg
    sets: list[frozenset[int]]
    trace: ExecutionTrace

    def to_dict(self) -> dict[str, Any]:
        return {
            "rcg": self.rcg.to_dict(),
            "sets": [sorted(s) for s in self.sets],
            "rounds": self.trace.rounds,
        }


def gossip_rounds(n: int) -> int:
    return 2 * n - 1


def emulated_rcg(sets: Sequence[frozenset[int]]) -> Rcg:
    """Edge ``i -> j`` iff ``i`` is in ``S_j``."""
    n = len(sets)
    return Rcg(n, tuple((i, j) for j, s in enumerate(sets) for i in s if i != j))


def final_sets(trace: ExecutionTrace) -> list[frozenset[int]]:
    return [state.s for state in trace.final_states]


def emulate_tp_complete_over_tp(
    inputs: Sequence[Any],
    rounds: Optional[int] = None,
    seed: Optional[int] = 0,
    engine: Optional[Engine] = None,
    rcgs: Optional[Sequence[Rcg]] = None,
) -> GossipEmulation:
    """Run gossip under TP and return the emulated tournament-containing round.

    ``rcgs`` replays a fixed TP behavior instead of sampling one.
    """
    n = len(inputs)
    spec = AdversarySpec.tp(n)
    total = gossip_rounds(n) if rounds is None else int(rounds)
    protocol = GossipProtocol(rounds=total)
    engine = engine or Engine()
    if rcgs is None:
        trace = engine.run(protocol, spec, total, inputs, seed=seed)
    else:
        trace = engine.replay(protocol, spec, inputs, rcgs)
    sets = final_sets(trace)
    rcg = emulated_rcg(sets)
    if not contains_tournament(rcg):
        uncovered = [p for p in combinations(range(n), 2) if not (rcg.has_edge(*p) or rcg.has_edge(p[1], p[0]))]
        trace.violations.append({"check": "tournament-emulation", "uncovered": [list(p) for p in uncovered]})
        raise ProtocolViolation(
            f"Emulated round after {trace.rounds} TP rounds leaves pairs {uncovered} uncovered.",
            trace=trace,
            detail=uncovered,
        )
    return GossipEmulation(rcg=rcg, sets=sets, trace=trace)


def heard_by(states: Sequence[IdSetState], pid: int) -> frozenset[int]:
    """Processors whose id set contains ``pid``."""
    return frozenset(k for k, state in enumerate(states) if pid in state.s)


def check_gossip_progress(trace: ExecutionTrace) -> list[dict[str, Any]]:
    """Return every round in which gossip failed to make progress.

    For each pair ``(i, j)`` still uncovered at the start of a TP round, the
    number of processors that have heard of ``i`` plus those that have heard
    of ``j`` must grow. Id sets must also never shrink.
    """
    if trace.spec.kind != AdversaryKind.TP:
        raise ValueError(f"Gossip progress is only guaranteed under tp, trace uses {trace.spec}.")
    failures: list[dict[str, Any]] = []
    for idx in range(trace.rounds):
        before, after = trace.states[idx], trace.states[idx + 1]
        for pid, (old, new) in enumerate(zip(before, after)):
            if not old.s <= new.s:
                failures.append({"round": idx + 1, "pid": pid, "reason": "id set shrank"})
        for i, j in combinations(range(trace.n), 2):
            if i in before[j].s or j in before[i].s:
                continue
            grew = len(heard_by(after, i)) + len(heard_by(after, j))
            had = len(heard_by(before, i)) + len(heard_by(before, j))
            if grew <= had:
                failures.append({"round": idx + 1, "pair": [i, j], "reason": "no progress", "size": had})
    if failures:
        logger.debug("Gossip progress failures: %d", len(failures))
    return failures
