"""Translations between TP-pairs and TP-complete."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Mapping, Optional, Sequence

from ..adversary import AdversarySpec, validate
from ..engine import Engine
from ..errors import ProtocolViolation
from ..graph import Rcg, contains_tournament
from ..protocol import Protocol
from ..schedule import PairSchedule
from ..trace import ExecutionTrace


@dataclass(frozen=True)
class PairsState:
    """Payloads heard from scheduled partners, and the senders heard per round."""

    owner: int
    item: Any
    round: int = 0
    heard: tuple[tuple[int, Any], ...] = ()
    log: tuple[tuple[int, ...], ...] = ()

    def heard_from(self) -> frozenset[int]:
        return frozenset(sender for sender, _ in self.heard)


class _ScheduledProtocol(Protocol):
    """Shared plumbing: a fixed pair schedule and a frozen first-send payload."""

    params = {"schedule": None}

    def __init__(self, **kwargs: Any) -> None:
        super().__init__(**kwargs)
        if not isinstance(self.p.schedule, PairSchedule):
            raise TypeError(f"{type(self).__name__} needs a PairSchedule, got {self.p.schedule!r}.")

    def describe(self) -> dict[str, Any]:
        return {"name": self.name, "params": {"schedule": self.p.schedule.to_string()}}

    def init(self, pid: int, item: Any) -> PairsState:
        return PairsState(pid, item)

    def message(self, state: PairsState) -> tuple[int, Any]:
        return (state.owner, state.item)

    def partner_heard(self, state: PairsState, received: Mapping[int, tuple[int, Any]]) -> Optional[int]:
        """The scheduled partner if its payload arrived this round."""
        a, b = self.p.schedule.pair_at(state.round)
        if state.owner not in (a, b):
            return None
        partner = b if state.owner == a else a
        return partner if partner in received else None


class PairsCollector(_ScheduledProtocol):
    """Collect the partner's payload in each scheduled round; output after one sweep."""

    name = "pairs-collect"

    def receive(self, state: PairsState, received: Mapping[int, tuple[int, Any]]) -> PairsState:
        partner = self.partner_heard(state, received)
        heard = state.heard
        if partner is not None and partner not in state.heard_from():
            heard = tuple(sorted(heard + ((partner, received[partner][1]),), key=lambda kv: kv[0]))
        return replace(state, round=state.round + 1, heard=heard)

    def output(self, state: PairsState) -> Optional[dict[int, Any]]:
        if state.round < self.p.schedule.cycle_length:
            return None
        return dict(state.heard)


class PairFilter(_ScheduledProtocol):
    """Keep only the delivery on the round's scheduled pair."""

    name = "pair-filter"

    def receive(self, state: PairsState, received: Mapping[int, tuple[int, Any]]) -> PairsState:
        partner = self.partner_heard(state, received)
        entry = () if partner is None else (partner,)
        return replace(state, round=state.round + 1, log=state.log + (entry,))


@dataclass
class PairsEmulation:
    rcg: Rcg
    delivered: dict[int, dict[int, Any]]
    trace: ExecutionTrace


def collected_rcg(states: Sequence[PairsState]) -> Rcg:
    """Edge ``i -> j`` iff ``j`` collected ``i``'s payload."""
    return Rcg(len(states), tuple((i, s.owner) for s in states for i in s.heard_from()))


def filtered_rcgs(states: Sequence[PairsState]) -> list[Rcg]:
    """Per-round pair deliveries reconstructed from what each endpoint kept."""
    n = len(states)
    rounds = len(states[0].log) if states else 0
    out = []
    for idx in range(rounds):
        edges = tuple((sender, s.owner) for s in states for sender in s.log[idx])
        out.append(Rcg(n, edges))
    return out


def tp_pairs_to_tp_complete(
    inputs: Sequence[Any],
    schedule: Optional[PairSchedule] = None,
    seed: Optional[int] = 0,
    engine: Optional[Engine] = None,
    rcgs: Optional[Sequence[Rcg]] = None,
) -> PairsEmulation:
    """Emulate one TP-complete round with one sweep of TP-pairs rounds."""
    n = len(inputs)
    schedule = schedule or PairSchedule.round_robin(n)
    spec = AdversarySpec.tp_pairs(n, schedule)
    protocol = PairsCollector(schedule=schedule)
    engine = engine or Engine()
    rounds = schedule.cycle_length
    if rcgs is None:
        trace = engine.run(protocol, spec, rounds, inputs, seed=seed)
    else:
        trace = engine.replay(protocol, spec, inputs, rcgs)
    states = trace.final_states
    rcg = collected_rcg(states)
    if not contains_tournament(rcg):
        trace.violations.append({"check": "pairs-collect", "rcg": rcg.to_dict()})
        raise ProtocolViolation(f"Collected graph {rcg.to_json()} contains no tournament.", trace=trace, detail=rcg)
    return PairsEmulation(rcg=rcg, delivered={s.owner: dict(s.heard) for s in states}, trace=trace)


def tp_complete_to_tp_pairs(
    inputs: Sequence[Any],
    schedule: Optional[PairSchedule] = None,
    seed: Optional[int] = 0,
    engine: Optional[Engine] = None,
    rcgs: Optional[Sequence[Rcg]] = None,
) -> list[Rcg]:
    """Emulate one sweep of TP-pairs rounds with as many TP-complete rounds."""
    n = len(inputs)
    schedule = schedule or PairSchedule.round_robin(n)
    protocol = PairFilter(schedule=schedule)
    engine = engine or Engine()
    complete = AdversarySpec.tp_complete(n)
    if rcgs is None:
        trace = engine.run(protocol, complete, schedule.cycle_length, inputs, seed=seed)
    else:
        trace = engine.replay(protocol, complete, inputs, rcgs)
    restrictions = filtered_rcgs(trace.final_states)
    illegal = translation_failures(trace, schedule)
    if illegal:
        trace.violations.extend(illegal)
        raise ProtocolViolation(f"Pair restriction of round {illegal[0]['round']} is not legal.", trace=trace, detail=illegal)
    return restrictions


def translation_failures(trace: ExecutionTrace, schedule: PairSchedule) -> list[dict[str, Any]]:
    """Rounds whose kept delivery is not a legal TP-pairs round or differs from the real graph."""
    pairs_spec = AdversarySpec.tp_pairs(trace.n, schedule)
    failures = []
    for idx, g in enumerate(filtered_rcgs(trace.final_states)):
        expected = trace.rcgs[idx].restrict(schedule.pair_at(idx))
        if g != expected or not validate(pairs_spec, idx, g):
            failures.append({"round": idx + 1, "kept": g.to_dict(), "expected": expected.to_dict()})
    return failures


def trace_schedule(trace: ExecutionTrace) -> PairSchedule:
    text = trace.params.get("schedule")
    if isinstance(text, str):
        return PairSchedule.parse(text, trace.n)
    return trace.spec.schedule or PairSchedule.round_robin(trace.n)
