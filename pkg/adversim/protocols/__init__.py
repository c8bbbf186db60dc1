"""Built-in protocols."""

from __future__ import annotations

from typing import Any, Mapping, Optional

from ..protocol import Protocol
from ..schedule import PairSchedule
from .full_information import FullInformation
from .gossip import (
    GossipProtocol,
    IdSetState,
    check_gossip_progress,
    emulate_tp_complete_over_tp,
    gossip_rounds,
)
from .pairs import PairFilter, PairsCollector, tp_complete_to_tp_pairs, tp_pairs_to_tp_complete
from .register import (
    KnowledgeVector,
    RegisterProtocol,
    RegisterSimOutcome,
    WriteTriplet,
    check_king_soundness,
    king_condition,
    simulate_rwwf,
    validate_swsr_histories,
    vector_rank,
)
from .snapshot import SnapshotProtocol, snapshot_over_tp_complete, validate_snapshot

PROTOCOLS: dict[str, type[Protocol]] = {
    cls.name: cls
    for cls in (FullInformation, GossipProtocol, SnapshotProtocol, RegisterProtocol, PairsCollector, PairFilter)
}


def build_protocol(name: str, n: int, params: Optional[Mapping[str, Any]] = None) -> Protocol:
    """Instantiate a protocol by name, filling in ``n`` and parsing schedule strings."""
    if name not in PROTOCOLS:
        raise ValueError(f"Unknown protocol '{name}'. Choose from {sorted(PROTOCOLS)}.")
    cls = PROTOCOLS[name]
    values = dict(params or {})
    if "n" in cls.params:
        values["n"] = n
    if "schedule" in cls.params:
        schedule = values.get("schedule") or PairSchedule.ROUND_ROBIN
        values["schedule"] = schedule if isinstance(schedule, PairSchedule) else PairSchedule.parse(schedule, n)
    if cls is GossipProtocol and values.get("rounds") is None:
        values["rounds"] = gossip_rounds(n)
    return cls(**values)


__all__ = [
    "PROTOCOLS",
    "build_protocol",
    "FullInformation",
    "GossipProtocol",
    "SnapshotProtocol",
    "RegisterProtocol",
    "PairsCollector",
    "PairFilter",
    "IdSetState",
    "WriteTriplet",
    "KnowledgeVector",
    "RegisterSimOutcome",
    "emulate_tp_complete_over_tp",
    "check_gossip_progress",
    "snapshot_over_tp_complete",
    "validate_snapshot",
    "king_condition",
    "simulate_rwwf",
    "validate_swsr_histories",
    "check_king_soundness",
    "vector_rank",
    "tp_pairs_to_tp_complete",
    "tp_complete_to_tp_pairs",
]
