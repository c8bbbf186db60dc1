"""Single-writer single-reader register simulation over TP-complete.

Every processor repeatedly writes a vector of SWSR register values and then
reads. A write completes in the first round in which its writer is a king:
every processor it heard from that round already reports the write. Since
TP-complete delivers at least one direction per pair, the processors it did
not hear from have received the write in that same round. After ``writes``
write/read iterations the processor broadcasts a final triplet carrying its
output and becomes a relay.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Iterable, Mapping, Optional, Sequence

import pandas as pd

from ..adversary import AdversaryKind, AdversarySpec
from ..engine import Engine
from ..graph import Rcg
from ..protocol import Protocol
from ..trace import ExecutionTrace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WriteTriplet:
    """Write ``seq`` of ``writer``; ``vector[m]`` is the value for reader ``m``.

    A ``final`` triplet repeats the last write and carries the writer's output.
    """

    writer: int
    vector: tuple[Any, ...]
    seq: int
    final: bool = False
    output: Optional[tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if self.seq < 1:
            raise ValueError(f"Write sequence numbers start at 1, got {self.seq}.")
        if not 0 <= self.writer < len(self.vector):
            raise ValueError(f"Writer {self.writer} is outside a vector of length {len(self.vector)}.")
        if self.vector[self.writer] is not None:
            raise ValueError("A processor never writes to its own register slot.")

    @property
    def order(self) -> tuple[int, bool]:
        return (self.seq, self.final)


@dataclass(frozen=True)
class KnowledgeVector:
    """Most advanced write known per writer, plus processors known to be done."""

    owner: int
    latest: tuple[Optional[WriteTriplet], ...]
    done: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        for j, triplet in enumerate(self.latest):
            if triplet is not None and triplet.writer != j:
                raise ValueError(f"Slot {j} holds a write of processor {triplet.writer}.")
        if self.latest[self.owner] is None:
            raise ValueError("A knowledge vector always holds its owner's current write.")

    @property
    def n(self) -> int:
        return len(self.latest)

    def seq_of(self, writer: int) -> int:
        triplet = self.latest[writer]
        return 0 if triplet is None else triplet.seq

    def summary(self) -> tuple[int, ...]:
        return tuple(self.seq_of(j) for j in range(self.n))

    def merge(self, others: Iterable["KnowledgeVector"]) -> "KnowledgeVector":
        latest = list(self.latest)
        done = set(self.done)
        for other in others:
            if other.n != self.n:
                raise ValueError(f"Cannot merge vectors of sizes {self.n} and {other.n}.")
            done |= other.done
            for j, triplet in enumerate(other.latest):
                if triplet is not None and (latest[j] is None or triplet.order > latest[j].order):
                    latest[j] = triplet
        done |= {j for j, t in enumerate(latest) if t is not None and t.final}
        return KnowledgeVector(self.owner, tuple(latest), frozenset(done))

    def with_own(self, triplet: WriteTriplet) -> "KnowledgeVector":
        latest = list(self.latest)
        latest[self.owner] = triplet
        done = self.done | {self.owner} if triplet.final else self.done
        return KnowledgeVector(self.owner, tuple(latest), done)


def rank_of(owner: int, seqs: Sequence[int]) -> tuple[Any, ...]:
    return (seqs[owner], sum(seqs), tuple(seqs))


def vector_rank(kv: KnowledgeVector) -> tuple[Any, ...]:
    """Total order on knowledge vectors extending componentwise dominance."""
    return rank_of(kv.owner, kv.summary())


def king_condition(kv: KnowledgeVector, received: Mapping[int, KnowledgeVector]) -> bool:
    """Whether the owner of ``kv`` is a king this round.

    ``received`` maps each sender heard this round to the vector it sent.
    Every sender that is not known to be done must already hold the owner's
    current write.
    """
    done = kv.merge(received.values()).done
    own = kv.seq_of(kv.owner)
    return all(
        other.seq_of(kv.owner) >= own
        for sender, other in received.items()
        if sender != kv.owner and sender not in done
    )


@dataclass(frozen=True)
class Operation:
    """A completed write (``seq``) or read (per-writer ``seqs``) at ``round``."""

    pid: int
    kind: str
    round: int
    seq: int
    seqs: tuple[int, ...] = ()


@dataclass(frozen=True)
class RegisterState:
    pid: int
    item: Any
    kv: KnowledgeVector
    round: int = 0
    ops: tuple[Operation, ...] = ()
    done_round: Optional[int] = None

    @property
    def seq(self) -> int:
        return self.kv.seq_of(self.pid)

    @property
    def done(self) -> bool:
        return self.done_round is not None


def write_values(n: int, writer: int, item: Any, seq: int, read: tuple[int, ...]) -> tuple[Any, ...]:
    """Register values of a write: the input first, then the previous read."""
    value = item if seq == 1 else (seq, read)
    return tuple(None if m == writer else value for m in range(n))


class RegisterProtocol(Protocol):
    """Write/read iterations certified by the king condition."""

    name = "register"
    params = {"n": None, "writes": 1}

    def __init__(self, **kwargs: Any) -> None:
        super().__init__(**kwargs)
        if self.p.n is None or int(self.p.n) < 1:
            raise ValueError("RegisterProtocol needs the processor count n >= 1.")
        if int(self.p.writes) < 1:
            raise ValueError("RegisterProtocol needs at least one write per processor.")

    def init(self, pid: int, item: Any) -> RegisterState:
        n = int(self.p.n)
        first = WriteTriplet(pid, write_values(n, pid, item, 1, ()), 1)
        latest = tuple(first if j == pid else None for j in range(n))
        return RegisterState(pid, item, KnowledgeVector(pid, latest))

    def message(self, state: RegisterState) -> KnowledgeVector:
        return state.kv

    def receive(self, state: RegisterState, received: Mapping[int, KnowledgeVector]) -> RegisterState:
        round_number = state.round + 1
        merged = state.kv.merge(received.values())
        if state.done or not king_condition(state.kv, received):
            return replace(state, kv=merged, round=round_number)

        seq = state.seq
        current = merged.latest[state.pid]
        assert current is not None
        read = merged.summary()
        ops = state.ops + (
            Operation(state.pid, "write", round_number, seq),
            Operation(state.pid, "read", round_number, seq, read),
        )
        if seq >= int(self.p.writes):
            final = replace(current, final=True, output=read)
            return replace(state, kv=merged.with_own(final), round=round_number, ops=ops, done_round=round_number)
        nxt = WriteTriplet(state.pid, write_values(merged.n, state.pid, state.item, seq + 1, read), seq + 1)
        return replace(state, kv=merged.with_own(nxt), round=round_number, ops=ops)

    def output(self, state: RegisterState) -> Optional[tuple[int, ...]]:
        if not state.done:
            return None
        own = state.kv.latest[state.pid]
        return None if own is None else own.output


def all_done(states: Sequence[RegisterState]) -> bool:
    return all(s.done for s in states)


def any_done(states: Sequence[RegisterState]) -> bool:
    return any(s.done for s in states)


def default_budget(n: int, writes: int) -> int:
    return 64 * n * writes


@dataclass
class RegisterSimOutcome:
    """Completed operations, output rounds and linearization of one simulation."""

    n: int
    writes: int
    budget: int
    rounds: int
    operations: list[Operation] = field(default_factory=list)
    output_rounds: list[Optional[int]] = field(default_factory=list)
    all_done: bool = False
    seed: Any = None
    linearization: list[dict[str, Any]] = field(default_factory=list)

    @classmethod
    def from_trace(cls, trace: ExecutionTrace, writes: int, budget: int) -> "RegisterSimOutcome":
        final = trace.final_states
        operations = sorted(
            (op for state in final for op in state.ops),
            key=lambda op: (op.round, op.pid, op.kind != "write"),
        )
        outcome = cls(
            n=trace.n,
            writes=writes,
            budget=budget,
            rounds=trace.rounds,
            operations=operations,
            output_rounds=[s.done_round for s in final],
            all_done=all_done(final),
            seed=trace.seed,
        )
        outcome.linearization = linearize(outcome)
        return outcome

    def to_frame(self) -> pd.DataFrame:
        """One row per completed operation."""
        rows = [
            {"pid": op.pid, "kind": op.kind, "round": op.round, "seq": op.seq, "seqs": list(op.seqs)}
            for op in self.operations
        ]
        return pd.DataFrame(rows, columns=["pid", "kind", "round", "seq", "seqs"])

    def reads_frame(self) -> pd.DataFrame:
        """One row per (reader, writer) pair of every read."""
        rows = [
            {"reader": op.pid, "writer": w, "round": op.round, "seq": s}
            for op in self.operations
            if op.kind == "read"
            for w, s in enumerate(op.seqs)
        ]
        return pd.DataFrame(rows, columns=["reader", "writer", "round", "seq"]).astype("int64")

    def writes_frame(self) -> pd.DataFrame:
        rows = [{"writer": op.pid, "round": op.round, "seq": op.seq} for op in self.operations if op.kind == "write"]
        return pd.DataFrame(rows, columns=["writer", "round", "seq"]).astype("int64")

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": "register-outcome",
            "n": self.n,
            "writes": self.writes,
            "budget": self.budget,
            "rounds": self.rounds,
            "all_done": self.all_done,
            "seed": self.seed,
            "output_rounds": list(self.output_rounds),
            "operations": [
                {"pid": op.pid, "kind": op.kind, "round": op.round, "seq": op.seq, "seqs": list(op.seqs)}
                for op in self.operations
            ],
            "linearization": list(self.linearization),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RegisterSimOutcome":
        if data.get("kind") != "register-outcome":
            raise ValueError("Not a register outcome document.")
        return cls(
            n=int(data["n"]),
            writes=int(data["writes"]),
            budget=int(data["budget"]),
            rounds=int(data["rounds"]),
            operations=[
                Operation(int(o["pid"]), str(o["kind"]), int(o["round"]), int(o["seq"]), tuple(int(s) for s in o["seqs"]))
                for o in data.get("operations", [])
            ],
            output_rounds=[None if r is None else int(r) for r in data.get("output_rounds", [])],
            all_done=bool(data.get("all_done", False)),
            seed=data.get("seed"),
            linearization=list(data.get("linearization", [])),
        )


def linearize(outcome: RegisterSimOutcome) -> list[dict[str, Any]]:
    """Order operations by their linearization round.

    A write is linearized at the first round any other processor read it (or
    at its completion round if nobody did); a read at the round it was taken.
    Within a round writes come before reads, and reads follow the rank of the
    vector they read.
    """
    reads = [op for op in outcome.operations if op.kind == "read"]
    entries = []
    for op in outcome.operations:
        if op.kind == "write":
            seen = [r.round for r in reads if r.pid != op.pid and r.seqs[op.pid] >= op.seq]
            at = min(seen, default=op.round)
            entries.append(((at, 0, (), op.pid), {"kind": "write", "pid": op.pid, "seq": op.seq, "round": at}))
        else:
            rank = rank_of(op.pid, op.seqs)
            entries.append(((op.round, 1, rank, op.pid), {"kind": "read", "pid": op.pid, "seqs": list(op.seqs), "round": op.round}))
    entries.sort(key=lambda e: e[0])
    return [entry for _, entry in entries]


def _violations(outcome: RegisterSimOutcome) -> list[str]:
    reads = outcome.reads_frame()
    writes = outcome.writes_frame()
    problems: list[str] = []

    for pid in range(outcome.n):
        kinds = [op.kind for op in outcome.operations if op.pid == pid]
        if kinds != ["write", "read"] * (len(kinds) // 2) or len(kinds) % 2:
            problems.append(f"processor {pid} does not alternate write and read")
        seqs = [op.seq for op in outcome.operations if op.pid == pid and op.kind == "write"]
        if seqs != list(range(1, len(seqs) + 1)):
            problems.append(f"processor {pid} completed writes {seqs} out of order")
    if reads.empty:
        return problems

    ordered = reads.sort_values(["reader", "writer", "round"])
    steps = ordered.groupby(["reader", "writer"])["seq"].diff().dropna()
    if (steps < 0).any():
        problems.append("a reader saw a writer's sequence number decrease")

    if not writes.empty:
        completed = writes.sort_values("round").rename(columns={"seq": "completed"})
        lagging = pd.merge_asof(
            reads.sort_values("round"),
            completed,
            on="round",
            by="writer",
            allow_exact_matches=False,
            direction="backward",
        )
        lagging["completed"] = lagging["completed"].fillna(0)
        if (lagging["seq"] < lagging["completed"]).any():
            problems.append("a read missed a write completed in an earlier round")

    issued = pd.concat(
        [
            pd.DataFrame({"writer": list(range(outcome.n)), "round": 0, "issued": 1}),
            writes.assign(issued=writes["seq"] + 1)[["writer", "round", "issued"]],
        ],
        ignore_index=True,
    ).sort_values("round")
    future = pd.merge_asof(reads.sort_values("round"), issued, on="round", by="writer", direction="backward")
    if (future["seq"] > future["issued"]).any():
        problems.append("a read returned a write issued after the read")
    return problems


def validate_swsr_histories(outcome: RegisterSimOutcome) -> bool:
    """Check alternation plus monotone, fresh and issued reads per (writer, reader)."""
    problems = _violations(outcome)
    for problem in problems:
        logger.info("History violation: %s", problem)
    return not problems


def history_violations(outcome: RegisterSimOutcome) -> list[str]:
    return _violations(outcome)


def simulate_rwwf(
    n: int,
    writes: int,
    budget: Optional[int] = None,
    seed: Optional[int] = 0,
    inputs: Optional[Sequence[Any]] = None,
    engine: Optional[Engine] = None,
    rcgs: Optional[Sequence[Rcg]] = None,
) -> RegisterSimOutcome:
    """Run the register simulation until every processor is done or ``budget`` rounds pass."""
    budget = default_budget(n, writes) if budget is None else int(budget)
    inputs = list(range(n)) if inputs is None else list(inputs)
    spec = AdversarySpec.tp_complete(n)
    protocol = RegisterProtocol(n=n, writes=writes)
    engine = engine or Engine()
    if rcgs is None:
        trace = engine.run(protocol, spec, budget, inputs, seed=seed, until=all_done)
    else:
        trace = engine.replay(protocol, spec, inputs, rcgs)
    outcome = RegisterSimOutcome.from_trace(trace, writes, budget)
    if not outcome.all_done:
        logger.warning("Register simulation exhausted its budget of %d rounds (seed %s)", budget, seed)
    return outcome


def unsound_kings(trace: ExecutionTrace) -> list[dict[str, Any]]:
    """King rounds after which some processor not done at the start of the round lacks the write.

    Under TP-complete the result is always empty; weaker adversaries can produce entries.
    """
    failures: list[dict[str, Any]] = []
    for idx in range(trace.rounds):
        before, after = trace.states[idx], trace.states[idx + 1]
        for king in after:
            for op in king.ops:
                if op.kind != "write" or op.round != idx + 1:
                    continue
                missing = [
                    j
                    for j, state in enumerate(after)
                    if not before[j].done and state.kv.seq_of(king.pid) < op.seq
                ]
                if missing:
                    failures.append({"round": idx + 1, "king": king.pid, "seq": op.seq, "missing": missing})
    return failures


def check_king_soundness(trace: ExecutionTrace) -> list[dict[str, Any]]:
    """Every king must have reached all processors that were not done at the start of its round."""
    if trace.spec.kind != AdversaryKind.TP_COMPLETE:
        raise ValueError(f"King rounds can only be certified under tp-complete, trace uses {trace.spec}.")
    return unsound_kings(trace)
