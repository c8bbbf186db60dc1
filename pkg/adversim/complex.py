"""Chromatic protocol complex of TP-pairs built by iterated xy-splits."""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Any, Optional, Sequence, Union

import numpy as np

from .adversary import AdversarySpec
from .engine import Engine
from .errors import MalformedComplexError
from .protocols.full_information import FullInformation
from .schedule import Pair, PairSchedule
from .utils import format_pair, parse_pair, stable_json_dumps
from .view import View

logger = logging.getLogger(__name__)

ScheduleLike = Union[PairSchedule, Sequence[Pair], str, None]


@dataclass(frozen=True)
class Vertex:
    """One processor state; ``carrier`` is the smallest original face holding it."""

    id: int
    color: int
    digest: str
    carrier: frozenset[int]
    position: tuple[float, ...] = ()
    view: Optional[View] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.carrier:
            raise ValueError(f"Vertex {self.id} has an empty carrier.")

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "color": self.color,
            "digest": self.digest,
            "carrier": sorted(self.carrier),
            "position": list(self.position),
        }


@dataclass
class SimComplex:
    """Pure simplicial complex: every top simplex is a sorted tuple of ``n`` vertex ids."""

    n: int
    vertices: list[Vertex]
    tops: list[tuple[int, ...]]
    schedule: tuple[Pair, ...] = ()

    @property
    def k(self) -> int:
        return len(self.schedule)

    @cached_property
    def index(self) -> dict[int, Vertex]:
        return {v.id: v for v in self.vertices}

    def vertex(self, vid: int) -> Vertex:
        return self.index[vid]

    def edges(self) -> set[tuple[int, int]]:
        """1-skeleton derived from the top simplices."""
        return {pair for top in self.tops for pair in combinations(top, 2)}

    def top_digests(self) -> list[tuple[str, ...]]:
        """Per top simplex, vertex digests ordered by color."""
        index = self.index
        return [tuple(index[v].digest for v in sorted(top, key=lambda v: index[v].color)) for top in self.tops]

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "schedule": ",".join(format_pair(p) for p in self.schedule),
            "vertices": [v.to_dict() for v in self.vertices],
            "tops": [list(t) for t in self.tops],
        }


def initial_complex(n: int, inputs: Optional[Sequence[Any]] = None) -> SimComplex:
    """The input simplex: vertex ``i`` is processor ``i`` in its initial state."""
    if n < 1:
        raise ValueError(f"Processor count must be >= 1, got {n}.")
    inputs = list(range(n)) if inputs is None else list(inputs)
    if len(inputs) != n:
        raise ValueError(f"Got {len(inputs)} inputs for n={n}.")
    corners = np.eye(n)
    vertices = []
    for i in range(n):
        view = View(i, inputs[i])
        vertices.append(Vertex(i, i, view.digest, frozenset({i}), tuple(float(x) for x in corners[i]), view))
    return SimComplex(n, vertices, [tuple(range(n))])


def _require_views(c: SimComplex) -> None:
    if any(v.view is None for v in c.vertices):
        raise MalformedComplexError("Splitting needs vertex views; complexes loaded from JSON carry digests only.")


def xy_split_round(c: SimComplex, pair: Pair) -> SimComplex:
    """One TP-pairs round on ``pair``: each {i, j} edge becomes a 3-edge path.

    For an edge ``x`` (color i) - ``y`` (color j) two vertices are added:
    ``z1`` of color j that heard x, and ``z2`` of color i that heard y. Every
    other vertex heard nothing this round.
    """
    i, j = pair
    if i == j or not (0 <= i < c.n and 0 <= j < c.n):
        raise ValueError(f"Pair {pair} is not a pair of distinct colors of n={c.n}.")
    _require_views(c)
    index = c.index

    silent: dict[int, Vertex] = {}
    for v in c.vertices:
        assert v.view is not None
        view = v.view.extend({})
        silent[v.id] = Vertex(v.id, v.color, view.digest, v.carrier, v.position, view)

    next_id = max(index) + 1
    added: list[Vertex] = []
    splits: dict[tuple[int, int], tuple[int, int]] = {}
    tops: list[tuple[int, ...]] = []
    for top in c.tops:
        by_color = Counter(index[v].color for v in top)
        if len(top) != c.n or by_color[i] != 1 or by_color[j] != 1:
            raise MalformedComplexError(f"Top simplex {top} does not hold exactly one {format_pair(pair)} edge.")
        x = next(index[v] for v in top if index[v].color == i)
        y = next(index[v] for v in top if index[v].color == j)
        rest = tuple(v for v in top if v not in (x.id, y.id))
        if (x.id, y.id) not in splits:
            assert x.view is not None and y.view is not None
            carrier = x.carrier | y.carrier
            px, py = np.asarray(x.position), np.asarray(y.position)
            z1_view = y.view.extend({i: x.view})
            z2_view = x.view.extend({j: y.view})
            z1 = Vertex(next_id, j, z1_view.digest, carrier, tuple(float(a) for a in px + (py - px) / 3.0), z1_view)
            z2 = Vertex(next_id + 1, i, z2_view.digest, carrier, tuple(float(a) for a in px + 2.0 * (py - px) / 3.0), z2_view)
            added.extend((z1, z2))
            splits[(x.id, y.id)] = (z1.id, z2.id)
            next_id += 2
        z1_id, z2_id = splits[(x.id, y.id)]
        for a, b in ((x.id, z1_id), (z1_id, z2_id), (z2_id, y.id)):
            tops.append(tuple(sorted(rest + (a, b))))

    vertices = [silent[v.id] for v in c.vertices] + added
    logger.debug("Split %s: %d edges, %d tops", format_pair(pair), len(splits), len(tops))
    return SimComplex(c.n, vertices, tops, c.schedule + ((min(i, j), max(i, j)),))


def as_schedule(n: int, schedule: ScheduleLike) -> PairSchedule:
    """Normalize a schedule; a pair list missing some pairs is padded with them."""
    if schedule is None:
        return PairSchedule.round_robin(n)
    if isinstance(schedule, PairSchedule):
        return schedule
    if isinstance(schedule, str):
        if schedule.strip().upper() == PairSchedule.ROUND_ROBIN:
            return PairSchedule.round_robin(n)
        pairs = [parse_pair(part) for part in schedule.split(",") if part.strip()]
    else:
        pairs = [(min(a, b), max(a, b)) for a, b in schedule]
    missing = [p for p in combinations(range(n), 2) if p not in pairs]
    return PairSchedule(n, pairs + missing)


def _pairs(n: int, schedule: ScheduleLike, k: int) -> list[Pair]:
    if k < 0:
        raise ValueError("Number of splits must be >= 0.")
    if k == 0:
        return []
    return as_schedule(n, schedule).take(k)


def build(n: int, schedule: ScheduleLike, k: int, inputs: Optional[Sequence[Any]] = None) -> SimComplex:
    """Apply ``k`` rounds of the schedule to the input simplex."""
    c = initial_complex(n, inputs)
    for pair in _pairs(n, schedule, k):
        c = xy_split_round(c, pair)
    return c


def check_chromatic(c: SimComplex) -> bool:
    """Every top simplex holds each of the ``n`` colors exactly once."""
    index = c.index
    return all(len(top) == c.n and {index[v].color for v in top} == set(range(c.n)) for top in c.tops)


def check_sperner(c: SimComplex) -> bool:
    """Every vertex's color lies in its carrier."""
    return all(v.color in v.carrier for v in c.vertices)


def check_boundary_path(c: SimComplex, i: int, j: int) -> bool:
    """The vertices on the original {i, j} side form an alternating i, j path from corner i to corner j."""
    side = frozenset({i, j})
    on_side = {v.id: v for v in c.vertices if v.carrier <= side}
    adjacency: dict[int, set[int]] = {vid: set() for vid in on_side}
    for a, b in c.edges():
        if a in on_side and b in on_side:
            adjacency[a].add(b)
            adjacency[b].add(a)
    start = [v.id for v in on_side.values() if v.carrier == {i}]
    end = [v.id for v in on_side.values() if v.carrier == {j}]
    if len(start) != 1 or len(end) != 1:
        return False
    if any(len(nbrs) > 2 for nbrs in adjacency.values()):
        return False

    path = [start[0]]
    previous = None
    while path[-1] != end[0]:
        options = [v for v in adjacency[path[-1]] if v != previous]
        if len(options) != 1:
            return False
        previous = path[-1]
        path.append(options[0])
    if len(path) != len(on_side):
        return False
    colors = [on_side[v].color for v in path]
    return all(color == (i if idx % 2 == 0 else j) for idx, color in enumerate(colors))


@dataclass
class CrossValidation:
    """Outcome of matching a complex against exhaustive executions."""

    ok: bool
    executions: int
    tops: int
    witness: Optional[dict[str, Any]] = None

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict[str, Any]:
        return {"ok": self.ok, "executions": self.executions, "tops": self.tops, "witness": self.witness}


def cross_validate(
    c: SimComplex,
    n: int,
    schedule: ScheduleLike,
    k: int,
    inputs: Optional[Sequence[Any]] = None,
    engine: Optional[Engine] = None,
) -> CrossValidation:
    """Match top simplices one-to-one with the final states of every TP-pairs execution."""
    inputs = list(range(n)) if inputs is None else list(inputs)
    engine = engine or Engine()
    tops = c.top_digests()
    if k == 0:
        execution_digests = [tuple(View(pid, item).digest for pid, item in enumerate(inputs))]
    else:
        spec = AdversarySpec.tp_pairs(n, as_schedule(n, schedule))
        execution_digests = [
            tuple(trace.digests[-1]) for _, trace in engine.iter_executions(FullInformation(), spec, k, inputs)
        ]

    exec_counts = Counter(execution_digests)
    top_counts = Counter(tops)
    if exec_counts != top_counts:
        missing = sorted(set(top_counts) - set(exec_counts))
        extra = sorted(set(exec_counts) - set(top_counts))
        witness = {
            "reason": "simplices and executions differ",
            "unmatched_tops": [list(t) for t in missing[:3]],
            "unmatched_executions": [list(e) for e in extra[:3]],
        }
        return CrossValidation(False, len(execution_digests), len(tops), witness)
    if any(count != 1 for count in exec_counts.values()):
        return CrossValidation(False, len(execution_digests), len(tops), {"reason": "two executions share final states"})

    realized = {frozenset(p) for states in execution_digests for p in combinations(states, 2)}
    skeleton = {frozenset((c.vertex(a).digest, c.vertex(b).digest)) for a, b in c.edges()}
    if realized != skeleton:
        return CrossValidation(False, len(execution_digests), len(tops), {"reason": "edge sets differ"})
    return CrossValidation(True, len(execution_digests), len(tops))


def to_dot(c: SimComplex) -> str:
    lines = ["graph complex {"]
    lines.extend(f'  {v.id} [label="p{v.color}"];' for v in c.vertices)
    lines.extend(f"  {a} -- {b};" for a, b in sorted(c.edges()))
    lines.append("}")
    return "\n".join(lines) + "\n"


def export(c: SimComplex, fmt: str) -> bytes:
    """Render as ``json``, ``dot`` (1-skeleton) or ``svg2d`` (planar, n = 3)."""
    if fmt == "json":
        return (stable_json_dumps(c.to_dict(), pretty=True) + "\n").encode("utf-8")
    if fmt == "dot":
        return to_dot(c).encode("utf-8")
    if fmt == "svg2d":
        from .plot import ComplexPlot

        return ComplexPlot(c).to_svg()
    raise ValueError(f"Unknown export format '{fmt}'. Use json, dot or svg2d.")


def from_json(data: Union[str, bytes, dict[str, Any]]) -> SimComplex:
    """Parse the JSON export; views are not restored."""
    doc = json.loads(data) if isinstance(data, (str, bytes)) else data
    vertices = [
        Vertex(
            int(v["id"]),
            int(v["color"]),
            str(v["digest"]),
            frozenset(int(x) for x in v["carrier"]),
            tuple(float(x) for x in v.get("position", [])),
        )
        for v in doc["vertices"]
    ]
    schedule = tuple(
        tuple(int(x) for x in part.split("-")) for part in str(doc.get("schedule", "")).split(",") if part
    )
    return SimComplex(int(doc["n"]), vertices, [tuple(int(x) for x in t) for t in doc["tops"]], schedule)  # type: ignore[arg-type]
