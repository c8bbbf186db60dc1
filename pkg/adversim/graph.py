"""Round communication graphs and the directed-graph facts built on them."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from typing import Any, Iterator

import numpy as np
from numpy.typing import NDArray

from .utils import stable_json_dumps

Edge = tuple[int, int]


@dataclass(frozen=True)
class Rcg:
    """Directed message-delivery graph of one synchronous round.

    An edge ``(s, r)`` means the message from ``s`` to ``r`` was delivered.
    Self-delivery is implicit and never stored. Edges are kept as a sorted
    tuple so equal graphs hash and serialize identically.
    """

    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"Processor count must be an integer >= 1, got {self.n!r}.")
        normalized = tuple(sorted({(int(s), int(r)) for s, r in self.edges}))
        for s, r in normalized:
            if not (0 <= s < self.n and 0 <= r < self.n):
                raise ValueError(f"Edge {(s, r)} has an index outside [0, {self.n}).")
            if s == r:
                raise ValueError(f"Self-loop {(s, r)} is implicit and may not be stored.")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", normalized)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def _out(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for s, r in self.edges:
            out[s].append(r)
        return tuple(tuple(v) for v in out)

    @cached_property
    def _in(self) -> tuple[tuple[int, ...], ...]:
        inn: list[list[int]] = [[] for _ in range(self.n)]
        for s, r in self.edges:
            inn[r].append(s)
        return tuple(tuple(sorted(v)) for v in inn)

    def has_edge(self, sender: int, receiver: int) -> bool:
        return (sender, receiver) in self.edge_set

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        """Return receivers of ``v``'s message, ascending."""
        return self._out[v]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        """Return senders heard by ``v``, ascending."""
        return self._in[v]

    def adjacency(self) -> NDArray[np.bool_]:
        """Return the boolean adjacency matrix."""
        adj = np.zeros((self.n, self.n), dtype=bool)
        for s, r in self.edges:
            adj[s, r] = True
        return adj

    def restrict(self, pair: tuple[int, int]) -> "Rcg":
        """Keep only the edges between the two processors of ``pair``."""
        a, b = pair
        return Rcg(self.n, tuple(e for e in self.edges if e in {(a, b), (b, a)}))

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    def to_primitive(self) -> dict[str, Any]:
        return self.to_dict()

    def to_json(self) -> str:
        """Return the canonical JSON form."""
        return stable_json_dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Rcg":
        return cls(int(data["n"]), tuple((int(s), int(r)) for s, r in data.get("edges", [])))

    def to_dot(self, name: str = "rcg") -> str:
        """Return a DOT digraph with vertices labelled ``p0 .. p{n-1}``."""
        lines = [f"digraph {name} {{"]
        lines.extend(f'  {v} [label="p{v}"];' for v in range(self.n))
        lines.extend(f"  {s} -> {r};" for s, r in self.edges)
        lines.append("}")
        return "\n".join(lines) + "\n"

    @classmethod
    def complete(cls, n: int) -> "Rcg":
        return cls(n, tuple((s, r) for s in range(n) for r in range(n) if s != r))

    @classmethod
    def all_digraphs(cls, n: int) -> Iterator["Rcg"]:
        """Yield all 2^(n(n-1)) loop-free digraphs on ``n`` vertices."""
        slots = [(s, r) for s in range(n) for r in range(n) if s != r]
        for mask in product((False, True), repeat=len(slots)):
            yield cls(n, tuple(e for e, keep in zip(slots, mask) if keep))


@dataclass(frozen=True)
class Tournament(Rcg):
    """Exactly one orientation for every unordered pair."""

    def __post_init__(self) -> None:
        super().__post_init__()
        for i, j in combinations(range(self.n), 2):
            if self.has_edge(i, j) == self.has_edge(j, i):
                raise ValueError(f"Pair {(i, j)} must have exactly one orientation in a tournament.")

    @classmethod
    def from_rcg(cls, g: Rcg) -> "Tournament":
        return cls(g.n, g.edges)

    @classmethod
    def transitive(cls, n: int) -> "Tournament":
        return cls(n, tuple(combinations(range(n), 2)))

    @classmethod
    def all(cls, n: int) -> Iterator["Tournament"]:
        """Yield all 2^(n(n-1)/2) tournaments on ``n`` vertices."""
        pairs = list(combinations(range(n), 2))
        for flips in product((False, True), repeat=len(pairs)):
            yield cls(n, tuple((j, i) if flip else (i, j) for (i, j), flip in zip(pairs, flips)))

    def out_degree(self, v: int) -> int:
        return len(self.out_neighbors(v))


@dataclass(frozen=True)
class Condensation:
    """Strongly connected components and their DAG.

    Components are numbered by their smallest vertex, so numbering is
    deterministic for a given graph.
    """

    assignment: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]
    dag: Rcg

    @property
    def size(self) -> int:
        return len(self.components)


def scc_condensation(g: Rcg) -> Condensation:
    """Tarjan's algorithm, iterative, followed by canonical renumbering."""
    index: dict[int, int] = {}
    lowlink: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    raw: list[list[int]] = []
    counter = 0

    for root in range(g.n):
        if root in index:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            v, child = work.pop()
            if child == 0:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            succ = g.out_neighbors(v)
            recurse = False
            for pos in range(child, len(succ)):
                w = succ[pos]
                if w not in index:
                    work.append((v, pos + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if recurse:
                continue
            if lowlink[v] == index[v]:
                comp: list[int] = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                raw.append(sorted(comp))
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])

    components = tuple(tuple(c) for c in sorted(raw, key=lambda c: c[0]))
    assignment = [0] * g.n
    for cid, comp in enumerate(components):
        for v in comp:
            assignment[v] = cid
    dag_edges = {(assignment[s], assignment[r]) for s, r in g.edges if assignment[s] != assignment[r]}
    return Condensation(tuple(assignment), components, Rcg(len(components), tuple(dag_edges)))


def _topological_order(dag: Rcg) -> list[int]:
    indegree = [len(dag.in_neighbors(v)) for v in range(dag.n)]
    ready = [v for v in range(dag.n) if indegree[v] == 0]
    heapq.heapify(ready)
    order: list[int] = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for w in dag.out_neighbors(v):
            indegree[w] -= 1
            if indegree[w] == 0:
                heapq.heappush(ready, w)
    return order


def has_traversal_path(g: Rcg) -> bool:
    """True iff a (possibly non-simple) directed walk visits every vertex.

    Equivalent to the condensation DAG having a Hamiltonian path, which holds
    iff its topological order is consecutively connected.
    """
    dag = scc_condensation(g).dag
    order = _topological_order(dag)
    return all(dag.has_edge(a, b) for a, b in zip(order, order[1:]))


def contains_tournament(g: Rcg) -> bool:
    """True iff every unordered pair has at least one delivered direction."""
    return all(g.has_edge(i, j) or g.has_edge(j, i) for i, j in combinations(range(g.n), 2))


def is_strongly_connected(g: Rcg) -> bool:
    return scc_condensation(g).size == 1


def largest_scc_size(g: Rcg) -> int:
    return max(len(c) for c in scc_condensation(g).components)


def tournament_spanning_path(t: Tournament) -> list[int]:
    """Return a directed path through all vertices, built by insertion.

    Each vertex is inserted before the first path vertex it beats, or
    appended when it beats none.
    """
    path: list[int] = []
    for v in range(t.n):
        for pos, w in enumerate(path):
            if t.has_edge(v, w):
                path.insert(pos, v)
                break
        else:
            path.append(v)
    return path


def find_king(t: Tournament) -> int:
    """Return a vertex of maximum out-degree, smallest index on ties.

    Such a vertex reaches every other vertex in at most two hops.
    """
    return max(range(t.n), key=lambda v: (t.out_degree(v), -v))
