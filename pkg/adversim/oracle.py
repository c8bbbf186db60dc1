"""Brute-force ground truth for the graph facts and the register search questions.

The graph oracles use transitive closure and permutation search only; they
never call the decision procedures they are compared against.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Any, Optional

import numpy as np
import pandas as pd

from .adversary import AdversarySpec
from .engine import Engine
from .errors import BudgetExceededError
from .graph import Rcg, Tournament, find_king, has_traversal_path, tournament_spanning_path
from .protocols.register import RegisterProtocol, RegisterState, any_done, unsound_kings
from .schedule import Pair

logger = logging.getLogger(__name__)

MAX_REACHABILITY_N = 8
MAX_TOURNAMENT_N = 5
MAX_SWEEP_N = 4
MAX_SEARCH_N = 3
MAX_SEARCH_DEPTH = 8


def _closure(adj: np.ndarray) -> np.ndarray:
    reach = adj | np.eye(adj.shape[0], dtype=bool)
    for k in range(adj.shape[0]):
        reach = reach | (reach[:, [k]] & reach[[k], :])
    return reach


def reachability_pair_oracle(g: Rcg) -> bool:
    """Ground truth for the existence of a walk through every vertex."""
    if g.n > MAX_REACHABILITY_N:
        raise BudgetExceededError("reachability oracle processor count", g.n, MAX_REACHABILITY_N)
    adj = g.adjacency()
    reach = _closure(adj)
    if not all(reach[i, j] or reach[j, i] for i, j in combinations(range(g.n), 2)):
        return False

    classes: list[frozenset[int]] = []
    for v in range(g.n):
        members = frozenset(u for u in range(g.n) if reach[v, u] and reach[u, v])
        if members not in classes:
            classes.append(members)

    def linked(a: frozenset[int], b: frozenset[int]) -> bool:
        return any(adj[u, w] for u in a for w in b)

    return any(
        all(linked(order[t], order[t + 1]) for t in range(len(order) - 1))
        for order in permutations(classes)
    )


def reachability_sweep(n: int) -> dict[str, Any]:
    """Compare the oracle with the condensation test on every digraph over ``n`` processors."""
    if n > MAX_SWEEP_N:
        raise BudgetExceededError("reachability sweep processor count", n, MAX_SWEEP_N)
    graphs = 0
    holding = 0
    disagreements = []
    for g in Rcg.all_digraphs(n):
        graphs += 1
        expected = reachability_pair_oracle(g)
        holding += expected
        if expected != has_traversal_path(g):
            disagreements.append({"edges": g.to_dict()["edges"], "oracle": expected})
    logger.info("Reachability sweep n=%d: %d graphs, %d disagreements", n, graphs, len(disagreements))
    return {
        "oracle": "reachability",
        "n": n,
        "graphs": graphs,
        "with_path": holding,
        "passed": not disagreements,
        "disagreements": disagreements,
    }


def _all_tournaments(n: int) -> list[Rcg]:
    pairs = list(combinations(range(n), 2))
    return [
        Rcg(n, tuple((i, j) if forward else (j, i) for (i, j), forward in zip(pairs, choice)))
        for choice in product((True, False), repeat=len(pairs))
    ]


def _has_spanning_path(t: Rcg) -> bool:
    return any(all(t.has_edge(a, b) for a, b in zip(order, order[1:])) for order in permutations(range(t.n)))


def _two_hop_kings(t: Rcg) -> set[int]:
    adj = t.adjacency()
    within_two = adj | (adj.astype(int) @ adj.astype(int) > 0) | np.eye(t.n, dtype=bool)
    return {v for v in range(t.n) if within_two[v].all()}


@dataclass
class TournamentFactsReport:
    n: int
    tournaments: int = 0
    spanning_paths: int = 0
    kings: int = 0
    failures: list[dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.spanning_paths == self.kings == self.tournaments

    def to_dict(self) -> dict[str, Any]:
        return {
            "oracle": "tournament-facts",
            "n": self.n,
            "tournaments": self.tournaments,
            "spanning_paths": self.spanning_paths,
            "kings": self.kings,
            "passed": self.passed,
            "failures": self.failures,
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([{k: v for k, v in self.to_dict().items() if k != "failures"}])


def tournament_facts_oracle(n: int) -> TournamentFactsReport:
    """Check both tournament facts, and the graph module's answers, on every tournament."""
    if n > MAX_TOURNAMENT_N:
        raise BudgetExceededError("tournament oracle processor count", n, MAX_TOURNAMENT_N)
    report = TournamentFactsReport(n)
    for g in _all_tournaments(n):
        report.tournaments += 1
        kings = _two_hop_kings(g)
        if _has_spanning_path(g):
            report.spanning_paths += 1
        if kings:
            report.kings += 1
        t = Tournament.from_rcg(g)
        path = tournament_spanning_path(t)
        if sorted(path) != list(range(n)) or not all(g.has_edge(a, b) for a, b in zip(path, path[1:])):
            report.failures.append({"edges": g.to_dict()["edges"], "path": path})
        king = find_king(t)
        if king not in kings:
            report.failures.append({"edges": g.to_dict()["edges"], "king": king})
    logger.info("Tournament facts n=%d: %d tournaments, %d failures", n, report.tournaments, len(report.failures))
    return report


@dataclass
class SearchReport:
    """Answer of a breadth-first frontier search, with per-depth counts."""

    oracle: str
    n: int
    max_depth: int
    depth: Optional[int]
    frontier_sizes: list[int] = field(default_factory=list)
    branches: list[int] = field(default_factory=list)
    witness: list[Rcg] = field(default_factory=list)
    detail: dict[str, Any] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.depth is not None if self.oracle == "king-liveness" else bool(self.witness)

    def to_dict(self) -> dict[str, Any]:
        return {
            "oracle": self.oracle,
            "n": self.n,
            "max_depth": self.max_depth,
            "depth": self.depth,
            "found": self.found,
            "frontier_sizes": list(self.frontier_sizes),
            "branches": list(self.branches),
            "witness": [g.to_dict() for g in self.witness],
            **self.detail,
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "depth": list(range(1, len(self.frontier_sizes) + 1)),
                "branches": self.branches,
                "frontier": self.frontier_sizes,
            }
        )


def _guard(n: int, max_depth: int) -> None:
    if n > MAX_SEARCH_N:
        raise BudgetExceededError("search processor count", n, MAX_SEARCH_N)
    if max_depth > MAX_SEARCH_DEPTH:
        raise BudgetExceededError("search depth", max_depth, MAX_SEARCH_DEPTH)
    if max_depth < 0:
        raise ValueError("Search depth must be >= 0.")


def king_liveness_search(n: int, max_depth: int = MAX_SEARCH_DEPTH, engine: Optional[Engine] = None) -> SearchReport:
    """Smallest depth by which every TP-complete execution completes some first write."""
    _guard(n, max_depth)
    engine = engine or Engine()
    protocol = RegisterProtocol(n=n, writes=1)
    result = engine.explore(protocol, AdversarySpec.tp_complete(n), list(range(n)), max_depth, any_done)
    report = SearchReport(
        "king-liveness", n, max_depth, result.closed_at, result.frontier_sizes, result.branches, result.witness
    )
    logger.info("King liveness n=%d: depth %s", n, result.closed_at)
    return report


def find_boundary_witness(
    n: int = 3,
    pair: Pair = (0, 1),
    max_depth: int = MAX_SEARCH_DEPTH,
    engine: Optional[Engine] = None,
) -> SearchReport:
    """Branch of the weakened adversary along which the endpoints of ``pair`` never learn each other's write.

    The witness is replayed and every king round on it that left a running
    processor without the king's write is listed under ``unsound_kings``.
    """
    _guard(n, max_depth)
    if n < 3:
        raise ValueError("The boundary witness needs a third processor to relay through.")
    a, b = min(pair), max(pair)
    spec = AdversarySpec.tp_complete_minus(n, (a, b))
    engine = engine or Engine()
    protocol = RegisterProtocol(n=n, writes=1)
    inputs = list(range(n))

    def exchanged(states: tuple[RegisterState, ...]) -> bool:
        return states[b].kv.seq_of(a) > 0 or states[a].kv.seq_of(b) > 0

    result = engine.explore(protocol, spec, inputs, max_depth, exchanged)
    report = SearchReport(
        "boundary-witness",
        n,
        max_depth,
        result.closed_at,
        result.frontier_sizes,
        result.branches,
        result.witness,
        {"spec": str(spec), "pair": [a, b]},
    )
    if result.witness:
        trace = engine.replay(protocol, spec, inputs, result.witness)
        report.detail["unsound_kings"] = unsound_kings(trace)
    logger.info("Boundary witness for %s: %s", spec, "found" if report.found else "not found")
    return report
