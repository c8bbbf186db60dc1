"""Message adversaries: predicates over round graphs, samplers and enumerators."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Optional, Union

import numpy as np

from .errors import BudgetExceededError, DimensionMismatchError
from .graph import (
    Rcg,
    contains_tournament,
    has_traversal_path,
    is_strongly_connected,
    largest_scc_size,
)
from .schedule import Pair, PairSchedule
from .utils import format_pair, parse_pair

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_BUDGET = 10**6

SeedLike = Union[int, np.random.Generator, None]


class AdversaryKind(Enum):
    """Supported adversary predicates."""

    TP = "tp"
    TP_COMPLETE = "tp-complete"
    SC = "sc"
    KCC = "kcc"
    TP_PAIRS = "tp-pairs"
    TP_COMPLETE_MINUS = "tp-complete-minus"


@dataclass(frozen=True)
class AdversarySpec:
    """An adversary predicate bound to a processor count.

    Every variant except ``TP_PAIRS`` is memoryless: its legal graphs do not
    depend on the round index. ``TP_PAIRS`` selects the active pair from its
    schedule by round index.
    """

    kind: AdversaryKind
    n: int
    k: Optional[int] = None
    schedule: Optional[PairSchedule] = None
    exempt: Optional[Pair] = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"Processor count must be >= 1, got {self.n}.")
        if self.kind == AdversaryKind.KCC:
            if self.k is None or not (2 <= self.k <= self.n):
                raise ValueError(f"kcc requires 2 <= k <= n, got k={self.k}, n={self.n}.")
        if self.kind == AdversaryKind.TP_PAIRS:
            if self.schedule is None:
                object.__setattr__(self, "schedule", PairSchedule.round_robin(self.n))
            elif self.schedule.n != self.n:
                raise DimensionMismatchError(f"Schedule is for n={self.schedule.n}, spec has n={self.n}.")
        if self.kind == AdversaryKind.TP_COMPLETE_MINUS:
            if self.exempt is None:
                raise ValueError("tp-complete-minus requires an exempt pair.")
            a, b = self.exempt
            if a == b or not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"Exempt pair {self.exempt} is not a pair of processors of n={self.n}.")
            object.__setattr__(self, "exempt", (min(a, b), max(a, b)))

    @classmethod
    def tp(cls, n: int) -> "AdversarySpec":
        return cls(AdversaryKind.TP, n)

    @classmethod
    def tp_complete(cls, n: int) -> "AdversarySpec":
        return cls(AdversaryKind.TP_COMPLETE, n)

    @classmethod
    def sc(cls, n: int) -> "AdversarySpec":
        return cls(AdversaryKind.SC, n)

    @classmethod
    def kcc(cls, n: int, k: int) -> "AdversarySpec":
        return cls(AdversaryKind.KCC, n, k=k)

    @classmethod
    def tp_pairs(cls, n: int, schedule: Optional[PairSchedule] = None) -> "AdversarySpec":
        return cls(AdversaryKind.TP_PAIRS, n, schedule=schedule)

    @classmethod
    def tp_complete_minus(cls, n: int, pair: Pair) -> "AdversarySpec":
        return cls(AdversaryKind.TP_COMPLETE_MINUS, n, exempt=pair)

    @classmethod
    def parse(cls, text: str, n: int) -> "AdversarySpec":
        """Parse CLI syntax: ``tp``, ``tp-complete``, ``sc``, ``kcc:K``,
        ``tp-pairs:RR``, ``tp-pairs:1-2,0-1``, ``tp-complete-minus:0-1``."""
        name, _, arg = text.strip().partition(":")
        try:
            kind = AdversaryKind(name.lower())
        except ValueError as exc:
            raise ValueError(f"Unknown adversary '{name}'.") from exc
        if kind == AdversaryKind.KCC:
            if not arg:
                raise ValueError("kcc requires a size, e.g. kcc:2.")
            return cls.kcc(n, int(arg))
        if kind == AdversaryKind.TP_PAIRS:
            return cls.tp_pairs(n, PairSchedule.parse(arg or PairSchedule.ROUND_ROBIN, n))
        if kind == AdversaryKind.TP_COMPLETE_MINUS:
            return cls.tp_complete_minus(n, parse_pair(arg))
        if arg:
            raise ValueError(f"Adversary '{name}' takes no argument.")
        return cls(kind, n)

    def __str__(self) -> str:
        if self.kind == AdversaryKind.KCC:
            return f"kcc:{self.k}"
        if self.kind == AdversaryKind.TP_PAIRS:
            assert self.schedule is not None
            return f"tp-pairs:{self.schedule.to_string()}"
        if self.kind == AdversaryKind.TP_COMPLETE_MINUS:
            assert self.exempt is not None
            return f"tp-complete-minus:{format_pair(self.exempt)}"
        return self.kind.value

    def pair_at(self, round_index: int) -> Pair:
        if self.schedule is None:
            raise ValueError(f"Adversary {self} has no pair schedule.")
        return self.schedule.pair_at(round_index)

    def round_key(self, round_index: int) -> Optional[Pair]:
        """Key under which legal graphs of a round coincide."""
        return self.pair_at(round_index) if self.kind == AdversaryKind.TP_PAIRS else None


def validate(spec: AdversarySpec, round_index: int, g: Rcg) -> bool:
    """Return whether ``g`` is a legal round graph of ``spec`` in this round."""
    if g.n != spec.n:
        raise DimensionMismatchError(f"Graph has n={g.n}, adversary {spec} has n={spec.n}.")
    if round_index < 0:
        raise ValueError("Round index must be >= 0.")
    kind = spec.kind
    if kind == AdversaryKind.TP:
        return has_traversal_path(g)
    if kind == AdversaryKind.TP_COMPLETE:
        return contains_tournament(g)
    if kind == AdversaryKind.SC:
        return is_strongly_connected(g)
    if kind == AdversaryKind.KCC:
        assert spec.k is not None
        return largest_scc_size(g) >= spec.k
    if kind == AdversaryKind.TP_PAIRS:
        a, b = spec.pair_at(round_index)
        allowed = {(a, b), (b, a)}
        return bool(g.edges) and all(e in allowed for e in g.edges)
    if kind == AdversaryKind.TP_COMPLETE_MINUS:
        return all(
            g.has_edge(i, j) or g.has_edge(j, i)
            for i, j in combinations(range(g.n), 2)
            if (i, j) != spec.exempt
        )
    raise ValueError(f"Unsupported adversary kind {kind!r}.")


def _pair_choice(pair: Pair, choice: int) -> list[tuple[int, int]]:
    i, j = pair
    return [[(i, j)], [(j, i)], [(i, j), (j, i)], []][choice]


def _random_extras(rng: np.random.Generator, n: int, present: set[tuple[int, int]]) -> set[tuple[int, int]]:
    extras = set()
    for s in range(n):
        for r in range(n):
            if s != r and (s, r) not in present and rng.random() < 0.5:
                extras.add((s, r))
    return extras


def sample(spec: AdversarySpec, round_index: int, seed: SeedLike = None) -> Rcg:
    """Draw one legal round graph; deterministic for a given seed or generator."""
    rng = np.random.default_rng(seed)
    n = spec.n
    kind = spec.kind
    edges: set[tuple[int, int]] = set()

    if kind in (AdversaryKind.TP_COMPLETE, AdversaryKind.TP_COMPLETE_MINUS):
        for pair in combinations(range(n), 2):
            options = 4 if pair == spec.exempt else 3
            edges.update(_pair_choice(pair, int(rng.integers(options))))
    elif kind == AdversaryKind.TP:
        order = [int(v) for v in rng.permutation(n)]
        edges.update(zip(order, order[1:]))
        edges |= _random_extras(rng, n, edges)
    elif kind == AdversaryKind.SC:
        if n > 1:
            order = [int(v) for v in rng.permutation(n)]
            edges.update(zip(order, order[1:] + order[:1]))
        edges |= _random_extras(rng, n, edges)
    elif kind == AdversaryKind.KCC:
        assert spec.k is not None
        core = [int(v) for v in rng.choice(n, size=spec.k, replace=False)]
        edges.update(zip(core, core[1:] + core[:1]))
        edges |= _random_extras(rng, n, edges)
    elif kind == AdversaryKind.TP_PAIRS:
        edges.update(_pair_choice(spec.pair_at(round_index), int(rng.integers(3))))
    else:
        raise ValueError(f"Unsupported adversary kind {kind!r}.")
    return Rcg(n, tuple(edges))


def candidate_count(spec: AdversarySpec) -> int:
    """Number of graphs the enumerator has to generate or filter."""
    pairs = spec.n * (spec.n - 1) // 2
    if spec.kind == AdversaryKind.TP_COMPLETE:
        return 3**pairs
    if spec.kind == AdversaryKind.TP_COMPLETE_MINUS:
        return 4 * 3 ** (pairs - 1)
    if spec.kind == AdversaryKind.TP_PAIRS:
        return 3
    return 2 ** (spec.n * (spec.n - 1))


@lru_cache(maxsize=256)
def _legal_graphs(spec: AdversarySpec, round_key: Optional[Pair], budget: int) -> tuple[Rcg, ...]:
    count = candidate_count(spec)
    if count > budget:
        raise BudgetExceededError(f"enumeration of {spec} at n={spec.n}", count, budget)
    n = spec.n
    if spec.kind in (AdversaryKind.TP_COMPLETE, AdversaryKind.TP_COMPLETE_MINUS):
        pairs = list(combinations(range(n), 2))
        choice_sets = [range(4 if p == spec.exempt else 3) for p in pairs]
        graphs = [
            Rcg(n, tuple(e for p, c in zip(pairs, choice) for e in _pair_choice(p, c)))
            for choice in product(*choice_sets)
        ]
    elif spec.kind == AdversaryKind.TP_PAIRS:
        assert round_key is not None
        graphs = [Rcg(n, tuple(_pair_choice(round_key, c))) for c in range(3)]
    else:
        graphs = [g for g in Rcg.all_digraphs(n) if validate(spec, 0, g)]
    graphs.sort(key=lambda g: g.to_json())
    logger.debug("Enumerated %d legal graphs for %s (round key %s)", len(graphs), spec, round_key)
    return tuple(graphs)


def enumerate_rcgs(spec: AdversarySpec, round_index: int, budget: Optional[int] = None) -> Iterator[Rcg]:
    """Yield every legal graph of a round exactly once, ordered by canonical JSON text."""
    cap = DEFAULT_ENUMERATION_BUDGET if budget is None else int(budget)
    yield from legal_graphs(spec, round_index, cap)


def legal_graphs(spec: AdversarySpec, round_index: int, budget: Optional[int] = None) -> tuple[Rcg, ...]:
    """Memoized tuple form of :func:`enumerate_rcgs`."""
    cap = DEFAULT_ENUMERATION_BUDGET if budget is None else int(budget)
    return _legal_graphs(spec, spec.round_key(round_index), cap)


def branching(spec: AdversarySpec, round_index: int, budget: Optional[int] = None) -> int:
    """Exact number of legal graphs in a round."""
    if spec.kind == AdversaryKind.TP_PAIRS:
        return 3
    if spec.kind in (AdversaryKind.TP_COMPLETE, AdversaryKind.TP_COMPLETE_MINUS):
        return candidate_count(spec)
    return len(legal_graphs(spec, round_index, budget))
