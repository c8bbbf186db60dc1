"""Rendezvous schedules for the pairwise adversary."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator, Optional

from .utils import format_pair, parse_pair

Pair = tuple[int, int]


class PairSchedule:
    """Ordered list of unordered processor pairs, cycled over rounds.

    Round ``r`` (0-based) is assigned ``pairs[r % len(pairs)]``. One cycle
    must name every one of the n(n-1)/2 pairs at least once.
    """

    ROUND_ROBIN = "RR"

    def __init__(self, n: int, pairs: Optional[Iterable[Pair]] = None) -> None:
        if n < 2:
            raise ValueError(f"A pair schedule needs at least 2 processors, got {n}.")
        self.n: int = int(n)
        if pairs is None:
            normalized = list(combinations(range(self.n), 2))
        else:
            normalized = [self._normalize(p) for p in pairs]
        self._validate(normalized)
        self._pairs: tuple[Pair, ...] = tuple(normalized)

    def _normalize(self, pair: Pair) -> Pair:
        a, b = (int(x) for x in pair)
        if a == b:
            raise ValueError(f"Pair {pair} must name two distinct processors.")
        if not (0 <= a < self.n and 0 <= b < self.n):
            raise ValueError(f"Pair {pair} has an index outside [0, {self.n}).")
        return (min(a, b), max(a, b))

    def _validate(self, pairs: list[Pair]) -> None:
        if not pairs:
            raise ValueError("Pair schedule must not be empty.")
        missing = [p for p in combinations(range(self.n), 2) if p not in set(pairs)]
        if missing:
            raise ValueError(f"Pair schedule is not fair; missing pairs: {[format_pair(p) for p in missing]}")

    @classmethod
    def round_robin(cls, n: int) -> "PairSchedule":
        return cls(n)

    @classmethod
    def parse(cls, text: str, n: int) -> "PairSchedule":
        """Parse ``RR`` or a comma-separated pair list like ``1-2,0-1,0-2``."""
        body = text.strip()
        if body.upper() == cls.ROUND_ROBIN:
            return cls(n)
        return cls(n, [parse_pair(part) for part in body.split(",") if part.strip()])

    @property
    def pairs(self) -> tuple[Pair, ...]:
        return self._pairs

    @property
    def cycle_length(self) -> int:
        return len(self._pairs)

    def pair_at(self, round_index: int) -> Pair:
        """Return the pair scheduled in 0-based round ``round_index``."""
        if round_index < 0:
            raise IndexError("Round index must be >= 0.")
        return self._pairs[round_index % len(self._pairs)]

    def take(self, rounds: int) -> list[Pair]:
        """Return the pairs of the first ``rounds`` rounds."""
        return [self.pair_at(r) for r in range(rounds)]

    def is_round_robin(self) -> bool:
        return self._pairs == tuple(combinations(range(self.n), 2))

    def to_string(self) -> str:
        if self.is_round_robin():
            return self.ROUND_ROBIN
        return ",".join(format_pair(p) for p in self._pairs)

    def __len__(self) -> int:
        return len(self._pairs)

    def __iter__(self) -> Iterator[Pair]:
        return iter(self._pairs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PairSchedule):
            return self.n == other.n and self._pairs == other._pairs
        return False

    def __hash__(self) -> int:
        return hash((self.n, self._pairs))

    def __repr__(self) -> str:
        return f"PairSchedule(n={self.n}, pairs={self.to_string()!r})"
