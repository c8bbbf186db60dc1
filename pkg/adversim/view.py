"""Full-information views with structural sharing and memoized digests."""

from __future__ import annotations

import weakref
from collections.abc import Mapping
from typing import Any, ClassVar

from .utils import digest_bytes, stable_json_dumps, to_primitive

RoundEntry = tuple[tuple[int, "View"], ...]


class View:
    """A processor's history: its item plus, per elapsed round, the views it received.

    Views are interned by digest, so equal histories are the same object and
    nested views are shared rather than copied. A view received in round ``r``
    (1-based) has exactly ``r - 1`` round entries.
    """

    __slots__ = ("owner", "item", "rounds", "digest", "__weakref__")

    _interned: ClassVar["weakref.WeakValueDictionary[str, View]"] = weakref.WeakValueDictionary()

    owner: int
    item: Any
    rounds: tuple[RoundEntry, ...]
    digest: str

    def __new__(cls, owner: int, item: Any, rounds: tuple[Any, ...] = ()) -> "View":
        normalized = tuple(cls._normalize_round(owner, idx, entry) for idx, entry in enumerate(rounds))
        digest = cls._compute_digest(int(owner), item, normalized)
        existing = cls._interned.get(digest)
        if existing is not None:
            return existing
        obj = super().__new__(cls)
        object.__setattr__(obj, "owner", int(owner))
        object.__setattr__(obj, "item", item)
        object.__setattr__(obj, "rounds", normalized)
        object.__setattr__(obj, "digest", digest)
        cls._interned[digest] = obj
        return obj

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("View is immutable.")

    def __reduce__(self) -> tuple[Any, ...]:
        return (View, (self.owner, self.item, self.rounds))

    @staticmethod
    def _normalize_round(owner: int, idx: int, entry: Any) -> RoundEntry:
        items = entry.items() if isinstance(entry, Mapping) else entry
        out = []
        for sender, view in sorted(items, key=lambda kv: kv[0]):
            if sender == owner:
                raise ValueError("A view never records a message from its own owner.")
            if not isinstance(view, View):
                raise TypeError(f"Received payload from {sender} is not a View.")
            if view.owner != sender:
                raise ValueError(f"View from sender {sender} is owned by {view.owner}.")
            if len(view.rounds) != idx:
                raise ValueError(
                    f"View received in round {idx + 1} must have {idx} round entries, has {len(view.rounds)}."
                )
            out.append((int(sender), view))
        return tuple(out)

    @staticmethod
    def _compute_digest(owner: int, item: Any, rounds: tuple[RoundEntry, ...]) -> str:
        parts = [f"{owner}\x1f{stable_json_dumps(to_primitive(item))}"]
        for entry in rounds:
            parts.append(",".join(f"{s}:{v.digest}" for s, v in entry))
        return digest_bytes("\x1e".join(parts).encode("utf-8"))

    def extend(self, received: Mapping[int, "View"]) -> "View":
        """Return the view after one more round in which ``received`` arrived."""
        return View(self.owner, self.item, self.rounds + (tuple(received.items()),))

    def heard_from(self, round_number: int) -> frozenset[int]:
        """Senders heard in 1-based round ``round_number``."""
        return frozenset(s for s, _ in self.rounds[round_number - 1])

    @property
    def depth(self) -> int:
        return len(self.rounds)

    def to_primitive(self) -> dict[str, Any]:
        return {
            "owner": self.owner,
            "item": to_primitive(self.item),
            "rounds": [{str(s): v.digest for s, v in entry} for entry in self.rounds],
            "digest": self.digest,
        }

    def __eq__(self, other: object) -> bool:
        return isinstance(other, View) and other.digest == self.digest

    def __hash__(self) -> int:
        return hash(self.digest)

    def __repr__(self) -> str:
        return f"View(owner={self.owner}, depth={self.depth}, digest={self.digest[:8]})"
