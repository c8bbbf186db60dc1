"""Utility helpers for adversim."""

from __future__ import annotations

import dataclasses
import hashlib
import json
from collections.abc import Mapping, Set
from enum import Enum
from typing import Any

import numpy as np

DIGEST_SIZE = 16


def to_primitive(obj: Any) -> Any:
    """Convert nested values into JSON-compatible primitives.

    Sets are emitted as sorted lists and mapping keys as strings so that the
    result has one canonical serialization.
    """
    to_dict = getattr(obj, "to_primitive", None)
    if callable(to_dict):
        return to_dict()
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, Enum):
        return obj.value
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_primitive(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, Mapping):
        return {str(k): to_primitive(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, (Set, frozenset)):
        items = [to_primitive(v) for v in obj]
        return sorted(items, key=stable_json_dumps)
    if isinstance(obj, (list, tuple)):
        return [to_primitive(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_primitive(obj.tolist())
    raise TypeError(f"Cannot convert {type(obj)!r} to a primitive value.")


def stable_json_dumps(obj: Any, pretty: bool = False) -> str:
    """Serialize with sorted keys; identical inputs give identical text."""
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest_bytes(data: bytes) -> str:
    """Return a short hex digest of raw bytes."""
    return hashlib.blake2b(data, digest_size=DIGEST_SIZE).hexdigest()


def digest_of(obj: Any) -> str:
    """Return the digest of the canonical serialization of ``obj``."""
    return digest_bytes(stable_json_dumps(to_primitive(obj)).encode("utf-8"))


def format_pair(pair: tuple[int, int]) -> str:
    """Format an unordered processor pair as ``I-J``."""
    return f"{pair[0]}-{pair[1]}"


def parse_pair(text: str) -> tuple[int, int]:
    """Parse ``I-J`` into a normalized pair ``(min, max)``."""
    parts = text.strip().split("-")
    if len(parts) != 2:
        raise ValueError(f"Pair '{text}' must have the form I-J.")
    try:
        a, b = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ValueError(f"Pair '{text}' must contain integer processor indices.") from exc
    if a == b:
        raise ValueError(f"Pair '{text}' must name two distinct processors.")
    return (min(a, b), max(a, b))
