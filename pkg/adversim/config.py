"""Command-line configuration."""

from __future__ import annotations

import argparse
import builtins
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Optional

from .adversary import AdversarySpec
from .engine import DEFAULT_BRANCH_CAP
from .errors import UsageError

BUDGET_ENV = "ADVERSIM_BUDGET"

PROPERTIES = ("snapshot-valid", "tournament-emulation", "king-liveness", "pairs-translation")
ORACLES = ("tournament-facts", "reachability", "king-liveness", "boundary-witness")
DEFAULT_FALLBACK_SAMPLES = 1000


@dataclass
class Config:
    """Validated settings for one CLI invocation."""

    command: str
    n: int = 3
    spec: str = "tp-complete"
    rounds: Optional[int] = None
    seed: int = 0
    protocol: Optional[str] = None
    params: dict[str, Any] = field(default_factory=dict)
    out: Optional[str] = None
    dump_states: bool = False
    property: Optional[str] = None
    jobs: int = 1
    branch_cap: int = DEFAULT_BRANCH_CAP
    enumeration_budget: Optional[int] = None
    fallback_samples: int = DEFAULT_FALLBACK_SAMPLES
    schedule: Optional[str] = None
    k: Optional[int] = None
    outputs: dict[str, str] = field(default_factory=dict)
    cross_validate: bool = False
    files: list[str] = field(default_factory=list)
    oracle: Optional[str] = None
    max_depth: int = 8
    pair: Optional[str] = None
    round_index: int = 0
    verbosity: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise UsageError(f"--n must be >= 1, got {self.n}.")
        if self.rounds is not None and self.rounds < 0:
            raise UsageError(f"--rounds must be >= 0, got {self.rounds}.")
        if self.jobs < 1:
            raise UsageError(f"--jobs must be >= 1, got {self.jobs}.")
        if self.branch_cap <= 0:
            raise UsageError(f"Branch cap must be positive, got {self.branch_cap}.")
        if self.enumeration_budget is not None and self.enumeration_budget <= 0:
            raise UsageError(f"--enumeration-budget must be positive, got {self.enumeration_budget}.")
        if self.fallback_samples < 0:
            raise UsageError(f"--fallback-samples must be >= 0, got {self.fallback_samples}.")
        if self.round_index < 0:
            raise UsageError(f"--round must be >= 0, got {self.round_index}.")
        if not 0 <= self.max_depth:
            raise UsageError(f"--max-depth must be >= 0, got {self.max_depth}.")
        if self.k is not None and self.k < 0:
            raise UsageError(f"--k must be >= 0, got {self.k}.")
        if self.property is not None and self.property not in PROPERTIES:
            raise UsageError(f"Unknown property '{self.property}'. Choose from {list(PROPERTIES)}.")
        if self.oracle is not None and self.oracle not in ORACLES:
            raise UsageError(f"Unknown oracle '{self.oracle}'. Choose from {list(ORACLES)}.")
        try:
            self.adversary()
        except ValueError as exc:
            raise UsageError(f"Invalid adversary '{self.spec}': {exc}") from exc

    def adversary(self) -> AdversarySpec:
        return AdversarySpec.parse(self.spec, self.n)

    @builtins.property
    def log_level(self) -> int:
        if self.verbosity < 0:
            return logging.WARNING
        return {0: logging.WARNING, 1: logging.INFO}.get(self.verbosity, logging.DEBUG)

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "Config":
        """Build from parsed arguments; ``ADVERSIM_BUDGET`` overrides the branch cap."""
        values = {
            name: getattr(args, name)
            for name in cls.__dataclass_fields__
            if getattr(args, name, None) is not None
        }
        values["params"] = parse_params(getattr(args, "params", None) or [])
        values["outputs"] = {fmt: getattr(args, fmt) for fmt in ("json", "dot", "svg") if getattr(args, fmt, None)}
        values["verbosity"] = -1 if getattr(args, "quiet", False) else int(getattr(args, "verbose", 0) or 0)
        env = os.environ.get(BUDGET_ENV)
        if env:
            try:
                values["branch_cap"] = int(env)
            except ValueError as exc:
                raise UsageError(f"{BUDGET_ENV} must be an integer, got '{env}'.") from exc
        return cls(**values)


def parse_params(items: list[str]) -> dict[str, Any]:
    """Parse ``key=value`` pairs; integer values are converted."""
    params: dict[str, Any] = {}
    for item in items:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise UsageError(f"Protocol parameter '{item}' is not of the form key=value.")
        try:
            params[key] = int(raw)
        except ValueError:
            params[key] = raw
    return params
