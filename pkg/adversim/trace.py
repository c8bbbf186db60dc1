"""Replayable execution traces."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

import pandas as pd

from .adversary import AdversarySpec, validate
from .graph import Rcg
from .utils import stable_json_dumps, to_primitive

SCHEMA_VERSION = 1


@dataclass
class ExecutionTrace:
    """One complete synchronous execution.

    ``states[0]`` holds the initial states and ``states[r]`` the states at the
    end of 1-based round ``r``, so ``len(states) == len(rcgs) + 1``. ``states``
    is only populated for traces produced in-process; loaded traces carry
    digests only. ``seed`` is the sampler seed, or ``"exhaustive:<branch>"``
    for traces produced by tree enumeration.
    """

    n: int
    spec: AdversarySpec
    protocol: str
    inputs: list[Any]
    seed: Union[int, str, None]
    rcgs: list[Rcg] = field(default_factory=list)
    states: list[tuple[Any, ...]] = field(default_factory=list)
    digests: list[tuple[str, ...]] = field(default_factory=list)
    outputs: list[Optional[tuple[Any, int]]] = field(default_factory=list)
    params: dict[str, Any] = field(default_factory=dict)
    violations: list[dict[str, Any]] = field(default_factory=list)

    @property
    def rounds(self) -> int:
        return len(self.rcgs)

    @property
    def final_states(self) -> tuple[Any, ...]:
        if not self.states:
            raise ValueError("Trace carries no in-memory states.")
        return self.states[-1]

    def first_invalid_round(self) -> Optional[int]:
        """Return the first 1-based round whose graph is illegal under the adversary."""
        for idx, g in enumerate(self.rcgs):
            if not validate(self.spec, idx, g):
                return idx + 1
        return None

    def to_dict(self, dump_states: bool = False) -> dict[str, Any]:
        rounds = []
        for idx, g in enumerate(self.rcgs):
            entry: dict[str, Any] = {"rcg": g.to_dict(), "digests": list(self.digests[idx + 1])}
            if dump_states and self.states:
                entry["states"] = to_primitive(list(self.states[idx + 1]))
            rounds.append(entry)
        data: dict[str, Any] = {
            "schema_version": SCHEMA_VERSION,
            "n": self.n,
            "spec": str(self.spec),
            "protocol": self.protocol,
            "params": to_primitive(self.params),
            "inputs": to_primitive(self.inputs),
            "seed": self.seed,
            "initial_digests": list(self.digests[0]) if self.digests else [],
            "rounds": rounds,
            "outputs": [
                None if out is None else {"pid": pid, "value": to_primitive(out[0]), "round": out[1]}
                for pid, out in enumerate(self.outputs)
            ],
        }
        if self.violations:
            data["violations"] = to_primitive(self.violations)
        return data

    def to_json(self, dump_states: bool = False) -> str:
        return stable_json_dumps(self.to_dict(dump_states=dump_states), pretty=True) + "\n"

    def save(self, path: Union[str, Path], dump_states: bool = False) -> Path:
        target = Path(path)
        target.write_text(self.to_json(dump_states=dump_states), encoding="utf-8")
        return target

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExecutionTrace":
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValueError(f"Unsupported trace schema_version {version!r}.")
        n = int(data["n"])
        rounds = data.get("rounds", [])
        digests = [tuple(data.get("initial_digests", []))] + [tuple(r.get("digests", [])) for r in rounds]
        outputs: list[Optional[tuple[Any, int]]] = [
            None if out is None else (out["value"], int(out["round"])) for out in data.get("outputs", [])
        ]
        return cls(
            n=n,
            spec=AdversarySpec.parse(data["spec"], n),
            protocol=str(data.get("protocol", "")),
            inputs=list(data.get("inputs", [])),
            seed=data.get("seed"),
            rcgs=[Rcg.from_dict(r["rcg"]) for r in rounds],
            digests=digests,
            outputs=outputs,
            params=dict(data.get("params", {})),
            violations=list(data.get("violations", [])),
        )

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExecutionTrace":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_frame(self) -> pd.DataFrame:
        """One row per round: edge count, delivered edges and state digests."""
        rows = []
        for idx, g in enumerate(self.rcgs):
            row: dict[str, Any] = {"round": idx + 1, "edges": len(g.edges), "rcg": g.to_json()}
            for pid, digest in enumerate(self.digests[idx + 1]):
                row[f"p{pid}"] = digest
            rows.append(row)
        return pd.DataFrame(rows)
