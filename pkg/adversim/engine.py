"""Synchronous round executor and exhaustive decision-tree explorer."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Optional, Sequence, Union

import numpy as np
import pandas as pd

from .adversary import AdversarySpec, legal_graphs, sample, validate
from .errors import BudgetExceededError, DimensionMismatchError
from .graph import Rcg
from .protocol import Protocol
from .trace import ExecutionTrace

logger = logging.getLogger(__name__)

DEFAULT_BRANCH_CAP = 10**8

States = tuple[Any, ...]
Branch = tuple[int, ...]
TraceProperty = Callable[[ExecutionTrace], bool]


@dataclass
class Verdict:
    """Result of checking a property on every execution of a decision tree."""

    holds: bool
    executions: int
    counterexample: Optional[ExecutionTrace] = None
    branch: Optional[Branch] = None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"holds": self.holds, "executions": self.executions}
        if self.counterexample is not None:
            data["branch"] = list(self.branch or ())
            data["counterexample"] = self.counterexample.to_dict()
        return data


@dataclass
class Exploration:
    """Breadth-first frontier search over deduplicated global states.

    ``closed_at`` is the first depth at which every branch has hit the stop
    predicate, or ``None`` if survivors remain at ``max_depth``; in that case
    ``witness`` is the round-graph sequence leading to one survivor.
    """

    max_depth: int
    closed_at: Optional[int]
    frontier_sizes: list[int] = field(default_factory=list)
    branches: list[int] = field(default_factory=list)
    witness: list[Rcg] = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "depth": list(range(1, len(self.frontier_sizes) + 1)),
                "branches": self.branches,
                "frontier": self.frontier_sizes,
            }
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "max_depth": self.max_depth,
            "closed_at": self.closed_at,
            "frontier_sizes": list(self.frontier_sizes),
            "branches": list(self.branches),
            "witness": [g.to_dict() for g in self.witness],
        }


class Engine:
    """Coordinate a protocol, an adversary and the round loop."""

    def __init__(
        self,
        branch_cap: Optional[int] = None,
        enumeration_budget: Optional[int] = None,
        jobs: int = 1,
    ) -> None:
        self.branch_cap: int = DEFAULT_BRANCH_CAP if branch_cap is None else int(branch_cap)
        self.enumeration_budget: Optional[int] = enumeration_budget
        self.jobs: int = max(1, int(jobs))
        self._analyzer_specs: list[tuple[type[Any], dict[str, Any]]] = []
        if self.branch_cap <= 0:
            raise ValueError("Branch cap must be positive.")

    def addanalyzer(self, analyzer_cls: type[Any], **kwargs: Any) -> None:
        """Register analyzer class and kwargs."""
        self._analyzer_specs.append((analyzer_cls, kwargs))

    def analyze(self, trace: ExecutionTrace) -> dict[str, Any]:
        """Run every registered analyzer on ``trace``, keyed by its check name."""
        analyzers: dict[str, Any] = {}
        for analyzer_cls, kwargs in self._analyzer_specs:
            analyzer = analyzer_cls(trace, **kwargs)
            analyzer.run()
            analyzers[analyzer.check] = analyzer
        return analyzers

    @staticmethod
    def step(protocol: Protocol, states: States, rcg: Rcg) -> States:
        """Advance all processors by one round of ``rcg``.

        Every payload is taken from the pre-round states, so no processor sees
        another's update from the same round.
        """
        payloads = [protocol.message(s) for s in states]
        return tuple(
            protocol.receive(states[j], {i: payloads[i] for i in rcg.in_neighbors(j)})
            for j in range(len(states))
        )

    @staticmethod
    def _check_inputs(spec: AdversarySpec, inputs: Sequence[Any]) -> None:
        if len(inputs) != spec.n:
            raise DimensionMismatchError(f"Got {len(inputs)} inputs for adversary {spec} with n={spec.n}.")

    def _start(self, protocol: Protocol, spec: AdversarySpec, inputs: Sequence[Any], seed: Union[int, str, None]) -> ExecutionTrace:
        self._check_inputs(spec, inputs)
        initial = tuple(protocol.init(pid, item) for pid, item in enumerate(inputs))
        trace = ExecutionTrace(
            n=spec.n,
            spec=spec,
            protocol=protocol.name,
            inputs=list(inputs),
            seed=seed,
            params=protocol.describe()["params"],
        )
        trace.states.append(initial)
        trace.digests.append(tuple(protocol.state_digest(s) for s in initial))
        trace.outputs = [None] * spec.n
        self._record_outputs(protocol, trace, initial, 0)
        return trace

    @staticmethod
    def _record_outputs(protocol: Protocol, trace: ExecutionTrace, states: States, round_number: int) -> None:
        for pid, state in enumerate(states):
            if trace.outputs[pid] is None:
                value = protocol.output(state)
                if value is not None:
                    trace.outputs[pid] = (value, round_number)

    def _advance(self, protocol: Protocol, trace: ExecutionTrace, rcg: Rcg) -> States:
        states = self.step(protocol, trace.states[-1], rcg)
        trace.rcgs.append(rcg)
        trace.states.append(states)
        trace.digests.append(tuple(protocol.state_digest(s) for s in states))
        self._record_outputs(protocol, trace, states, len(trace.rcgs))
        return states

    def run(
        self,
        protocol: Protocol,
        spec: AdversarySpec,
        rounds: int,
        inputs: Sequence[Any],
        seed: Optional[int] = 0,
        until: Optional[Callable[[States], bool]] = None,
    ) -> ExecutionTrace:
        """Run ``rounds`` sampled rounds; identical arguments give identical traces."""
        if rounds < 0:
            raise ValueError("Rounds must be >= 0.")
        trace = self._start(protocol, spec, inputs, seed)
        rng = np.random.default_rng(seed)
        for round_index in range(rounds):
            states = self._advance(protocol, trace, sample(spec, round_index, rng))
            if until is not None and until(states):
                break
        return trace

    def replay(
        self,
        protocol: Protocol,
        spec: AdversarySpec,
        inputs: Sequence[Any],
        rcgs: Sequence[Rcg],
        seed: Union[int, str, None] = "replay",
    ) -> ExecutionTrace:
        """Run a fixed sequence of round graphs, each checked against ``spec``."""
        trace = self._start(protocol, spec, inputs, seed)
        for round_index, g in enumerate(rcgs):
            if not validate(spec, round_index, g):
                raise ValueError(f"Round {round_index + 1} graph {g.to_json()} is not legal under {spec}.")
            self._advance(protocol, trace, g)
        return trace

    def _choices(self, spec: AdversarySpec, rounds: int) -> list[tuple[Rcg, ...]]:
        return [legal_graphs(spec, r, self.enumeration_budget) for r in range(rounds)]

    def count_branches(self, spec: AdversarySpec, rounds: int) -> int:
        """Number of complete executions: the product of per-round choices."""
        return math.prod(len(c) for c in self._choices(spec, rounds))

    def _guard(self, spec: AdversarySpec, rounds: int) -> list[tuple[Rcg, ...]]:
        choices = self._choices(spec, rounds)
        total = math.prod(len(c) for c in choices)
        if total > self.branch_cap:
            raise BudgetExceededError(f"exhaustive tree of {spec} over {rounds} rounds", total, self.branch_cap)
        return choices

    def iter_executions(
        self,
        protocol: Protocol,
        spec: AdversarySpec,
        rounds: int,
        inputs: Sequence[Any],
        first: Optional[int] = None,
    ) -> Iterator[tuple[Branch, ExecutionTrace]]:
        """Yield ``(branch, trace)`` for every execution in canonical order.

        ``first`` restricts the walk to one first-round choice.
        """
        choices = self._guard(spec, rounds)
        root = self._start(protocol, spec, inputs, "exhaustive:")

        def walk(trace: ExecutionTrace, branch: Branch) -> Iterator[tuple[Branch, ExecutionTrace]]:
            level = len(branch)
            if level == rounds:
                trace.seed = "exhaustive:" + ".".join(str(i) for i in branch)
                yield branch, trace
                return
            for idx, g in enumerate(choices[level]):
                if level == 0 and first is not None and idx != first:
                    continue
                child = self._fork(trace)
                self._advance(protocol, child, g)
                yield from walk(child, branch + (idx,))

        yield from walk(root, ())

    @staticmethod
    def _fork(trace: ExecutionTrace) -> ExecutionTrace:
        return ExecutionTrace(
            n=trace.n,
            spec=trace.spec,
            protocol=trace.protocol,
            inputs=trace.inputs,
            seed=trace.seed,
            rcgs=list(trace.rcgs),
            states=list(trace.states),
            digests=list(trace.digests),
            outputs=list(trace.outputs),
            params=trace.params,
        )

    def _search(
        self,
        protocol: Protocol,
        spec: AdversarySpec,
        rounds: int,
        inputs: Sequence[Any],
        prop: TraceProperty,
        first: Optional[int] = None,
    ) -> Verdict:
        executions = 0
        for branch, trace in self.iter_executions(protocol, spec, rounds, inputs, first=first):
            executions += 1
            if not prop(trace):
                return Verdict(False, executions, trace, branch)
        return Verdict(True, executions)

    def run_exhaustive(
        self,
        protocol: Protocol,
        spec: AdversarySpec,
        rounds: int,
        inputs: Sequence[Any],
        prop: TraceProperty,
    ) -> Verdict:
        """Evaluate ``prop`` on every execution; report the canonically first failure.

        With ``jobs > 1`` the first-round choices are split over worker
        processes; ``protocol`` and ``prop`` must then be picklable. The
        merged verdict equals the serial one, except that ``executions``
        counts every branch visited by any worker.
        """
        choices = self._guard(spec, rounds)
        total = math.prod(len(c) for c in choices)
        logger.info("Exhaustive check of %s over %d rounds: %d executions", spec, rounds, total)
        if self.jobs == 1 or rounds == 0 or len(choices[0]) == 1:
            verdict = self._search(protocol, spec, rounds, inputs, prop)
        else:
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                futures = [
                    pool.submit(_search_subtree, self, protocol, spec, rounds, list(inputs), prop, idx)
                    for idx in range(len(choices[0]))
                ]
                partial = [f.result() for f in futures]
            executions = sum(v.executions for v in partial)
            failures = [v for v in partial if not v.holds]
            if failures:
                first_failure = min(failures, key=lambda v: v.branch or ())
                verdict = Verdict(False, executions, first_failure.counterexample, first_failure.branch)
            else:
                verdict = Verdict(True, executions)
        if verdict.holds:
            logger.info("Property holds on all %d executions", verdict.executions)
        else:
            logger.info("Counterexample at branch %s", verdict.branch)
        return verdict

    def explore(
        self,
        protocol: Protocol,
        spec: AdversarySpec,
        inputs: Sequence[Any],
        max_depth: int,
        stop: Callable[[States], bool],
    ) -> Exploration:
        """Layered search for executions that avoid ``stop`` for ``max_depth`` rounds.

        States reached by several branches are kept once per depth.
        """
        self._check_inputs(spec, inputs)
        initial: States = tuple(protocol.init(pid, item) for pid, item in enumerate(inputs))
        result = Exploration(max_depth=max_depth, closed_at=None)
        if stop(initial):
            result.closed_at = 0
            return result

        frontier: dict[States, Any] = {initial: None}
        layers: list[dict[States, tuple[States, Rcg]]] = []
        examined_total = 0
        for depth in range(1, max_depth + 1):
            layer: dict[States, tuple[States, Rcg]] = {}
            graphs = legal_graphs(spec, depth - 1, self.enumeration_budget)
            examined_total += len(frontier) * len(graphs)
            if examined_total > self.branch_cap:
                raise BudgetExceededError(f"frontier search of {spec} at depth {depth}", examined_total, self.branch_cap)
            for states in frontier:
                for g in graphs:
                    nxt = self.step(protocol, states, g)
                    if stop(nxt) or nxt in layer:
                        continue
                    layer[nxt] = (states, g)
            layers.append(layer)
            result.branches.append(len(frontier) * len(graphs))
            result.frontier_sizes.append(len(layer))
            logger.debug("Depth %d: %d surviving states", depth, len(layer))
            if not layer:
                result.closed_at = depth
                return result
            frontier = dict.fromkeys(layer)

        state = next(iter(frontier))
        path: list[Rcg] = []
        for layer in reversed(layers):
            previous, g = layer[state]
            path.append(g)
            state = previous
        result.witness = list(reversed(path))
        return result


def _search_subtree(
    engine: Engine,
    protocol: Protocol,
    spec: AdversarySpec,
    rounds: int,
    inputs: list[Any],
    prop: TraceProperty,
    first: int,
) -> Verdict:
    return engine._search(protocol, spec, rounds, inputs, prop, first=first)


def run(
    protocol: Protocol,
    spec: AdversarySpec,
    rounds: int,
    inputs: Sequence[Any],
    seed: Optional[int] = 0,
) -> ExecutionTrace:
    """Convenience wrapper around :meth:`Engine.run`."""
    return Engine().run(protocol, spec, rounds, inputs, seed=seed)


def run_exhaustive(
    protocol: Protocol,
    spec: AdversarySpec,
    rounds: int,
    inputs: Sequence[Any],
    prop: TraceProperty,
) -> Verdict:
    """Convenience wrapper around :meth:`Engine.run_exhaustive`."""
    return Engine().run_exhaustive(protocol, spec, rounds, inputs, prop)
