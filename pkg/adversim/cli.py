"""Command-line front end."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from . import complex as cx
from .adversary import AdversaryKind, enumerate_rcgs
from .analyzer import AnalyzerProperty, TraceAnalyzer
from .analyzers import (
    GossipProgressAnalyzer,
    KingLivenessAnalyzer,
    KingSoundnessAnalyzer,
    PairsTranslationAnalyzer,
    RcgLegalityAnalyzer,
    SnapshotAnalyzer,
    TournamentEmulationAnalyzer,
)
from .config import DEFAULT_FALLBACK_SAMPLES, ORACLES, PROPERTIES, Config
from .engine import DEFAULT_BRANCH_CAP, Engine
from .errors import BudgetExceededError, UnsupportedDimensionError, UsageError
from .oracle import find_boundary_witness, king_liveness_search, reachability_sweep, tournament_facts_oracle
from .protocol import Protocol
from .protocols import PROTOCOLS, build_protocol, gossip_rounds
from .protocols.register import RegisterSimOutcome, history_violations
from .trace import ExecutionTrace
from .utils import parse_pair, stable_json_dumps

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64
EXIT_UNSUPPORTED = 65

PROTOCOL_ANALYZERS: dict[str, tuple[type[TraceAnalyzer], ...]] = {
    "full-information": (),
    "gossip": (TournamentEmulationAnalyzer, GossipProgressAnalyzer),
    "snapshot": (SnapshotAnalyzer,),
    "register": (KingSoundnessAnalyzer,),
    "pairs-collect": (PairsTranslationAnalyzer,),
    "pair-filter": (PairsTranslationAnalyzer,),
}

PROPERTY_ANALYZERS: dict[str, type[TraceAnalyzer]] = {
    "snapshot-valid": SnapshotAnalyzer,
    "tournament-emulation": TournamentEmulationAnalyzer,
    "king-liveness": KingLivenessAnalyzer,
    "pairs-translation": PairsTranslationAnalyzer,
}


class ArgumentParser(argparse.ArgumentParser):
    """Exit with the usage code instead of argparse's default of 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    common.add_argument("-q", "--quiet", action="store_true", help="only warnings and errors")

    network = ArgumentParser(add_help=False)
    network.add_argument("--n", type=int, default=3, help="processor count")
    network.add_argument("--spec", default="tp-complete", help="adversary, e.g. tp, tp-complete, kcc:2, tp-pairs:RR")

    parser = ArgumentParser(prog="adversim", description="Synchronous dynamic networks under message adversaries.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    simulate = sub.add_parser("simulate", parents=[common, network], help="run one seeded execution")
    simulate.add_argument("--protocol", choices=sorted(PROTOCOLS), default="full-information")
    simulate.add_argument("--rounds", type=int)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--param", dest="params", action="append", metavar="KEY=VALUE")
    simulate.add_argument("--out", help="trace file (default: stdout)")
    simulate.add_argument("--dump-states", action="store_true", help="embed full states next to digests")

    exhaustive = sub.add_parser("exhaustive", parents=[common, network], help="check a property on every execution")
    exhaustive.add_argument("--property", required=True, help=f"one of {', '.join(PROPERTIES)}")
    exhaustive.add_argument("--rounds", type=int)
    exhaustive.add_argument("--jobs", type=int, default=1)
    exhaustive.add_argument("--branch-cap", type=int, default=DEFAULT_BRANCH_CAP)
    exhaustive.add_argument("--enumeration-budget", type=int)
    exhaustive.add_argument("--fallback-samples", type=int, default=DEFAULT_FALLBACK_SAMPLES)
    exhaustive.add_argument("--param", dest="params", action="append", metavar="KEY=VALUE")
    exhaustive.add_argument("--out", help="report file (default: stdout)")

    complex_ = sub.add_parser("complex", parents=[common], help="build and export the TP-pairs complex")
    complex_.add_argument("--n", type=int, default=3)
    complex_.add_argument("--schedule", default="RR")
    complex_.add_argument("--k", type=int, help="number of splits (default: one schedule cycle)")
    complex_.add_argument("--json", help="complex JSON file")
    complex_.add_argument("--dot", help="1-skeleton DOT file")
    complex_.add_argument("--svg", help="planar SVG file (n = 3 only)")
    complex_.add_argument("--cross-validate", action="store_true")

    verify = sub.add_parser("verify", parents=[common], help="replay traces or check register outcomes")
    verify.add_argument("files", nargs="*")
    verify.add_argument("--oracle", help=f"also run an oracle: {', '.join(ORACLES)}")
    verify.add_argument("--n", type=int, default=3)
    verify.add_argument("--max-depth", type=int, default=8)
    verify.add_argument("--pair", default="0-1")

    oracle = sub.add_parser("oracle", parents=[common], help="run a brute-force oracle report")
    oracle.add_argument("oracle", help=f"one of {', '.join(ORACLES)}")
    oracle.add_argument("--n", type=int, default=3)
    oracle.add_argument("--max-depth", type=int, default=8)
    oracle.add_argument("--pair", default="0-1")

    enum = sub.add_parser("enumerate", parents=[common, network], help="list the legal graphs of one round")
    enum.add_argument("--round", dest="round_index", type=int, default=0, help="0-based round index")
    enum.add_argument("--enumeration-budget", type=int)
    return parser


def _emit(doc: Any, path: Optional[str] = None) -> None:
    text = stable_json_dumps(doc, pretty=True) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _analyze(trace: ExecutionTrace, protocol_name: str) -> list[dict[str, Any]]:
    engine = Engine()
    engine.addanalyzer(RcgLegalityAnalyzer)
    for analyzer_cls in PROTOCOL_ANALYZERS.get(protocol_name, ()):
        engine.addanalyzer(analyzer_cls)
    analyzers = engine.analyze(trace)
    for name, analyzer in analyzers.items():
        logger.info("%s: %s", name, analyzer.get_analysis()["passed"])
    return [analyzer.get_analysis() for analyzer in analyzers.values()]


def _failed(analyses: list[dict[str, Any]]) -> list[dict[str, Any]]:
    return [a for a in analyses if a.get("passed") is False]


def _default_rounds(cfg: Config, protocol: Protocol) -> int:
    schedule = getattr(protocol.p, "schedule", None)
    if schedule is not None:
        return schedule.cycle_length
    if protocol.name == "gossip":
        return gossip_rounds(cfg.n)
    return cfg.n


def cmd_simulate(cfg: Config) -> int:
    protocol = build_protocol(cfg.protocol or "full-information", cfg.n, cfg.params)
    spec = cfg.adversary()
    rounds = _default_rounds(cfg, protocol) if cfg.rounds is None else cfg.rounds
    trace = Engine().run(protocol, spec, rounds, list(range(cfg.n)), seed=cfg.seed)
    failures = _failed(_analyze(trace, protocol.name))
    trace.violations.extend(failures)
    text = trace.to_json(dump_states=cfg.dump_states)
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    logger.info("Simulated %d rounds of %s under %s (seed %d)", rounds, protocol.name, spec, cfg.seed)
    return EXIT_VIOLATION if failures else EXIT_OK


def _property_protocol(cfg: Config) -> Protocol:
    name = {
        "snapshot-valid": "snapshot",
        "tournament-emulation": "gossip",
        "king-liveness": "register",
    }.get(cfg.property or "")
    params = dict(cfg.params)
    if name == "gossip" and cfg.rounds is not None:
        params.setdefault("rounds", cfg.rounds)
    if cfg.property == "pairs-translation":
        spec = cfg.adversary()
        if spec.kind not in (AdversaryKind.TP_PAIRS, AdversaryKind.TP_COMPLETE):
            raise UsageError(f"pairs-translation runs under tp-pairs or tp-complete, not {spec}.")
        if spec.schedule is not None:
            params.setdefault("schedule", spec.schedule)
        name = "pairs-collect" if spec.kind == AdversaryKind.TP_PAIRS else "pair-filter"
    assert name is not None
    return build_protocol(name, cfg.n, params)


def cmd_exhaustive(cfg: Config) -> int:
    spec = cfg.adversary()
    engine = Engine(branch_cap=cfg.branch_cap, enumeration_budget=cfg.enumeration_budget, jobs=cfg.jobs)
    protocol = _property_protocol(cfg)
    rounds = _default_rounds(cfg, protocol) if cfg.rounds is None else cfg.rounds
    prop = AnalyzerProperty(PROPERTY_ANALYZERS[cfg.property or ""])
    inputs = list(range(cfg.n))
    report: dict[str, Any] = {"property": cfg.property, "spec": str(spec), "n": cfg.n, "rounds": rounds}
    try:
        verdict = engine.run_exhaustive(protocol, spec, rounds, inputs, prop)
    except BudgetExceededError as exc:
        if cfg.fallback_samples == 0:
            raise
        logger.warning("%s; checking %d seeded runs instead", exc, cfg.fallback_samples)
        report.update({"mode": "sampled", "branches": exc.count, "cap": exc.cap, "samples": cfg.fallback_samples})
        for seed in range(cfg.fallback_samples):
            trace = engine.run(protocol, spec, rounds, inputs, seed=seed)
            if not prop(trace):
                report.update({"holds": False, "counterexample": trace.to_dict()})
                _emit(report, cfg.out)
                return EXIT_VIOLATION
        report["holds"] = True
        _emit(report, cfg.out)
        return EXIT_OK
    report.update({"mode": "exhaustive", **verdict.to_dict()})
    _emit(report, cfg.out)
    return EXIT_OK if verdict.holds else EXIT_VIOLATION


def cmd_complex(cfg: Config) -> int:
    schedule = cx.as_schedule(cfg.n, cfg.schedule) if cfg.n >= 2 else None
    k = cfg.k
    if k is None:
        k = schedule.cycle_length if schedule is not None else 0
    if "svg" in cfg.outputs and cfg.n != 3:
        raise UnsupportedDimensionError(f"Planar drawing needs n = 3, got n = {cfg.n}.")
    c = cx.build(cfg.n, schedule, k)
    summary: dict[str, Any] = {
        "n": cfg.n,
        "k": k,
        "schedule": c.to_dict()["schedule"],
        "vertices": len(c.vertices),
        "tops": len(c.tops),
        "chromatic": cx.check_chromatic(c),
        "sperner": cx.check_sperner(c),
    }
    for fmt, path in cfg.outputs.items():
        Path(path).write_bytes(cx.export(c, "svg2d" if fmt == "svg" else fmt))
    ok = summary["chromatic"] and summary["sperner"]
    if cfg.cross_validate:
        result = cx.cross_validate(c, cfg.n, schedule, k)
        summary["cross_validation"] = result.to_dict()
        ok = ok and result.ok
    _emit(summary)
    logger.info("Built complex with %d top simplices", len(c.tops))
    return EXIT_OK if ok else EXIT_VIOLATION


def verify_trace(trace: ExecutionTrace) -> dict[str, Any]:
    """Replay a loaded trace, compare its digests and run the protocol's analyzers."""
    report: dict[str, Any] = {"kind": "trace", "protocol": trace.protocol, "spec": str(trace.spec)}
    bad = trace.first_invalid_round()
    if bad is not None:
        report.update({"passed": False, "first_violating_round": bad, "reason": "illegal round graph"})
        return report
    if trace.protocol not in PROTOCOLS:
        report.update({"passed": False, "reason": f"unknown protocol '{trace.protocol}'"})
        return report
    protocol = build_protocol(trace.protocol, trace.n, trace.params)
    replayed = Engine().replay(protocol, trace.spec, trace.inputs, trace.rcgs, seed=trace.seed)
    mismatch = next(
        (r for r, (a, b) in enumerate(zip(trace.digests, replayed.digests)) if tuple(a) != tuple(b)),
        None,
    )
    if mismatch is None and len(trace.digests) != len(replayed.digests):
        mismatch = min(len(trace.digests), len(replayed.digests))
    analyses = _analyze(replayed, protocol.name)
    report["analyses"] = analyses
    report["digests_match"] = mismatch is None
    if mismatch is not None:
        report["first_mismatched_round"] = mismatch
    report["passed"] = mismatch is None and not _failed(analyses)
    return report


def verify_outcome(outcome: RegisterSimOutcome) -> dict[str, Any]:
    problems = history_violations(outcome)
    return {
        "kind": "register-outcome",
        "n": outcome.n,
        "writes": outcome.writes,
        "all_done": outcome.all_done,
        "violations": problems,
        "passed": outcome.all_done and not problems,
    }


def run_oracle(name: str, n: int, max_depth: int = 8, pair: str = "0-1") -> dict[str, Any]:
    if name == "tournament-facts":
        return tournament_facts_oracle(n).to_dict()
    if name == "reachability":
        return reachability_sweep(n)
    if name == "king-liveness":
        report = king_liveness_search(n, max_depth)
    else:
        report = find_boundary_witness(n, parse_pair(pair), max_depth)
    return {**report.to_dict(), "passed": report.found}


def cmd_verify(cfg: Config) -> int:
    if not cfg.files and cfg.oracle is None:
        raise UsageError("verify needs at least one file or --oracle.")
    reports = []
    for name in cfg.files:
        doc = json.loads(Path(name).read_text(encoding="utf-8"))
        if isinstance(doc, dict) and doc.get("kind") == "register-outcome":
            report = verify_outcome(RegisterSimOutcome.from_dict(doc))
        else:
            report = verify_trace(ExecutionTrace.from_dict(doc))
        report["file"] = name
        logger.info("%s: %s", name, "ok" if report["passed"] else "FAILED")
        reports.append(report)
    if cfg.oracle is not None:
        reports.append(run_oracle(cfg.oracle, cfg.n, cfg.max_depth, cfg.pair or "0-1"))
    _emit(reports)
    return EXIT_OK if all(r["passed"] for r in reports) else EXIT_VIOLATION


def cmd_oracle(cfg: Config) -> int:
    if cfg.oracle is None:
        raise UsageError(f"Name an oracle: {', '.join(ORACLES)}.")
    report = run_oracle(cfg.oracle, cfg.n, cfg.max_depth, cfg.pair or "0-1")
    _emit(report)
    return EXIT_OK if report["passed"] else EXIT_VIOLATION


def cmd_enumerate(cfg: Config) -> int:
    spec = cfg.adversary()
    count = 0
    for g in enumerate_rcgs(spec, cfg.round_index, cfg.enumeration_budget):
        sys.stdout.write(g.to_json() + "\n")
        count += 1
    logger.info("%d legal graphs for %s in round %d", count, spec, cfg.round_index + 1)
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "exhaustive": cmd_exhaustive,
    "complex": cmd_complex,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "enumerate": cmd_enumerate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = Config.from_namespace(args)
    except UsageError as exc:
        sys.stderr.write(f"adversim: {exc}\n")
        return EXIT_USAGE
    logging.basicConfig(
        level=cfg.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        logger.error("%s", exc)
        _emit({"error": "budget", "what": exc.what, "count": exc.count, "cap": exc.cap})
        return EXIT_BUDGET
    except UnsupportedDimensionError as exc:
        logger.error("%s", exc)
        return EXIT_UNSUPPORTED
    except ValueError as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
