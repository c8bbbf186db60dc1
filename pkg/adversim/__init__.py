"""adversim package exports."""

from . import analyzers
from . import protocols as proto
from .adversary import AdversaryKind, AdversarySpec, branching, enumerate_rcgs, legal_graphs, sample, validate
from .analyzer import AnalyzerProperty, TraceAnalyzer
from .complex import SimComplex, Vertex, build, cross_validate, xy_split_round
from .engine import Engine, Exploration, Verdict, run, run_exhaustive
from .errors import (
    AdversimError,
    BudgetExceededError,
    DimensionMismatchError,
    MalformedComplexError,
    ProtocolViolation,
    UnsupportedDimensionError,
    UsageError,
)
from .graph import Rcg, Tournament, find_king, has_traversal_path, scc_condensation, tournament_spanning_path
from .plot import ComplexPlot
from .protocol import Protocol
from .schedule import PairSchedule
from .trace import ExecutionTrace
from .view import View

__all__ = [
    "Rcg",
    "Tournament",
    "scc_condensation",
    "has_traversal_path",
    "tournament_spanning_path",
    "find_king",
    "AdversaryKind",
    "AdversarySpec",
    "PairSchedule",
    "validate",
    "sample",
    "enumerate_rcgs",
    "legal_graphs",
    "branching",
    "View",
    "Protocol",
    "Engine",
    "Verdict",
    "Exploration",
    "ExecutionTrace",
    "run",
    "run_exhaustive",
    "TraceAnalyzer",
    "AnalyzerProperty",
    "SimComplex",
    "Vertex",
    "build",
    "xy_split_round",
    "cross_validate",
    "ComplexPlot",
    "AdversimError",
    "DimensionMismatchError",
    "BudgetExceededError",
    "ProtocolViolation",
    "MalformedComplexError",
    "UnsupportedDimensionError",
    "UsageError",
    "proto",
    "analyzers",
]
