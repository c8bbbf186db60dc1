"""Built-in trace analyzers."""

from .gossip import GossipProgressAnalyzer, TournamentEmulationAnalyzer
from .legality import RcgLegalityAnalyzer
from .register import KingLivenessAnalyzer, KingSoundnessAnalyzer
from .snapshot import SnapshotAnalyzer
from .translation import PairsTranslationAnalyzer

__all__ = [
    "RcgLegalityAnalyzer",
    "SnapshotAnalyzer",
    "TournamentEmulationAnalyzer",
    "GossipProgressAnalyzer",
    "KingSoundnessAnalyzer",
    "KingLivenessAnalyzer",
    "PairsTranslationAnalyzer",
]
