"""mirrordesk: a context-sensitive decision-support engine.

A persistent, evidence-bearing profile graph, a five-step closed-loop
decision protocol with human override, and alignment metrics between
human and machine evaluations.
"""

from .graph import MirrorGraph, snapshot_hash
from .ingest import (
    CandidateProfile,
    CompetencyFramework,
    ContextEvent,
    ingest_events,
    load_framework,
    load_profiles,
)
from .episode import (
    DecisionEpisode,
    EpisodeConfig,
    ScoreCard,
    ethical_gate,
    metacognitive_review,
    rank_candidates,
    run_episode,
    score_candidate,
)
from .fitmetrics import Evaluation, FitReport, fit_score, rank_correlation
from .synapse import LatentState, SignalWindow, encode_state, prediction_error
from .store import Store, replay_log

__all__ = [
    "CandidateProfile",
    "CompetencyFramework",
    "ContextEvent",
    "DecisionEpisode",
    "EpisodeConfig",
    "Evaluation",
    "FitReport",
    "LatentState",
    "MirrorGraph",
    "ScoreCard",
    "SignalWindow",
    "Store",
    "encode_state",
    "ethical_gate",
    "fit_score",
    "ingest_events",
    "load_framework",
    "load_profiles",
    "metacognitive_review",
    "prediction_error",
    "rank_candidates",
    "rank_correlation",
    "replay_log",
    "run_episode",
    "score_candidate",
    "snapshot_hash",
]

__version__ = "0.1.0"
