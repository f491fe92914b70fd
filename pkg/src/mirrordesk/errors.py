"""Exception hierarchy for mirrordesk.

Every error raised on a public surface derives from MirrordeskError and
carries a machine-readable ``kind`` (used verbatim by the HTTP layer).
"""


class MirrordeskError(Exception):
    """Base class for all mirrordesk errors."""

    kind = "error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__doc__)


# --- graph ---------------------------------------------------------------

class InvalidLayer(MirrordeskError):
    """Layer or kind outside the allowed enumerations."""
    kind = "invalid_layer"


class EmptyLabel(MirrordeskError):
    """Node label must be nonempty."""
    kind = "empty_label"


class MissingNode(MirrordeskError):
    """Referenced node does not exist."""
    kind = "missing_node"


class InvalidWeight(MirrordeskError):
    """Edge weight outside [0, 1]."""
    kind = "invalid_weight"


class InvalidRelation(MirrordeskError):
    """Edge relation outside the four allowed relations."""
    kind = "invalid_relation"


class InvalidScore(MirrordeskError):
    """Evidence score field outside [0, 1]."""
    kind = "invalid_score"


class FutureTimestamp(MirrordeskError):
    """Evidence observed_at lies beyond the graph clock."""
    kind = "future_timestamp"


# --- ingest --------------------------------------------------------------

class DuplicateDimension(MirrordeskError):
    """Two framework dimensions share an id."""
    kind = "duplicate_dimension"


class EmptyFramework(MirrordeskError):
    """Framework document contains no dimensions."""
    kind = "empty_framework"


class UnknownGroup(MirrordeskError):
    """Dimension group outside the four allowed groups."""
    kind = "unknown_group"


class DuplicateCandidate(MirrordeskError):
    """Two candidate profiles share an id."""
    kind = "duplicate_candidate"


class MissingId(MirrordeskError):
    """Candidate profile lacks an id."""
    kind = "missing_id"


class OutOfRangeProficiency(MirrordeskError):
    """Proficiency outside [0, 1]."""
    kind = "out_of_range_proficiency"


class UnknownTarget(MirrordeskError):
    """Event targets a node that does not exist and may not be auto-created."""
    kind = "unknown_target"


class MalformedEvent(MirrordeskError):
    """Event record failed validation."""
    kind = "malformed_event"


# --- synapse -------------------------------------------------------------

class ChannelMismatch(MirrordeskError):
    """Window channels differ from the encoder configuration."""
    kind = "channel_mismatch"


class EmptyWindow(MirrordeskError):
    """Signal window carries no samples."""
    kind = "empty_window"


class DimensionMismatch(MirrordeskError):
    """Latent vectors have different dimensions."""
    kind = "dimension_mismatch"


# --- episode engine ------------------------------------------------------

class UnknownDimension(MirrordeskError):
    """Profile references a dimension absent from the framework."""
    kind = "unknown_dimension"


class EmptyPool(MirrordeskError):
    """No scorecards to rank."""
    kind = "empty_pool"


class UnknownProposal(MirrordeskError):
    """Decision references a proposal that does not exist."""
    kind = "unknown_proposal"


class AlreadyDecided(MirrordeskError):
    """Proposal already approved or rejected."""
    kind = "already_decided"


class SnapshotStale(MirrordeskError):
    """Snapshot version is no longer the latest (informational)."""
    kind = "snapshot_stale"


# --- fit metrics ---------------------------------------------------------

class InsufficientOverlap(MirrordeskError):
    """Fewer than two candidates shared between the two rankings."""
    kind = "insufficient_overlap"


class KTooLarge(MirrordeskError):
    """k exceeds the length of one of the rankings."""
    kind = "k_too_large"


class BadWeights(MirrordeskError):
    """Composite weights must be nonnegative and sum to 1."""
    kind = "bad_weights"


# --- service -------------------------------------------------------------

class ChecksumMismatch(MirrordeskError):
    """Log entry checksum does not match its recomputed value."""
    kind = "checksum_mismatch"

    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(message or f"checksum mismatch at log index {index}")


class GapInLog(MirrordeskError):
    """Log indices are not gapless from zero."""
    kind = "gap_in_log"


class UnknownEpisode(MirrordeskError):
    """Referenced episode does not exist."""
    kind = "unknown_episode"
