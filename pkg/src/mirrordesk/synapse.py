"""Signal-to-graph coupling: latent state encoding and update proposals.

Simulated physiological windows are reduced to fixed-dimension latent
vectors by a deterministic pipeline (per-channel mean and variance,
baseline standardization, fixed linear projection, norm clip). The gap
between a predicted and an observed latent state is a prediction error;
sustained exceedance turns into pending update proposals that a human
must approve before anything touches the graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime

import numpy as np

from .errors import ChannelMismatch, DimensionMismatch, EmptyWindow
from .graph import parse_ts


@dataclass
class SignalWindow:
    start: datetime
    end: datetime
    channels: dict[str, list[float]]

    def __post_init__(self):
        self.start = parse_ts(self.start)
        self.end = parse_ts(self.end)
        if self.end <= self.start:
            raise EmptyWindow("window end must be after start")
        lengths = {len(v) for v in self.channels.values()}
        if not self.channels or lengths == {0}:
            raise EmptyWindow("window has no samples")
        if len(lengths) != 1:
            raise ChannelMismatch("channels differ in sample count")


@dataclass
class LatentState:
    vector: np.ndarray
    as_of: datetime

    def __post_init__(self):
        self.vector = np.asarray(self.vector, dtype=float)
        self.as_of = parse_ts(self.as_of)


@dataclass
class EncoderConfig:
    """Deterministic encoder parameters.

    ``baseline_mean``/``baseline_scale`` standardize the feature vector
    [mean_ch1, var_ch1, mean_ch2, ...]; ``projection`` is a fixed d x 2n
    matrix. Defaults give an identity-like projection padded to ``dim``.
    """

    channels: list[str]
    dim: int = 8
    baseline_mean: list[float] = field(default_factory=list)
    baseline_scale: list[float] = field(default_factory=list)
    projection: list[list[float]] | None = None

    def feature_count(self) -> int:
        return 2 * len(self.channels)

    def matrix(self) -> np.ndarray:
        if self.projection is not None:
            return np.asarray(self.projection, dtype=float)
        m = np.zeros((self.dim, self.feature_count()))
        for i in range(min(self.dim, self.feature_count())):
            m[i, i] = 1.0
        return m

    @classmethod
    def from_dict(cls, doc: dict) -> "EncoderConfig":
        return cls(
            channels=list(doc["channels"]),
            dim=int(doc.get("dim", 8)),
            baseline_mean=list(doc.get("baseline_mean", [])),
            baseline_scale=list(doc.get("baseline_scale", [])),
            projection=doc.get("projection"),
        )


@dataclass
class UpdateProposal:
    """A pending change to the graph or config, awaiting human decision."""

    id: str
    kind: str                 # raise_uncertainty | add_evidence | regime_shift | adjust_threshold
    target: str               # node id or config key
    magnitude: float
    rationale: str
    status: str = "pending"   # pending -> approved | rejected

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "target": self.target,
            "magnitude": self.magnitude,
            "rationale": self.rationale,
            "status": self.status,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "UpdateProposal":
        return cls(id=doc["id"], kind=doc["kind"], target=doc["target"],
                   magnitude=float(doc["magnitude"]), rationale=doc["rationale"],
                   status=doc.get("status", "pending"))


def encode_state(window: SignalWindow, config: EncoderConfig) -> LatentState:
    """Encode a signal window into a norm-clipped latent vector."""
    if sorted(window.channels) != sorted(config.channels):
        raise ChannelMismatch(
            f"window channels {sorted(window.channels)} != config {sorted(config.channels)}")
    features = []
    for name in config.channels:
        samples = np.asarray(window.channels[name], dtype=float)
        features.append(samples.mean())
        features.append(samples.var())
    features = np.asarray(features)
    mean = np.asarray(config.baseline_mean or np.zeros(len(features)))
    scale = np.asarray(config.baseline_scale or np.ones(len(features)))
    standardized = (features - mean) / np.where(scale == 0, 1.0, scale)
    vector = config.matrix() @ standardized
    norm = float(np.linalg.norm(vector))
    if norm > 1.0:
        vector = vector / norm
    return LatentState(vector=vector, as_of=window.end)


def prediction_error(predicted: LatentState, observed: LatentState) -> float:
    """Euclidean distance between two latent states."""
    if predicted.vector.shape != observed.vector.shape:
        raise DimensionMismatch(
            f"{predicted.vector.shape} != {observed.vector.shape}")
    return float(np.linalg.norm(predicted.vector - observed.vector))


def propose_updates(errors: list[tuple[datetime, float]], context_nodes: list[str],
                    threshold: float = 0.5, window: int = 3) -> list[UpdateProposal]:
    """Turn a time-ordered prediction-error series into pending proposals.

    The latest error at or above ``threshold`` yields one
    ``raise_uncertainty`` proposal per context node; any run of
    ``window`` consecutive exceedances additionally yields a single
    ``regime_shift`` proposal. Nothing is applied here.
    """
    proposals: list[UpdateProposal] = []
    if not errors:
        return proposals
    values = [float(e) for _, e in errors]
    latest = values[-1]
    if latest >= threshold:
        for i, node_id in enumerate(sorted(context_nodes)):
            proposals.append(UpdateProposal(
                id=f"up-raise-{node_id}",
                kind="raise_uncertainty",
                target=node_id,
                magnitude=min(1.0, latest - threshold),
                rationale=f"latest prediction error {latest:.3f} >= {threshold:.3f}",
            ))
    run = 0
    shifted = False
    for v in values:
        run = run + 1 if v >= threshold else 0
        if run >= window:
            shifted = True
            break
    if shifted:
        proposals.append(UpdateProposal(
            id="up-regime-shift",
            kind="regime_shift",
            target="regime",
            magnitude=max(values),
            rationale=f"{window} consecutive prediction errors >= {threshold:.3f}",
        ))
    assert all(math.isfinite(p.magnitude) for p in proposals)
    return proposals
