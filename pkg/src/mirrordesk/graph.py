"""Layered profile graph with evidence-scored nodes and typed relation edges.

The graph stores psychological/behavioural constructs as nodes in seven
layers, relates them with four edge types, and anchors timestamped,
source-attributed evidence on nodes. Node confidence is a noisy-OR
aggregate of per-evidence contributions with exponential recency decay:

    c_i = reliability_i * exp(-decay_rate * age_days_i)
          * (1 - uncertainty_i) * weight_multiplier_i
    confidence = 1 - prod(1 - c_i)

The graph keeps an explicit clock (max observed_at seen) so tests and
replays are independent of wall-clock time. Mutations are serialized
through a single writer lock; ``snapshot()`` hands out immutable copies.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import (
    EmptyLabel,
    FutureTimestamp,
    InvalidLayer,
    InvalidRelation,
    InvalidScore,
    InvalidWeight,
    MissingNode,
)

LAYERS = ("cognition", "affect", "habits", "values", "social", "health", "objectives")
KINDS = ("belief", "routine", "trigger", "protective_factor", "value", "skill", "construct")
RELATIONS = ("causation", "amplification", "buffering", "contradiction")

DEFAULT_DECAY_RATE = 0.01  # per day

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


def parse_ts(value) -> datetime:
    """Parse an ISO-8601 timestamp; naive values are taken as UTC."""
    if isinstance(value, datetime):
        ts = value
    else:
        ts = datetime.fromisoformat(str(value))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts


def format_ts(ts: datetime | None) -> str | None:
    return None if ts is None else ts.astimezone(timezone.utc).isoformat()


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0 or math.isnan(value):
        raise InvalidScore(f"{name} must lie in [0, 1], got {value!r}")
    return value


@dataclass
class EvidenceRecord:
    """A timestamped, source-attributed observation anchored on a node."""

    id: str
    source: str
    observed_at: datetime
    reliability: float
    uncertainty: float
    payload: str = ""
    weight_multiplier: float = 1.0
    polarity: str = "supports"       # supports | contradicts
    episode_tag: str | None = None

    def contribution(self, as_of: datetime, decay_rate: float) -> float:
        """Effective contribution of this record at time ``as_of``."""
        age_days = max(0.0, (as_of - self.observed_at).total_seconds() / 86400.0)
        c = (
            self.reliability
            * math.exp(-decay_rate * age_days)
            * (1.0 - self.uncertainty)
            * self.weight_multiplier
        )
        return min(1.0, max(0.0, c))

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "source": self.source,
            "observed_at": format_ts(self.observed_at),
            "reliability": self.reliability,
            "uncertainty": self.uncertainty,
            "payload": self.payload,
            "weight_multiplier": self.weight_multiplier,
            "polarity": self.polarity,
            "episode_tag": self.episode_tag,
        }


@dataclass
class GraphNode:
    id: str
    layer: str
    kind: str
    label: str
    evidence: list[EvidenceRecord] = field(default_factory=list)

    @property
    def natural_key(self) -> tuple[str, str, str]:
        return (self.layer, self.kind, self.label)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "layer": self.layer,
            "kind": self.kind,
            "label": self.label,
            "evidence": [ev.to_dict() for ev in sorted(self.evidence, key=lambda e: e.id)],
        }


@dataclass
class GraphEdge:
    from_id: str
    to_id: str
    relation: str
    weight: float

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.from_id, self.to_id, self.relation)

    def to_dict(self) -> dict:
        return {
            "from": self.from_id,
            "to": self.to_id,
            "relation": self.relation,
            "weight": self.weight,
        }


@dataclass
class Segment:
    """A set of nodes whose evidence co-occurs across decision episodes."""

    id: str
    member_nodes: frozenset[str]
    support: int


def node_id_for(layer: str, kind: str, label: str) -> str:
    """Deterministic node id derived from the natural key."""
    digest = hashlib.sha256(f"{layer}\x1f{kind}\x1f{label}".encode()).hexdigest()
    return f"n-{digest[:12]}"


class MirrorGraph:
    """Mutable profile graph; one writer, many snapshot readers.

    Every mutation bumps ``version``. ``clock`` is the maximum observed_at
    this graph has been advanced to; evidence ahead of the clock is
    rejected so replays never depend on wall time.
    """

    def __init__(self, owner_persona: str = "default",
                 decay_rate: float = DEFAULT_DECAY_RATE):
        self.owner_persona = owner_persona
        self.decay_rate = decay_rate
        self.nodes: dict[str, GraphNode] = {}
        self.edges: dict[tuple[str, str, str], GraphEdge] = {}
        self.version = 0
        self.clock: datetime | None = None
        self._evidence_seq = 0
        self._lock = threading.RLock()

    # -- mutations --------------------------------------------------------

    def advance_clock(self, ts) -> None:
        """Move the graph clock forward to ``ts`` (backwards moves ignored)."""
        ts = parse_ts(ts)
        with self._lock:
            if self.clock is None or ts > self.clock:
                self.clock = ts

    def upsert_node(self, layer: str, kind: str, label: str) -> str:
        """Insert a node by natural key, returning its id.

        Re-upserting an identical natural key is a no-op beyond the first
        call: the existing id is returned and the version is untouched.
        """
        if layer not in LAYERS:
            raise InvalidLayer(f"unknown layer {layer!r}")
        if kind not in KINDS:
            raise InvalidLayer(f"unknown kind {kind!r}")
        if not label:
            raise EmptyLabel("node label must be nonempty")
        nid = node_id_for(layer, kind, label)
        with self._lock:
            if nid not in self.nodes:
                self.nodes[nid] = GraphNode(id=nid, layer=layer, kind=kind, label=label)
                self.version += 1
            return nid

    def add_edge(self, from_id: str, to_id: str, relation: str, weight: float) -> tuple:
        """Add or replace a typed edge; returns the edge key."""
        if relation not in RELATIONS:
            raise InvalidRelation(f"unknown relation {relation!r}")
        weight = float(weight)
        if not 0.0 <= weight <= 1.0:
            raise InvalidWeight(f"edge weight must lie in [0, 1], got {weight!r}")
        with self._lock:
            for nid in (from_id, to_id):
                if nid not in self.nodes:
                    raise MissingNode(f"unknown node {nid!r}")
            edge = GraphEdge(from_id, to_id, relation, weight)
            self.edges[edge.key] = edge
            self.version += 1
            return edge.key

    def attach_evidence(self, node_id: str, source: str, observed_at, reliability: float,
                        uncertainty: float, payload: str = "", weight_multiplier: float = 1.0,
                        polarity: str = "supports", episode_tag: str | None = None) -> str:
        """Append an evidence record to a node, keeping observed_at order."""
        observed_at = parse_ts(observed_at)
        reliability = _check_unit("reliability", reliability)
        uncertainty = _check_unit("uncertainty", uncertainty)
        weight_multiplier = _check_unit("weight_multiplier", weight_multiplier)
        with self._lock:
            node = self._get_node(node_id)
            if self.clock is None or observed_at > self.clock:
                raise FutureTimestamp(
                    f"observed_at {format_ts(observed_at)} is beyond the graph clock "
                    f"{format_ts(self.clock)}"
                )
            self._evidence_seq += 1
            record = EvidenceRecord(
                id=f"e-{self._evidence_seq:06d}",
                source=source,
                observed_at=observed_at,
                reliability=reliability,
                uncertainty=uncertainty,
                payload=payload,
                weight_multiplier=weight_multiplier,
                polarity=polarity,
                episode_tag=episode_tag,
            )
            node.evidence.append(record)
            node.evidence.sort(key=lambda e: (e.observed_at, e.id))
            self.version += 1
            return record.id

    def set_weight_multiplier(self, evidence_id: str, multiplier: float) -> None:
        """Adjust an evidence record's weight multiplier (metacognitive path)."""
        multiplier = _check_unit("weight_multiplier", multiplier)
        with self._lock:
            for node in self.nodes.values():
                for ev in node.evidence:
                    if ev.id == evidence_id:
                        ev.weight_multiplier = multiplier
                        self.version += 1
                        return
            raise MissingNode(f"unknown evidence {evidence_id!r}")

    def bump_uncertainty(self, node_id: str, amount: float) -> None:
        """Raise the uncertainty of every evidence record on a node."""
        with self._lock:
            node = self._get_node(node_id)
            for ev in node.evidence:
                ev.uncertainty = min(1.0, ev.uncertainty + max(0.0, amount))
            self.version += 1

    # -- queries ----------------------------------------------------------

    def _get_node(self, node_id: str) -> GraphNode:
        node = self.nodes.get(node_id)
        if node is None:
            raise MissingNode(f"unknown node {node_id!r}")
        return node

    def find_node(self, layer: str, kind: str, label: str) -> GraphNode | None:
        return self.nodes.get(node_id_for(layer, kind, label))

    def find_evidence(self, evidence_id: str) -> tuple[GraphNode, EvidenceRecord] | None:
        for node in self.nodes.values():
            for ev in node.evidence:
                if ev.id == evidence_id:
                    return node, ev
        return None

    def effective_confidence(self, node_id: str, as_of=None) -> float:
        """Noisy-OR aggregate of evidence contributions at ``as_of``.

        Defaults to the graph clock. A node with no evidence has
        confidence 0.
        """
        node = self._get_node(node_id)
        as_of = parse_ts(as_of) if as_of is not None else (self.clock or _EPOCH)
        remainder = 1.0
        for ev in node.evidence:
            remainder *= 1.0 - ev.contribution(as_of, self.decay_rate)
        return min(1.0, max(0.0, 1.0 - remainder))

    def neighborhood(self, node_id: str, relation_filter: str | None = None,
                     depth: int = 1) -> set[str]:
        """Nodes reachable within ``depth`` hops over matching edges.

        Traversal is undirected. Depth 0 returns the node itself; deeper
        queries return the reachable nodes excluding the start node.
        """
        self._get_node(node_id)
        if depth <= 0:
            return {node_id}
        adjacency: dict[str, set[str]] = {}
        for edge in self.edges.values():
            if relation_filter is not None and edge.relation != relation_filter:
                continue
            adjacency.setdefault(edge.from_id, set()).add(edge.to_id)
            adjacency.setdefault(edge.to_id, set()).add(edge.from_id)
        seen = {node_id}
        frontier = {node_id}
        for _ in range(depth):
            frontier = {n for cur in frontier for n in adjacency.get(cur, ()) if n not in seen}
            if not frontier:
                break
            seen |= frontier
        return seen - {node_id}

    def aggregate_segments(self, min_support: int = 1) -> list[Segment]:
        """Detect higher-order segments from episode-tag co-occurrence.

        Nodes whose evidence shares an episode tag co-occur in that
        episode; node sets co-occurring in at least ``min_support``
        episodes become segments. Untagged evidence does not participate.
        Returned in segment-id order.
        """
        if min_support < 1:
            raise InvalidScore("min_support must be >= 1")
        tag_members: dict[str, set[str]] = {}
        for node in self.nodes.values():
            for ev in node.evidence:
                if ev.episode_tag is not None:
                    tag_members.setdefault(ev.episode_tag, set()).add(node.id)
        counts: dict[frozenset[str], int] = {}
        for members in tag_members.values():
            key = frozenset(members)
            counts[key] = counts.get(key, 0) + 1
        segments = []
        for members, support in counts.items():
            if support >= min_support:
                digest = hashlib.sha256("\x1f".join(sorted(members)).encode()).hexdigest()
                segments.append(Segment(id=f"s-{digest[:12]}", member_nodes=members,
                                        support=support))
        segments.sort(key=lambda s: s.id)
        return segments

    def check_referential_integrity(self) -> None:
        for edge in self.edges.values():
            if edge.from_id not in self.nodes or edge.to_id not in self.nodes:
                raise MissingNode(f"dangling edge {edge.key!r}")

    # -- snapshots and serialization --------------------------------------

    def snapshot(self) -> "MirrorGraph":
        """Deep, immutable-by-convention copy safe to hand across threads."""
        with self._lock:
            clone = MirrorGraph(self.owner_persona, self.decay_rate)
            clone.nodes = copy.deepcopy(self.nodes)
            clone.edges = copy.deepcopy(self.edges)
            clone.version = self.version
            clone.clock = self.clock
            clone._evidence_seq = self._evidence_seq
            return clone

    def canonical_payload(self) -> dict:
        """Content payload with deterministic ordering (version excluded)."""
        return {
            "owner_persona": self.owner_persona,
            "decay_rate": self.decay_rate,
            "clock": format_ts(self.clock),
            "nodes": [self.nodes[nid].to_dict() for nid in sorted(self.nodes)],
            "edges": [self.edges[k].to_dict() for k in sorted(self.edges)],
        }

    def canonical_serialization(self) -> str:
        return json.dumps(self.canonical_payload(), sort_keys=True,
                          separators=(",", ":"), ensure_ascii=True)


def snapshot_hash(graph: MirrorGraph) -> str:
    """Digest of the canonical serialization; id-order independent."""
    return hashlib.sha256(graph.canonical_serialization().encode()).hexdigest()
