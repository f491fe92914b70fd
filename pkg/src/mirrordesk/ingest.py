"""Loaders for hiring inputs and the timestamped context-event stream.

Documents travel in a line-delimited JSON interchange format: one object
per line for event logs and profile pools, a single JSON object for the
competency framework and the persona seed. Loaders are pure; only
``ingest_events`` and ``seed_persona`` mutate a graph, and they do so on
the single-writer path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    DuplicateCandidate,
    DuplicateDimension,
    EmptyFramework,
    MalformedEvent,
    MirrordeskError,
    MissingId,
    OutOfRangeProficiency,
    UnknownGroup,
    UnknownTarget,
)
from .graph import LAYERS, KINDS, MirrorGraph, parse_ts

GROUPS = ("knowledge", "technical", "soft_skills", "org_culture_fit")


@dataclass(frozen=True)
class Dimension:
    id: str
    group: str
    label: str
    weight: float  # normalized within the group


@dataclass
class CompetencyFramework:
    """Agreed hiring dimensions, grouped, with per-group normalized weights."""

    dimensions: list[Dimension]

    def by_group(self) -> dict[str, list[Dimension]]:
        grouped: dict[str, list[Dimension]] = {}
        for dim in self.dimensions:
            grouped.setdefault(dim.group, []).append(dim)
        return grouped

    def dimension_ids(self) -> set[str]:
        return {d.id for d in self.dimensions}

    def to_dict(self) -> dict:
        return {
            "dimensions": [
                {"id": d.id, "group": d.group, "label": d.label, "weight": d.weight}
                for d in self.dimensions
            ]
        }


@dataclass
class CandidateProfile:
    id: str
    attributes: dict[str, float] = field(default_factory=dict)
    tags: set[str] = field(default_factory=set)
    dossier: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "attributes": dict(sorted(self.attributes.items())),
            "tags": sorted(self.tags),
            "dossier": self.dossier,
        }


@dataclass
class ContextEvent:
    """One pre-structured transcript assertion or context fact."""

    sequence: int
    observed_at: str
    source: str
    target: dict          # {layer, kind, label}
    polarity: str         # supports | contradicts
    reliability: float
    uncertainty: float
    payload: str = ""
    value_ref: str | None = None   # label of a values-layer node to contradict
    episode_tag: str | None = None


@dataclass
class IngestReport:
    nodes_created: int = 0
    evidence_attached: int = 0
    rejected: int = 0

    @property
    def total(self) -> int:
        return self.nodes_created + self.evidence_attached + self.rejected


def load_framework(document: dict) -> CompetencyFramework:
    """Parse and normalize a framework document.

    Missing weights default to uniform; weights are normalized to sum to
    one within each group so a full-marks candidate scores exactly 1.
    """
    raw = document.get("dimensions", [])
    if not raw:
        raise EmptyFramework("framework has no dimensions")
    seen: set[str] = set()
    parsed = []
    for entry in raw:
        dim_id = entry["id"]
        if dim_id in seen:
            raise DuplicateDimension(f"duplicate dimension id {dim_id!r}")
        seen.add(dim_id)
        group = entry["group"]
        if group not in GROUPS:
            raise UnknownGroup(f"unknown group {group!r}")
        parsed.append((dim_id, group, entry.get("label", dim_id),
                       float(entry.get("weight", 1.0))))
    dimensions = []
    for group in GROUPS:
        members = [p for p in parsed if p[1] == group]
        total = sum(p[3] for p in members)
        for dim_id, grp, label, weight in members:
            norm = weight / total if total > 0 else 1.0 / len(members)
            dimensions.append(Dimension(dim_id, grp, label, norm))
    # keep document order
    order = {p[0]: i for i, p in enumerate(parsed)}
    dimensions.sort(key=lambda d: order[d.id])
    return CompetencyFramework(dimensions)


def load_profiles(documents: list[dict]) -> list[CandidateProfile]:
    """Parse a candidate pool, preserving order and validating ranges."""
    profiles = []
    seen: set[str] = set()
    for doc in documents:
        cid = doc.get("id")
        if not cid:
            raise MissingId("candidate document lacks an id")
        if cid in seen:
            raise DuplicateCandidate(f"duplicate candidate id {cid!r}")
        seen.add(cid)
        attributes = {}
        for dim, value in doc.get("attributes", {}).items():
            value = float(value)
            if not 0.0 <= value <= 1.0:
                raise OutOfRangeProficiency(
                    f"proficiency {value!r} for {cid}/{dim} outside [0, 1]")
            attributes[dim] = value
        profiles.append(CandidateProfile(
            id=cid,
            attributes=attributes,
            tags=set(doc.get("tags", [])),
            dossier=doc.get("dossier", ""),
        ))
    return profiles


def parse_event(doc: dict) -> ContextEvent:
    try:
        assertion = doc["assertion"]
        target = assertion["target"]
        event = ContextEvent(
            sequence=int(doc["sequence"]),
            observed_at=doc["observed_at"],
            source=doc["source"],
            target={"layer": target["layer"], "kind": target["kind"],
                    "label": target["label"]},
            polarity=assertion["polarity"],
            reliability=float(assertion["reliability"]),
            uncertainty=float(assertion["uncertainty"]),
            payload=assertion.get("payload", ""),
            value_ref=assertion.get("value_ref"),
            episode_tag=doc.get("episode_tag"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedEvent(f"bad event record: {exc}") from exc
    if event.polarity not in ("supports", "contradicts"):
        raise MalformedEvent(f"bad polarity {event.polarity!r}")
    if event.target["layer"] not in LAYERS or event.target["kind"] not in KINDS:
        raise MalformedEvent(f"bad target {event.target!r}")
    if not (0.0 <= event.reliability <= 1.0 and 0.0 <= event.uncertainty <= 1.0):
        raise MalformedEvent("reliability/uncertainty outside [0, 1]")
    parse_ts(event.observed_at)
    return event


def seed_persona(graph: MirrorGraph, document: dict) -> list[str]:
    """Create onboarding nodes (values, objectives, priorities) directly.

    Value-layer nodes are never auto-created by event ingestion, so the
    persona seed is the one place they enter the graph.
    """
    created = []
    for spec in document.get("nodes", []):
        created.append(graph.upsert_node(spec["layer"], spec["kind"], spec["label"]))
    return created


def ingest_events(graph: MirrorGraph, events: list[ContextEvent],
                  auto_create: bool = True, strict: bool = False) -> IngestReport:
    """Anchor an ordered event stream into the graph as nodes and evidence.

    Each assertion becomes an evidence record on its target node. Targets
    are auto-created for non-values layers when ``auto_create`` is on;
    values-layer targets must already exist (they come from onboarding).
    A ``contradicts`` assertion with a ``value_ref`` also ensures a
    contradiction edge from the construct to that values-layer node.

    Report classification is exclusive per assertion: it counts under
    ``nodes_created`` when its target was created, ``evidence_attached``
    when the target already existed, ``rejected`` when skipped.
    """
    report = IngestReport()
    last_seq = None
    for event in events:
        try:
            if not isinstance(event, ContextEvent):
                event = parse_event(event)
            if last_seq is not None and event.sequence <= last_seq:
                raise MalformedEvent(
                    f"sequence {event.sequence} not increasing after {last_seq}")
            last_seq = event.sequence
            target = event.target
            value_node = None
            if event.polarity == "contradicts" and event.value_ref:
                value_node = graph.find_node("values", "value", event.value_ref)
                if value_node is None:
                    raise UnknownTarget(f"no values node labelled {event.value_ref!r}")
            node = graph.find_node(target["layer"], target["kind"], target["label"])
            created = False
            if node is None:
                if not auto_create or target["layer"] == "values":
                    raise UnknownTarget(f"no node for {target!r}")
                graph.upsert_node(target["layer"], target["kind"], target["label"])
                node = graph.find_node(target["layer"], target["kind"], target["label"])
                created = True
            graph.advance_clock(event.observed_at)
            graph.attach_evidence(
                node.id,
                source=event.source,
                observed_at=event.observed_at,
                reliability=event.reliability,
                uncertainty=event.uncertainty,
                payload=event.payload,
                polarity=event.polarity,
                episode_tag=event.episode_tag,
            )
            if value_node is not None:
                graph.add_edge(node.id, value_node.id, "contradiction",
                               event.reliability)
            if created:
                report.nodes_created += 1
            else:
                report.evidence_attached += 1
        except MirrordeskError:
            if strict:
                raise
            report.rejected += 1
    return report


# -- file helpers ---------------------------------------------------------

def read_jsonl(path) -> list[dict]:
    records = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line:
            records.append(json.loads(line))
    return records


def load_framework_file(path) -> CompetencyFramework:
    return load_framework(json.loads(Path(path).read_text()))


def load_profiles_file(path) -> list[CandidateProfile]:
    return load_profiles(read_jsonl(path))


def load_events_file(path) -> list[ContextEvent]:
    return [parse_event(doc) for doc in read_jsonl(path)]
