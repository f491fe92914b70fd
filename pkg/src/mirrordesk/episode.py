"""Closed-loop decision episodes over a graph snapshot and a hiring task.

An episode executes five steps in order: collect and time-align inputs,
update the persona state, generate and score options (including the
inaction option), anticipate consequences as rule-derived risk notes,
and emit a ranked recommendation list with rationales and uncertainties.

Scoring is a transparent weighted sum over the competency framework plus
a bounded context adjustment read from the graph. The ethical gate is
lexicographic: a candidate construct contradicting a values-layer node
at high confidence disqualifies the candidate outright, regardless of
competence. ``context_free`` mode runs the identical scorer with all
graph access removed, emulating an evaluator that only sees the CVs and
the framework.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .errors import AlreadyDecided, EmptyPool, UnknownDimension, UnknownProposal
from .graph import MirrorGraph, format_ts
from .ingest import GROUPS, CandidateProfile, CompetencyFramework
from .synapse import UpdateProposal

MODES = ("context_rich", "context_free")
PRIORITY_LAYERS = ("values", "objectives")
INACTION_OPTION = "no-hire"
STAGE_NAMES = (
    "collect_and_align",
    "update_persona_state",
    "score_options",
    "anticipate_consequences",
    "recommend",
)


def _digest(payload) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class EpisodeConfig:
    mode: str = "context_rich"
    group_weights: dict[str, float] = field(
        default_factory=lambda: {g: 0.25 for g in GROUPS})
    gate_threshold: float = 0.7
    conflict_threshold: float = 0.4
    adjustment_unit: float = 0.05
    adjustment_cap: float = 0.15
    down_weight_factor: float = 0.5
    no_hire_reserve: float = 0.0
    seed: int = 0
    version: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        total = sum(self.group_weights.values())
        if any(w < 0 for w in self.group_weights.values()) or abs(total - 1.0) > 1e-9:
            raise ValueError("group weights must be nonnegative and sum to 1")

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "group_weights": dict(sorted(self.group_weights.items())),
            "gate_threshold": self.gate_threshold,
            "conflict_threshold": self.conflict_threshold,
            "adjustment_unit": self.adjustment_unit,
            "adjustment_cap": self.adjustment_cap,
            "down_weight_factor": self.down_weight_factor,
            "no_hire_reserve": self.no_hire_reserve,
            "seed": self.seed,
            "version": self.version,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "EpisodeConfig":
        allowed = {k: doc[k] for k in cls().__dict__ if k in doc}
        return cls(**allowed)

    def digest(self) -> str:
        return _digest(self.to_dict())


@dataclass
class GateResult:
    status: str = "passed"      # passed | warned | disqualified
    reason: str = ""
    evidence_ids: list[str] = field(default_factory=list)
    confidence: float = 0.0

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "reason": self.reason,
            "evidence_ids": list(self.evidence_ids),
            "confidence": self.confidence,
        }


@dataclass
class ScoreCard:
    candidate_id: str
    per_dimension: dict[str, float]
    competence: float
    context_adjustment: float
    gate: GateResult
    rationale: list[str]
    uncertainty: float

    @property
    def total(self) -> float:
        return min(1.0, max(0.0, self.competence + self.context_adjustment))

    def to_dict(self) -> dict:
        return {
            "candidate": self.candidate_id,
            "per_dimension": dict(sorted(self.per_dimension.items())),
            "competence": self.competence,
            "context_adjustment": self.context_adjustment,
            "total": self.total,
            "gate": self.gate.to_dict(),
            "rationale": list(self.rationale),
            "uncertainty": self.uncertainty,
        }


@dataclass
class MetaAction:
    kind: str                   # down_weight | request_evidence | escalate | revise_structure
    target: str                 # evidence id, node id, reason, or proposal id
    trigger: str
    factor: float | None = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "target": self.target,
                "trigger": self.trigger, "factor": self.factor}


@dataclass
class DecisionEpisode:
    id: str
    snapshot_version: int
    snapshot_hash: str
    mode: str
    stages: list[dict]
    options: list[dict]
    ranking: list[ScoreCard]
    oversight: list[MetaAction]
    proposals: list[UpdateProposal]
    audit: list[dict]
    conflicts: list[str]

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "snapshot_version": self.snapshot_version,
            "snapshot_hash": self.snapshot_hash,
            "mode": self.mode,
            "stages": self.stages,
            "options": self.options,
            "ranking": [card.to_dict() for card in self.ranking],
            "oversight": [a.to_dict() for a in self.oversight],
            "proposals": [p.to_dict() for p in self.proposals],
            "audit": self.audit,
            "conflicts": self.conflicts,
        }

    def serialize(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True,
                          separators=(",", ":"), ensure_ascii=True)

    def digest(self) -> str:
        return hashlib.sha256(self.serialize().encode()).hexdigest()


# -- graph-side helpers ---------------------------------------------------


def candidate_constructs(snapshot: MirrorGraph, candidate_id: str):
    """Construct nodes tagged to a candidate via the label suffix."""
    suffix = f":candidate_{candidate_id}"
    return [n for n in snapshot.nodes.values()
            if n.kind == "construct" and n.label.endswith(suffix)]


def priority_nodes(snapshot: MirrorGraph) -> dict[str, str]:
    """Label -> node id for values/objectives-layer priority nodes."""
    return {n.label: n.id for n in snapshot.nodes.values()
            if n.layer in PRIORITY_LAYERS}


def ethical_gate(snapshot: MirrorGraph | None, candidate_id: str,
                 threshold: float = 0.7) -> GateResult:
    """Check value-contradicting constructs tagged to the candidate.

    Max effective confidence >= threshold disqualifies; confidence in
    (0, threshold) warns; otherwise the candidate passes. With no graph
    (context_free mode) every candidate passes.
    """
    if snapshot is None:
        return GateResult()
    worst = GateResult()
    for node in sorted(candidate_constructs(snapshot, candidate_id), key=lambda n: n.id):
        contradicted_values = [
            nid for nid in snapshot.neighborhood(node.id, "contradiction", 1)
            if snapshot.nodes[nid].layer == "values"
        ]
        if not contradicted_values:
            continue
        confidence = snapshot.effective_confidence(node.id)
        if confidence > worst.confidence:
            value_labels = sorted(snapshot.nodes[v].label for v in contradicted_values)
            worst = GateResult(
                status="disqualified" if confidence >= threshold else "warned",
                reason=f"{node.label} contradicts {', '.join(value_labels)}",
                evidence_ids=[ev.id for ev in node.evidence],
                confidence=confidence,
            )
    if worst.confidence == 0.0:
        return GateResult()
    return worst


def detect_conflicts(snapshot: MirrorGraph, threshold: float = 0.4) -> list[str]:
    """Node ids whose supporting and contradicting evidence both aggregate
    (noisy-OR) to at least ``threshold``."""
    conflicted = []
    as_of = snapshot.clock
    for node in snapshot.nodes.values():
        sides = {"supports": 1.0, "contradicts": 1.0}
        for ev in node.evidence:
            if ev.polarity in sides and as_of is not None:
                sides[ev.polarity] *= 1.0 - ev.contribution(as_of, snapshot.decay_rate)
        if all(1.0 - rem >= threshold for rem in sides.values()):
            conflicted.append(node.id)
    return sorted(conflicted)


# -- scoring and ranking --------------------------------------------------


def score_candidate(snapshot: MirrorGraph | None, profile: CandidateProfile,
                    framework: CompetencyFramework, config: EpisodeConfig) -> ScoreCard:
    """Build a scorecard: weighted competence, bounded context adjustment,
    gate state, pros/cons rationale, and evidence-derived uncertainty."""
    known = framework.dimension_ids()
    unknown = set(profile.attributes) - known
    if unknown:
        raise UnknownDimension(f"{profile.id} references unknown dimensions {sorted(unknown)}")

    grouped = framework.by_group()
    present = [g for g in GROUPS if g in grouped]
    group_mass = sum(config.group_weights.get(g, 0.0) for g in present)
    per_dimension: dict[str, float] = {}
    competence = 0.0
    for group in present:
        gw = config.group_weights.get(group, 0.0) / group_mass if group_mass else 0.0
        for dim in grouped[group]:
            value = profile.attributes.get(dim.id, 0.0)
            per_dimension[dim.id] = value
            competence += gw * dim.weight * value

    use_graph = config.mode == "context_rich" and snapshot is not None
    adjustment = 0.0
    rationale: list[str] = []
    cited_nodes = []

    weighted = sorted(
        ((config.group_weights.get(d.group, 0.0) * d.weight * per_dimension[d.id], d)
         for d in framework.dimensions),
        key=lambda t: (-t[0], t[1].id),
    )
    for contrib, dim in weighted[:3]:
        if contrib > 0:
            rationale.append(
                f"pro: {dim.label} at {per_dimension[dim.id]:.2f} (dimension {dim.id})")
    for contrib, dim in weighted[::-1][:2]:
        if per_dimension[dim.id] < 0.5:
            rationale.append(
                f"con: weak {dim.label} at {per_dimension[dim.id]:.2f} (dimension {dim.id})")

    gate = GateResult()
    if use_graph:
        priorities = priority_nodes(snapshot)
        for tag in sorted(profile.tags):
            node_id = priorities.get(tag)
            if node_id is None:
                continue
            confidence = snapshot.effective_confidence(node_id)
            adjustment += config.adjustment_unit * confidence
            node = snapshot.nodes[node_id]
            cited_nodes.append(node)
            rationale.append(
                f"pro: aligns with priority '{tag}' "
                f"(confidence {confidence:.3f}, evidence {','.join(e.id for e in node.evidence)})")
        gate = ethical_gate(snapshot, profile.id, config.gate_threshold)
        if gate.status == "warned":
            penalty = config.adjustment_unit * gate.confidence
            adjustment -= penalty
            rationale.append(
                f"con: concern {gate.reason} (confidence {gate.confidence:.3f}, "
                f"evidence {','.join(gate.evidence_ids)})")
        elif gate.status == "disqualified":
            rationale.append(
                f"con: disqualified, {gate.reason} (confidence {gate.confidence:.3f}, "
                f"evidence {','.join(gate.evidence_ids)})")
        for node in sorted(candidate_constructs(snapshot, profile.id), key=lambda n: n.id):
            if node not in cited_nodes:
                cited_nodes.append(node)
        adjustment = min(config.adjustment_cap, max(-config.adjustment_cap, adjustment))

    uncertainties = [ev.uncertainty for node in cited_nodes for ev in node.evidence]
    uncertainty = sum(uncertainties) / len(uncertainties) if uncertainties else 0.0

    return ScoreCard(
        candidate_id=profile.id,
        per_dimension=per_dimension,
        competence=min(1.0, max(0.0, competence)),
        context_adjustment=adjustment,
        gate=gate,
        rationale=rationale,
        uncertainty=uncertainty,
    )


def rank_candidates(scorecards: list[ScoreCard],
                    config: EpisodeConfig | None = None) -> list[ScoreCard]:
    """Total-score ordering with the ethical gate applied lexicographically.

    Non-disqualified candidates sort by total descending, ties broken by
    id ascending; disqualified candidates always come last, in id order.
    """
    if not scorecards:
        raise EmptyPool("no scorecards to rank")
    passed = [c for c in scorecards if c.gate.status != "disqualified"]
    blocked = [c for c in scorecards if c.gate.status == "disqualified"]
    passed.sort(key=lambda c: (-c.total, c.candidate_id))
    blocked.sort(key=lambda c: c.candidate_id)
    return passed + blocked


def run_episode(snapshot: MirrorGraph, framework: CompetencyFramework,
                profiles: list[CandidateProfile], config: EpisodeConfig,
                signal_summary: dict | None = None) -> DecisionEpisode:
    """Execute the five-step protocol; a pure function of its inputs.

    Identical (snapshot, inputs, config, seed) always produce a
    byte-identical serialized episode.
    """
    from .graph import snapshot_hash  # local import to avoid cycle at module load

    snap_hash = snapshot_hash(snapshot)
    inputs_digest = _digest({
        "framework": framework.to_dict(),
        "profiles": [p.to_dict() for p in profiles],
        "signal_summary": signal_summary or {},
    })
    episode_id = "ep-" + _digest({
        "snapshot": snap_hash,
        "snapshot_version": snapshot.version,
        "inputs": inputs_digest,
        "config": config.digest(),
        "seed": config.seed,
    })[:16]

    graph_view = snapshot if config.mode == "context_rich" else None
    cards = [score_candidate(graph_view, p, framework, config) for p in profiles]
    ranking = rank_candidates(cards, config)
    conflicts = detect_conflicts(snapshot, config.conflict_threshold)

    options = [{"option": c.candidate_id, "total": c.total, "gate": c.gate.status}
               for c in ranking]
    options.append({"option": INACTION_OPTION, "total": config.no_hire_reserve,
                    "gate": "passed"})

    risk_notes = []
    for card in ranking:
        if card.gate.status in ("warned", "disqualified"):
            risk_notes.append({
                "candidate": card.candidate_id,
                "risk": card.gate.reason,
                "severity": card.gate.status,
                "evidence_ids": card.gate.evidence_ids,
            })
    for node_id in conflicts:
        risk_notes.append({
            "node": node_id,
            "risk": "conflicting evidence above threshold",
            "severity": "conflict",
            "evidence_ids": [ev.id for ev in snapshot.nodes[node_id].evidence],
        })

    stages = [
        {"step": 1, "name": STAGE_NAMES[0], "details": {
            "snapshot_version": snapshot.version,
            "snapshot_hash": snap_hash,
            "inputs_digest": inputs_digest,
            "clock": format_ts(snapshot.clock),
            "signal_summary": signal_summary or {},
        }},
        {"step": 2, "name": STAGE_NAMES[1], "details": {
            "priority_nodes": sorted(priority_nodes(snapshot))
            if config.mode == "context_rich" else [],
            "conflicted_nodes": conflicts,
        }},
        {"step": 3, "name": STAGE_NAMES[2], "details": {
            "mode": config.mode,
            "option_count": len(options),
        }},
        {"step": 4, "name": STAGE_NAMES[3], "details": {"risk_notes": risk_notes}},
        {"step": 5, "name": STAGE_NAMES[4], "details": {
            "recommended": ranking[0].candidate_id if ranking else INACTION_OPTION,
        }},
    ]

    audit = [{
        "inputs_digest": inputs_digest,
        "config_digest": config.digest(),
        "seed": config.seed,
        "overrides": [],
    }]

    return DecisionEpisode(
        id=episode_id,
        snapshot_version=snapshot.version,
        snapshot_hash=snap_hash,
        mode=config.mode,
        stages=stages,
        options=options,
        ranking=ranking,
        oversight=[],
        proposals=[],
        audit=audit,
        conflicts=conflicts,
    )


# -- metacognitive oversight and co-evolution -----------------------------


def metacognitive_review(snapshot: MirrorGraph, history: list[DecisionEpisode],
                         conflict_threshold: float = 0.4,
                         down_weight_factor: float = 0.5) -> list[MetaAction]:
    """Conflict monitoring over the current snapshot and episode history.

    Each currently conflicted node yields down-weights on its
    lower-mean-reliability evidence side plus an evidence request; a
    conflict persisting across the two most recent episodes escalates to
    the human.
    """
    actions: list[MetaAction] = []
    conflicts = detect_conflicts(snapshot, conflict_threshold)
    for node_id in conflicts:
        node = snapshot.nodes[node_id]
        sides: dict[str, list] = {"supports": [], "contradicts": []}
        for ev in node.evidence:
            if ev.polarity in sides:
                sides[ev.polarity].append(ev)
        means = {
            polarity: sum(e.reliability for e in evs) / len(evs)
            for polarity, evs in sides.items() if evs
        }
        weaker = min(means, key=lambda p: (means[p], p))
        trigger = f"evidence conflict on {node.label}"
        for ev in sides[weaker]:
            actions.append(MetaAction(kind="down_weight", target=ev.id,
                                      trigger=trigger, factor=down_weight_factor))
        actions.append(MetaAction(kind="request_evidence", target=node_id, trigger=trigger))
        recent = history[-2:]
        if len(recent) == 2 and all(node_id in ep.conflicts for ep in recent):
            actions.append(MetaAction(
                kind="escalate",
                target=f"persistent conflict on {node.label}",
                trigger=f"conflict in {len(recent)} consecutive episodes",
            ))
    return actions


def apply_meta_actions(graph: MirrorGraph, actions: list[MetaAction]) -> int:
    """Apply down-weight actions through the writer; returns count applied."""
    applied = 0
    for action in actions:
        if action.kind != "down_weight":
            continue
        found = graph.find_evidence(action.target)
        if found is None:
            continue
        _, ev = found
        graph.set_weight_multiplier(ev.id, ev.weight_multiplier * (action.factor or 0.5))
        applied += 1
    return applied


def coevolution_step(graph: MirrorGraph, config: EpisodeConfig,
                     proposals: dict[str, UpdateProposal],
                     decisions: list[tuple[str, str]]) -> tuple[list[UpdateProposal], EpisodeConfig]:
    """Apply human decisions to pending proposals.

    Approved proposals mutate the graph or config and bump the config
    version; rejected ones are archived. Nothing applies without a
    decision.
    """
    applied: list[UpdateProposal] = []
    for proposal_id, verdict in decisions:
        proposal = proposals.get(proposal_id)
        if proposal is None:
            raise UnknownProposal(f"unknown proposal {proposal_id!r}")
        if proposal.status != "pending":
            raise AlreadyDecided(f"proposal {proposal_id!r} already {proposal.status}")
        if verdict not in ("approve", "reject"):
            raise UnknownProposal(f"unknown verdict {verdict!r}")
        if verdict == "reject":
            proposal.status = "rejected"
            continue
        proposal.status = "approved"
        if proposal.kind == "raise_uncertainty":
            graph.bump_uncertainty(proposal.target, proposal.magnitude)
        elif proposal.kind == "adjust_threshold":
            setattr(config, proposal.target, proposal.magnitude)
        # regime_shift and add_evidence approvals are recorded; they change
        # posture, not graph content.
        config.version += 1
        applied.append(proposal)
    return applied, config
