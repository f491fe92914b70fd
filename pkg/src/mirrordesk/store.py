"""Event-sourced persistence binding the engine together.

All state changes flow through an append-only, checksum-chained JSONL
log owned by a single writer. The live graph and config are a pure fold
over that log, so replaying it reconstructs the exact same snapshot hash.
Episode reports are stored content-addressed by digest; overrides are
annotations in the log and never edit the episode they reference.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass
from pathlib import Path

from .episode import DecisionEpisode, EpisodeConfig, coevolution_step, run_episode
from .errors import (
    ChecksumMismatch,
    GapInLog,
    UnknownEpisode,
)
from .graph import MirrorGraph, snapshot_hash
from .ingest import (
    CandidateProfile,
    CompetencyFramework,
    ingest_events,
    parse_event,
    seed_persona,
)
from .synapse import UpdateProposal

LOG_KINDS = ("context_event", "proposal_decision", "override", "config_change")


def _canonical(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def entry_checksum(index: int, kind: str, body: dict, previous: str) -> str:
    blob = _canonical({"index": index, "kind": kind, "body": body, "previous": previous})
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class LogEntry:
    index: int
    kind: str
    body: dict
    checksum: str

    def to_dict(self) -> dict:
        return {"index": self.index, "kind": self.kind, "body": self.body,
                "checksum": self.checksum}


def verify_log(entries: list[LogEntry]) -> None:
    """Check the gapless index and checksum chain end to end."""
    previous = ""
    for expected, entry in enumerate(entries):
        if entry.index != expected:
            raise GapInLog(f"expected index {expected}, found {entry.index}")
        if entry_checksum(entry.index, entry.kind, entry.body, previous) != entry.checksum:
            raise ChecksumMismatch(entry.index)
        previous = entry.checksum


def replay_log(entries: list[LogEntry],
               base_config: EpisodeConfig | None = None) -> tuple[MirrorGraph, EpisodeConfig]:
    """Deterministically reconstruct graph and config state from a log."""
    verify_log(entries)
    graph = MirrorGraph()
    config = base_config or EpisodeConfig()
    proposals: dict[str, UpdateProposal] = {}
    for entry in entries:
        body = entry.body
        if entry.kind == "context_event":
            if body.get("seed_persona"):
                seed_persona(graph, body["seed_persona"])
            else:
                ingest_events(graph, [parse_event(body["event"])], strict=False)
        elif entry.kind == "proposal_decision":
            proposal = UpdateProposal.from_dict(body["proposal"])
            proposal.status = "pending"
            proposals[proposal.id] = proposal
            coevolution_step(graph, config, proposals, [(proposal.id, body["verdict"])])
        elif entry.kind == "config_change":
            config = EpisodeConfig.from_dict({**config.to_dict(), **body["config"]})
        # overrides are annotations; they do not mutate graph or config
    return graph, config


class Store:
    """Single-writer persistence root under a data directory."""

    def __init__(self, data_dir, framework: CompetencyFramework | None = None,
                 profiles: list[CandidateProfile] | None = None,
                 config: EpisodeConfig | None = None):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.episodes_dir = self.data_dir / "episodes"
        self.episodes_dir.mkdir(exist_ok=True)
        self.log_path = self.data_dir / "log.jsonl"
        self.framework = framework
        self.profiles = profiles or []
        self.config = config or EpisodeConfig()
        self._lock = threading.Lock()
        self._entries = self._load_entries()
        self.graph, self.config = replay_log(self._entries, self.config)
        self.proposals: dict[str, UpdateProposal] = {}
        self._episodes: dict[str, DecisionEpisode] = {}
        self._episode_order: list[str] = []
        self._overrides: dict[str, list[dict]] = {}
        for entry in self._entries:
            if entry.kind == "override":
                self._overrides.setdefault(entry.body["episode_id"], []).append(entry.body)
            elif entry.kind == "proposal_decision":
                proposal = UpdateProposal.from_dict(entry.body["proposal"])
                proposal.status = ("approved" if entry.body["verdict"] == "approve"
                                   else "rejected")
                self.proposals[proposal.id] = proposal

    # -- log plumbing -----------------------------------------------------

    def _load_entries(self) -> list[LogEntry]:
        if not self.log_path.exists():
            return []
        entries = []
        for line in self.log_path.read_text().splitlines():
            if line.strip():
                doc = json.loads(line)
                entries.append(LogEntry(index=doc["index"], kind=doc["kind"],
                                        body=doc["body"], checksum=doc["checksum"]))
        verify_log(entries)
        return entries

    def append(self, kind: str, body: dict) -> LogEntry:
        """Append one hash-chained entry and persist it."""
        if kind not in LOG_KINDS:
            raise ValueError(f"unknown log kind {kind!r}")
        with self._lock:
            previous = self._entries[-1].checksum if self._entries else ""
            index = len(self._entries)
            entry = LogEntry(index=index, kind=kind, body=body,
                             checksum=entry_checksum(index, kind, body, previous))
            with self.log_path.open("a") as fh:
                fh.write(_canonical(entry.to_dict()) + "\n")
            self._entries.append(entry)
            return entry

    @property
    def entries(self) -> list[LogEntry]:
        return list(self._entries)

    def current_snapshot_hash(self) -> str:
        return snapshot_hash(self.graph)

    # -- writes -----------------------------------------------------------

    def seed_persona(self, document: dict) -> list[str]:
        created = seed_persona(self.graph, document)
        self.append("context_event", {"seed_persona": document})
        return created

    def ingest_event(self, event_doc: dict, strict: bool = True):
        parsed = parse_event(event_doc)
        report = ingest_events(self.graph, [parsed], strict=strict)
        self.append("context_event", {"event": event_doc})
        return report

    def ingest_event_docs(self, docs: list[dict], strict: bool = False):
        reports = [self.ingest_event(doc, strict=strict) for doc in docs]
        total = reports[0].__class__()
        for r in reports:
            total.nodes_created += r.nodes_created
            total.evidence_attached += r.evidence_attached
            total.rejected += r.rejected
        return total

    def register_proposals(self, proposals: list[UpdateProposal]) -> None:
        for p in proposals:
            self.proposals.setdefault(p.id, p)

    def decide_proposal(self, proposal_id: str, verdict: str) -> UpdateProposal:
        from .errors import UnknownProposal
        proposal = self.proposals.get(proposal_id)
        if proposal is None:
            raise UnknownProposal(f"unknown proposal {proposal_id!r}")
        pending_snapshot = proposal.to_dict()
        coevolution_step(self.graph, self.config, self.proposals,
                         [(proposal_id, verdict)])
        self.append("proposal_decision",
                    {"proposal": pending_snapshot, "verdict": verdict})
        return proposal

    def change_config(self, changes: dict) -> EpisodeConfig:
        merged = {**self.config.to_dict(), **changes}
        merged["version"] = self.config.version + 1
        self.config = EpisodeConfig.from_dict(merged)
        self.append("config_change", {"config": changes | {"version": merged["version"]}})
        return self.config

    # -- episodes ---------------------------------------------------------

    def run_episode(self, mode: str | None = None, seed: int | None = None,
                    signal_summary: dict | None = None) -> DecisionEpisode:
        if self.framework is None or not self.profiles:
            raise UnknownEpisode("store has no framework/profiles loaded")
        cfg_doc = self.config.to_dict()
        if mode is not None:
            cfg_doc["mode"] = mode
        if seed is not None:
            cfg_doc["seed"] = seed
        config = EpisodeConfig.from_dict(cfg_doc)
        snapshot = self.graph.snapshot()
        episode = run_episode(snapshot, self.framework, self.profiles, config,
                              signal_summary=signal_summary)
        self._episodes[episode.id] = episode
        if episode.id not in self._episode_order:
            self._episode_order.append(episode.id)
        path = self.episodes_dir / f"{episode.digest()}.json"
        path.write_text(episode.serialize())
        return episode

    def get_episode(self, episode_id: str) -> DecisionEpisode:
        episode = self._episodes.get(episode_id)
        if episode is None:
            raise UnknownEpisode(f"unknown episode {episode_id!r}")
        return episode

    def latest_episode(self, mode: str | None = None) -> DecisionEpisode:
        for eid in reversed(self._episode_order):
            episode = self._episodes[eid]
            if mode is None or episode.mode == mode:
                return episode
        raise UnknownEpisode("no episode recorded")

    def record_override(self, episode_id: str, actor: str, choice: str,
                        rationale: str, timestamp: str) -> int:
        """Append an override annotation; the episode report is untouched."""
        self.get_episode(episode_id)
        body = {
            "episode_id": episode_id,
            "actor": actor,
            "choice": choice,
            "rationale": rationale,
            "timestamp": timestamp,
        }
        entry = self.append("override", body)
        self._overrides.setdefault(episode_id, []).append(body)
        return entry.index

    def overrides_for(self, episode_id: str) -> list[dict]:
        return list(self._overrides.get(episode_id, []))

    def episode_view(self, episode_id: str) -> dict:
        episode = self.get_episode(episode_id)
        view = episode.to_dict()
        view["overrides"] = self.overrides_for(episode_id)
        view["digest"] = episode.digest()
        return view
