"""HTTP surface over a Store.

Request and response bodies are JSON; errors carry a machine-readable
``kind`` plus a human message. The app holds one Store; handlers read
immutable snapshots, while writes go through the store's single writer.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .errors import MirrordeskError
from .fitmetrics import fit_score
from .store import Store


class EpisodeRequest(BaseModel):
    mode: str = "context_rich"
    seed: int | None = None


class OverrideRequest(BaseModel):
    actor: str
    choice: str
    rationale: str
    timestamp: str = "1970-01-01T00:00:00+00:00"


class DecisionRequest(BaseModel):
    verdict: str  # approve | reject


def create_app(store: Store, evaluations: dict | None = None) -> FastAPI:
    """Build the app; ``evaluations`` maps evaluator name -> Evaluation
    for the fit endpoint's human side."""
    app = FastAPI(title="mirrordesk")
    app.state.store = store
    app.state.evaluations = evaluations or {}

    @app.exception_handler(MirrordeskError)
    async def _domain_error(request: Request, exc: MirrordeskError):
        status = 404 if exc.kind in (
            "missing_node", "unknown_episode", "unknown_proposal",
            "unknown_target") else 400
        return JSONResponse(status_code=status,
                            content={"error": exc.kind, "message": str(exc)})

    @app.post("/episodes")
    def run_episode(req: EpisodeRequest):
        episode = store.run_episode(mode=req.mode, seed=req.seed)
        return store.episode_view(episode.id)

    @app.get("/episodes/{episode_id}")
    def get_episode(episode_id: str):
        return store.episode_view(episode_id)

    @app.post("/episodes/{episode_id}/overrides")
    def post_override(episode_id: str, req: OverrideRequest):
        index = store.record_override(episode_id, req.actor, req.choice,
                                      req.rationale, req.timestamp)
        return {"log_index": index, "overrides": store.overrides_for(episode_id)}

    @app.get("/graph/nodes/{node_id}")
    def get_node(node_id: str):
        node = store.graph._get_node(node_id)
        as_of = store.graph.clock
        payload = node.to_dict()
        payload["effective_confidence"] = store.graph.effective_confidence(node_id)
        payload["contributions"] = {
            ev.id: ev.contribution(as_of, store.graph.decay_rate) if as_of else 0.0
            for ev in node.evidence
        }
        payload["contradictions"] = sorted(
            store.graph.neighborhood(node_id, "contradiction", 1))
        return payload

    @app.get("/proposals")
    def list_proposals():
        return {"proposals": [p.to_dict() for p in store.proposals.values()]}

    @app.post("/proposals/{proposal_id}/decision")
    def decide(proposal_id: str, req: DecisionRequest):
        proposal = store.decide_proposal(proposal_id, req.verdict)
        return {"proposal": proposal.to_dict(),
                "config": store.config.to_dict()}

    @app.get("/config")
    def get_config():
        return store.config.to_dict()

    @app.get("/fit")
    def fit(human: str = "CEO", machine: str = "context_rich"):
        human_eval = app.state.evaluations.get(human)
        if human_eval is None:
            return JSONResponse(status_code=404, content={
                "error": "unknown_evaluator",
                "message": f"no evaluation on file for {human!r}"})
        episode = store.run_episode(mode=machine)
        machine_eval = episode_evaluation(episode)
        return fit_score(human_eval, machine_eval).to_dict()

    return app


def episode_evaluation(episode):
    """Project an episode into an Evaluation (disqualified = excluded)."""
    from .fitmetrics import Evaluation

    ranked = [c.candidate_id for c in episode.ranking
              if c.gate.status != "disqualified"]
    excluded = {c.candidate_id for c in episode.ranking
                if c.gate.status == "disqualified"}
    return Evaluation(evaluator=episode.mode, ranked=ranked, excluded=excluded)
