// Workbench controller: wires the API client to the renderers.
//
// The controller owns a set of host slots (anything with an innerHTML
// property, so it runs against real DOM elements or plain objects in
// tests). The ranking display is read-only; human contest happens only
// through explicit overrides and proposal decisions, each of which is
// exactly one API call.

import { ApiClient, ApiRequestError } from "./api.js";
import {
  renderAuditPanel,
  renderComparison,
  renderConfigPanel,
  renderEpisodeTable,
  renderEvidenceDrill,
  renderFitPanel,
  renderInlineError,
  renderNetworkError,
  renderNotFound,
  renderProposals,
} from "./render.js";
import type { EpisodeView } from "./types.js";

/** Minimal render target; a real Element satisfies this. */
export interface HtmlSlot {
  innerHTML: string;
}

export interface WorkbenchSlots {
  episode: HtmlSlot;
  audit: HtmlSlot;
  evidence: HtmlSlot;
  proposals: HtmlSlot;
  config: HtmlSlot;
  fit: HtmlSlot;
}

export interface ActionResult {
  ok: boolean;
  error?: string;
}

export class Workbench {
  private readonly api: ApiClient;
  private readonly slots: WorkbenchSlots;
  private currentEpisode: EpisodeView | null = null;

  constructor(api: ApiClient, slots: WorkbenchSlots) {
    this.api = api;
    this.slots = slots;
  }

  get episode(): EpisodeView | null {
    return this.currentEpisode;
  }

  /** Load one episode and render its table plus audit panel. */
  async loadEpisode(episodeId: string): Promise<ActionResult> {
    try {
      const episode = await this.api.getEpisode(episodeId);
      this.currentEpisode = episode;
      this.slots.episode.innerHTML = renderEpisodeTable(episode);
      this.slots.audit.innerHTML = renderAuditPanel(episode.overrides);
      return { ok: true };
    } catch (err) {
      if (err instanceof ApiRequestError && err.status === 404) {
        this.slots.episode.innerHTML = renderNotFound(episodeId);
        return { ok: false, error: err.kind };
      }
      this.slots.episode.innerHTML = renderNetworkError(String(err));
      return { ok: false, error: "network" };
    }
  }

  /** Render two modes side by side for divergence inspection. */
  async loadComparison(
    leftMode: string,
    rightMode: string,
  ): Promise<ActionResult> {
    try {
      const left = await this.api.runEpisode(leftMode);
      const right = await this.api.runEpisode(rightMode);
      this.slots.episode.innerHTML = renderComparison(left, right);
      return { ok: true };
    } catch (err) {
      this.slots.episode.innerHTML = renderNetworkError(String(err));
      return { ok: false, error: "network" };
    }
  }

  /** Drill into one node's evidence and contradiction links. */
  async drillNode(nodeId: string): Promise<ActionResult> {
    try {
      const node = await this.api.getNode(nodeId);
      this.slots.evidence.innerHTML = renderEvidenceDrill(node);
      return { ok: true };
    } catch (err) {
      if (err instanceof ApiRequestError) {
        this.slots.evidence.innerHTML = renderInlineError(err.kind, err.message);
        return { ok: false, error: err.kind };
      }
      throw err;
    }
  }

  /**
   * Contest the machine ranking for the loaded episode.
   * Empty rationales are blocked client-side: no API call is made.
   */
  async submitOverride(
    actor: string,
    choice: string,
    rationale: string,
    timestamp: string,
  ): Promise<ActionResult> {
    if (this.currentEpisode === null) {
      return { ok: false, error: "no episode loaded" };
    }
    if (rationale.trim() === "") {
      return { ok: false, error: "rationale must not be empty" };
    }
    try {
      const result = await this.api.submitOverride(this.currentEpisode.id, {
        actor,
        choice,
        rationale,
        timestamp,
      });
      this.slots.audit.innerHTML = renderAuditPanel(result.overrides);
      return { ok: true };
    } catch (err) {
      if (err instanceof ApiRequestError) {
        this.slots.audit.innerHTML = renderInlineError(err.kind, err.message);
        return { ok: false, error: err.kind };
      }
      throw err;
    }
  }

  /** Refresh the pending-proposal queue. */
  async loadProposals(): Promise<ActionResult> {
    try {
      const result = await this.api.listProposals();
      this.slots.proposals.innerHTML = renderProposals(result.proposals);
      return { ok: true };
    } catch (err) {
      this.slots.proposals.innerHTML = renderNetworkError(String(err));
      return { ok: false, error: "network" };
    }
  }

  /**
   * Decide one escalated proposal. On approval the service may change
   * engine parameters, so the config panel re-renders from the response.
   */
  async decideProposal(
    proposalId: string,
    verdict: "approve" | "reject",
  ): Promise<ActionResult> {
    try {
      const result = await this.api.decideProposal(proposalId, verdict);
      this.slots.config.innerHTML = renderConfigPanel(result.config);
      await this.loadProposals();
      return { ok: true };
    } catch (err) {
      if (err instanceof ApiRequestError) {
        this.slots.proposals.innerHTML = renderInlineError(err.kind, err.message);
        return { ok: false, error: err.kind };
      }
      throw err;
    }
  }

  /** Refresh the config panel (τ, thresholds, version). */
  async loadConfig(): Promise<ActionResult> {
    const config = await this.api.getConfig();
    this.slots.config.innerHTML = renderConfigPanel(config);
    return { ok: true };
  }

  /** Refresh the displayed person-machine fit for one mode. */
  async loadFit(human: string, machine: string): Promise<ActionResult> {
    try {
      const fit = await this.api.getFit(human, machine);
      this.slots.fit.innerHTML = renderFitPanel(fit);
      return { ok: true };
    } catch (err) {
      if (err instanceof ApiRequestError) {
        this.slots.fit.innerHTML = renderInlineError(err.kind, err.message);
        return { ok: false, error: err.kind };
      }
      throw err;
    }
  }
}
