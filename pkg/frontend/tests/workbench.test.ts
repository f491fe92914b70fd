import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { Workbench, type WorkbenchSlots } from "../src/workbench.js";
import { MockService, loadFixture } from "./mockService.js";
import type { EpisodeView, NodeView } from "../src/types.js";

const rich = loadFixture<EpisodeView>("episode_rich");
const breach = loadFixture<NodeView>("node_breach");

function makeSlots(): WorkbenchSlots {
  return {
    episode: { innerHTML: "" },
    audit: { innerHTML: "" },
    evidence: { innerHTML: "" },
    proposals: { innerHTML: "" },
    config: { innerHTML: "" },
    fit: { innerHTML: "" },
  };
}

describe("Workbench", () => {
  let service: MockService;
  let slots: WorkbenchSlots;
  let workbench: Workbench;

  beforeEach(() => {
    service = new MockService();
    slots = makeSlots();
    workbench = new Workbench(
      new ApiClient("http://localhost:8000", service.fetch),
      slots,
    );
  });

  describe("episode round-trip", () => {
    it("renders all ten rows with D first and G flagged disqualified last", async () => {
      const result = await workbench.loadEpisode(rich.id);
      expect(result.ok).toBe(true);
      const order = [...slots.episode.innerHTML.matchAll(
        /data-candidate="([^"]+)"/g)].map((m) => m[1]);
      expect(order).toEqual(["D", "C", "A", "B", "J", "F", "E", "H", "I", "G"]);
      expect(slots.episode.innerHTML).toContain("row-disqualified");
      expect(slots.audit.innerHTML).toContain("No overrides recorded.");
    });

    it("shows an inline not-found state for unknown episodes", async () => {
      const result = await workbench.loadEpisode("ep-nope");
      expect(result.ok).toBe(false);
      expect(slots.episode.innerHTML).toContain("not-found");
      expect(slots.episode.innerHTML).toContain("ep-nope");
    });

    it("shows a retry affordance on network failure", async () => {
      const broken = new Workbench(
        new ApiClient("http://localhost:8000", async () => {
          throw new Error("connection refused");
        }),
        slots,
      );
      const result = await broken.loadEpisode(rich.id);
      expect(result.ok).toBe(false);
      expect(slots.episode.innerHTML).toContain(`data-action="retry"`);
    });
  });

  describe("overrides", () => {
    it("submitting an override for D yields exactly one audit entry via the API", async () => {
      await workbench.loadEpisode(rich.id);
      const callsBefore = service.calls.length;
      const result = await workbench.submitOverride(
        "CEO", "hire:D", "prefer D's long-term fit", "2025-01-11T10:00:00+00:00");
      expect(result.ok).toBe(true);
      expect(service.calls.length).toBe(callsBefore + 1);
      const stored = service.episodes.get(rich.id)!.overrides;
      expect(stored).toHaveLength(1);
      expect(stored[0]!.choice).toBe("hire:D");
      expect(slots.audit.innerHTML.match(/override-entry/g)).toHaveLength(1);
      expect(slots.audit.innerHTML).toContain("CEO");
      expect(slots.audit.innerHTML).toContain("2025-01-11T10:00:00+00:00");
    });

    it("blocks empty rationales client-side without any API call", async () => {
      await workbench.loadEpisode(rich.id);
      const callsBefore = service.calls.length;
      const result = await workbench.submitOverride(
        "CEO", "hire:D", "   ", "2025-01-11T10:00:00+00:00");
      expect(result.ok).toBe(false);
      expect(result.error).toContain("rationale");
      expect(service.calls.length).toBe(callsBefore);
    });

    it("lists duplicate overrides chronologically", async () => {
      await workbench.loadEpisode(rich.id);
      await workbench.submitOverride("CEO", "hire:D", "first pass",
        "2025-01-11T10:00:00+00:00");
      await workbench.submitOverride("CEO", "hire:D", "second pass",
        "2025-01-11T11:00:00+00:00");
      const html = slots.audit.innerHTML;
      expect(html.match(/override-entry/g)).toHaveLength(2);
      expect(html.indexOf("first pass")).toBeLessThan(html.indexOf("second pass"));
    });
  });

  describe("evidence drill", () => {
    it("renders API-reported contributions and contradiction links", async () => {
      const result = await workbench.drillNode(breach.id);
      expect(result.ok).toBe(true);
      expect(slots.evidence.innerHTML).toContain("trust_breach:candidate_G");
      expect(slots.evidence.innerHTML).toContain(
        String(breach.contributions["e-000007"]));
    });

    it("surfaces missing nodes inline", async () => {
      const result = await workbench.drillNode("n-000000000000");
      expect(result.ok).toBe(false);
      expect(slots.evidence.innerHTML).toContain(`data-kind="missing_node"`);
    });
  });

  describe("proposal decisions", () => {
    beforeEach(() => {
      service.addProposal({
        id: "up-1",
        kind: "adjust_threshold",
        target: "gate_threshold",
        magnitude: 0.8,
        rationale: "sustained prediction error",
        status: "pending",
      });
    });

    it("approving a threshold proposal updates the displayed τ and version", async () => {
      await workbench.loadConfig();
      expect(slots.config.innerHTML).toContain(`class="gate-threshold">0.7<`);
      const result = await workbench.decideProposal("up-1", "approve");
      expect(result.ok).toBe(true);
      expect(slots.config.innerHTML).toContain(`class="gate-threshold">0.8<`);
      expect(slots.config.innerHTML).toContain(`class="config-version">2<`);
      expect(slots.proposals.innerHTML).toContain("proposal-approved");
    });

    it("rejecting archives the proposal with status rejected", async () => {
      await workbench.decideProposal("up-1", "reject");
      expect(slots.proposals.innerHTML).toContain("proposal-rejected");
    });

    it("deciding twice surfaces AlreadyDecided inline", async () => {
      await workbench.decideProposal("up-1", "approve");
      const result = await workbench.decideProposal("up-1", "approve");
      expect(result.ok).toBe(false);
      expect(result.error).toBe("already_decided");
      expect(slots.proposals.innerHTML).toContain(`data-kind="already_decided"`);
    });
  });

  describe("comparison and fit", () => {
    it("renders the two modes side by side", async () => {
      const result = await workbench.loadComparison("context_rich", "context_free");
      expect(result.ok).toBe(true);
      expect(slots.episode.innerHTML).toContain(`data-mode="context_rich"`);
      expect(slots.episode.innerHTML).toContain(`data-mode="context_free"`);
    });

    it("shows the composite fit verbatim", async () => {
      const result = await workbench.loadFit("CEO", "context_rich");
      expect(result.ok).toBe(true);
      expect(slots.fit.innerHTML).toContain(`class="composite">0.75<`);
    });

    it("surfaces unknown evaluators inline", async () => {
      const result = await workbench.loadFit("nobody", "context_rich");
      expect(result.ok).toBe(false);
      expect(slots.fit.innerHTML).toContain(`data-kind="unknown_evaluator"`);
    });
  });
});
