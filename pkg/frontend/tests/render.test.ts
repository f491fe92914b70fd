import { describe, expect, it } from "vitest";

import {
  apiNumber,
  escapeHtml,
  renderAuditPanel,
  renderComparison,
  renderConfigPanel,
  renderEpisodeTable,
  renderEvidenceDrill,
  renderFitPanel,
} from "../src/render.js";
import type { EpisodeView, NodeView, OverrideRecord } from "../src/types.js";
import { loadFixture } from "./mockService.js";

const rich = loadFixture<EpisodeView>("episode_rich");
const free = loadFixture<EpisodeView>("episode_free");
const breach = loadFixture<NodeView>("node_breach");

function candidateCells(html: string): string[] {
  return [...html.matchAll(/data-candidate="([^"]+)"/g)].map((m) => m[1]!);
}

describe("renderEpisodeTable", () => {
  it("renders ten rows in exact API order with D first and G flagged last", () => {
    const html = renderEpisodeTable(rich);
    const order = candidateCells(html);
    expect(order).toHaveLength(10);
    expect(order).toEqual(rich.ranking.map((r) => r.candidate));
    expect(order[0]).toBe("D");
    expect(order[9]).toBe("G");
    const rows = html.split("<tr").slice(2); // skip table open + header row
    expect(rows[9]).toContain("row-disqualified");
    expect(rows[9]).toContain("gate-disqualified");
    expect(rows.slice(0, 9).join("")).not.toContain("row-disqualified");
  });

  it("renders the ablated episode with G first and no gate flags", () => {
    const html = renderEpisodeTable(free);
    const order = candidateCells(html);
    expect(order[0]).toBe("G");
    expect(html).not.toContain("disqualified");
  });

  it("shows totals and uncertainties byte-for-byte", () => {
    const html = renderEpisodeTable(rich);
    for (const row of rich.ranking) {
      expect(html).toContain(`<td class="total">${String(row.total)}</td>`);
      expect(html).toContain(String(row.uncertainty));
    }
  });

  it("renders every rationale line escaped", () => {
    const html = renderEpisodeTable(rich);
    for (const row of rich.ranking) {
      for (const line of row.rationale) {
        expect(html).toContain(escapeHtml(line));
      }
    }
  });
});

describe("renderEvidenceDrill", () => {
  it("shows contributions equal to the API-reported values", () => {
    const html = renderEvidenceDrill(breach);
    for (const [id, value] of Object.entries(breach.contributions)) {
      expect(html).toContain(`data-evidence="${id}"`);
      expect(html).toContain(`<td class="contribution">${String(value)}</td>`);
    }
    expect(html).toContain(String(breach.effective_confidence));
  });

  it("links every contradiction target", () => {
    const html = renderEvidenceDrill(breach);
    for (const id of breach.contradictions) {
      expect(html).toContain(`href="#node/${id}"`);
    }
  });
});

describe("renderAuditPanel", () => {
  const override: OverrideRecord = {
    episode_id: rich.id,
    actor: "CEO",
    choice: "hire:D",
    rationale: "prefer <D> & long-term bet",
    timestamp: "2025-01-11T10:00:00+00:00",
  };

  it("renders an empty state without entries", () => {
    expect(renderAuditPanel([])).toContain("No overrides recorded.");
  });

  it("lists duplicates chronologically and escapes content", () => {
    const html = renderAuditPanel([override, override]);
    expect(html.match(/override-entry/g)).toHaveLength(2);
    expect(html).toContain("prefer &lt;D&gt; &amp; long-term bet");
  });
});

describe("config and fit panels", () => {
  it("shows τ and version from the API config", () => {
    const html = renderConfigPanel(loadFixture("config"));
    expect(html).toContain(`<dd class="gate-threshold">0.7</dd>`);
    expect(html).toContain(`<dd class="config-version">1</dd>`);
  });

  it("shows the fit components verbatim", () => {
    const html = renderFitPanel(loadFixture("fit"));
    expect(html).toContain(`<span class="tau">1</span>`);
    expect(html).toContain(`<span class="composite">0.75</span>`);
  });
});

describe("renderComparison", () => {
  it("places both episodes side by side", () => {
    const html = renderComparison(rich, free);
    expect(html).toContain("pane-left");
    expect(html).toContain("pane-right");
    expect(html).toContain(`data-mode="context_rich"`);
    expect(html).toContain(`data-mode="context_free"`);
  });
});

describe("apiNumber", () => {
  it("does not reformat API floats", () => {
    expect(apiNumber(0.9863076369064072)).toBe("0.9863076369064072");
    expect(apiNumber(0.88)).toBe("0.88");
    expect(apiNumber(1.0)).toBe("1");
  });
});
