// Pure HTML-string renderers for the deliberation workbench.
//
// Renderers are deliberately dumb: rows appear in the exact order the
// API returned them and every number is printed with String(value) so
// the display is byte-for-byte the API value. Rankings are never
// recomputed or re-sorted client-side.

import type {
  EngineConfig,
  EpisodeView,
  FitReport,
  NodeView,
  OverrideRecord,
  ProposalRecord,
  ScoreRow,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/** Exact textual form of an API number, no rounding or reformatting. */
export function apiNumber(value: number): string {
  return String(value);
}

function gateBadge(row: ScoreRow): string {
  const status = row.gate.status;
  const label =
    status === "disqualified"
      ? `disqualified — ${escapeHtml(row.gate.reason)}`
      : status;
  return `<span class="badge gate-${status}">${label}</span>`;
}

function rationaleList(row: ScoreRow): string {
  const items = row.rationale
    .map((line) => `<li>${escapeHtml(line)}</li>`)
    .join("");
  return `<ul class="rationale">${items}</ul>`;
}

/** Ranked recommendations table; one row per ranking entry, API order. */
export function renderEpisodeTable(episode: EpisodeView): string {
  const rows = episode.ranking
    .map((row, index) => {
      const flagged = row.gate.status === "disqualified" ? " row-disqualified" : "";
      return (
        `<tr class="candidate-row${flagged}" data-candidate="${escapeHtml(row.candidate)}">` +
        `<td class="rank">${index + 1}</td>` +
        `<td class="candidate">${escapeHtml(row.candidate)}</td>` +
        `<td class="total">${apiNumber(row.total)}</td>` +
        `<td class="gate">${gateBadge(row)}</td>` +
        `<td class="uncertainty"><span class="badge">${apiNumber(row.uncertainty)}</span></td>` +
        `<td class="pros-cons">${rationaleList(row)}</td>` +
        `</tr>`
      );
    })
    .join("");
  return (
    `<table class="episode-table" data-episode="${escapeHtml(episode.id)}" data-mode="${escapeHtml(episode.mode)}">` +
    `<thead><tr><th>rank</th><th>candidate</th><th>total</th><th>gate</th>` +
    `<th>uncertainty</th><th>rationale</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

/** Audit panel: overrides in chronological (API) order, never collapsed. */
export function renderAuditPanel(overrides: OverrideRecord[]): string {
  if (overrides.length === 0) {
    return `<section class="audit-panel"><p class="empty">No overrides recorded.</p></section>`;
  }
  const entries = overrides
    .map(
      (o) =>
        `<li class="override-entry">` +
        `<span class="actor">${escapeHtml(o.actor)}</span> chose ` +
        `<span class="choice">${escapeHtml(o.choice)}</span> at ` +
        `<time>${escapeHtml(o.timestamp)}</time>: ` +
        `<span class="rationale">${escapeHtml(o.rationale)}</span></li>`,
    )
    .join("");
  return `<section class="audit-panel"><ol>${entries}</ol></section>`;
}

/** Evidence drill-down for one graph node. */
export function renderEvidenceDrill(node: NodeView): string {
  const rows = node.evidence
    .map((ev) => {
      const contribution = node.contributions[ev.id];
      return (
        `<tr class="evidence-row" data-evidence="${escapeHtml(ev.id)}">` +
        `<td>${escapeHtml(ev.source)}</td>` +
        `<td>${escapeHtml(ev.observed_at)}</td>` +
        `<td>${apiNumber(ev.reliability)}</td>` +
        `<td>${apiNumber(ev.uncertainty)}</td>` +
        `<td class="contribution">${contribution === undefined ? "" : apiNumber(contribution)}</td>` +
        `</tr>`
      );
    })
    .join("");
  const links = node.contradictions
    .map(
      (id) =>
        `<a class="contradiction-link" href="#node/${escapeHtml(id)}">${escapeHtml(id)}</a>`,
    )
    .join(" ");
  return (
    `<section class="evidence-drill" data-node="${escapeHtml(node.id)}">` +
    `<h3>${escapeHtml(node.label)}</h3>` +
    `<p>effective confidence: <span class="confidence">${apiNumber(node.effective_confidence)}</span></p>` +
    `<table><thead><tr><th>source</th><th>observed</th><th>reliability</th>` +
    `<th>uncertainty</th><th>contribution</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>` +
    `<p class="contradictions">contradicts: ${links || "none"}</p>` +
    `</section>`
  );
}

/** Pending/archived proposals list with decision affordances. */
export function renderProposals(proposals: ProposalRecord[]): string {
  const entries = proposals
    .map(
      (p) =>
        `<li class="proposal proposal-${p.status}" data-proposal="${escapeHtml(p.id)}">` +
        `<span class="kind">${escapeHtml(p.kind)}</span> → ` +
        `<span class="target">${escapeHtml(p.target)}</span> ` +
        `(${apiNumber(p.magnitude)}) — ${escapeHtml(p.rationale)} ` +
        `<span class="status">${p.status}</span></li>`,
    )
    .join("");
  return `<section class="proposal-queue"><ul>${entries}</ul></section>`;
}

/** Config panel; τ is the ethical-gate threshold. */
export function renderConfigPanel(config: EngineConfig): string {
  return (
    `<section class="config-panel">` +
    `<dl>` +
    `<dt>τ (gate threshold)</dt><dd class="gate-threshold">${apiNumber(config.gate_threshold)}</dd>` +
    `<dt>conflict threshold</dt><dd>${apiNumber(config.conflict_threshold)}</dd>` +
    `<dt>config version</dt><dd class="config-version">${apiNumber(config.version)}</dd>` +
    `</dl></section>`
  );
}

/** Person-machine fit summary. */
export function renderFitPanel(fit: FitReport): string {
  return (
    `<section class="fit-panel" data-machine="${escapeHtml(fit.machine)}">` +
    `<p>${escapeHtml(fit.human)} vs ${escapeHtml(fit.machine)}: ` +
    `τ <span class="tau">${apiNumber(fit.tau)}</span>, ` +
    `top-k <span class="topk">${apiNumber(fit.topk)}</span>, ` +
    `exclusion <span class="exclusion">${apiNumber(fit.exclusion)}</span>, ` +
    `composite <span class="composite">${apiNumber(fit.composite)}</span></p>` +
    `</section>`
  );
}

/** Side-by-side comparison pane for two episodes. */
export function renderComparison(left: EpisodeView, right: EpisodeView): string {
  return (
    `<section class="comparison-pane">` +
    `<div class="pane pane-left">${renderEpisodeTable(left)}</div>` +
    `<div class="pane pane-right">${renderEpisodeTable(right)}</div>` +
    `</section>`
  );
}

/** Inline not-found state (no crash, no retry needed). */
export function renderNotFound(episodeId: string): string {
  return (
    `<section class="error-state not-found">` +
    `<p>No episode found for <code>${escapeHtml(episodeId)}</code>.</p>` +
    `</section>`
  );
}

/** Inline network-failure state with an explicit retry affordance. */
export function renderNetworkError(message: string): string {
  return (
    `<section class="error-state network-error">` +
    `<p>${escapeHtml(message)}</p>` +
    `<button class="retry" data-action="retry">Retry</button>` +
    `</section>`
  );
}

/** Inline error for domain failures surfaced verbatim from the API. */
export function renderInlineError(kind: string, message: string): string {
  return (
    `<section class="error-state inline-error" data-kind="${escapeHtml(kind)}">` +
    `<p>${escapeHtml(message)}</p>` +
    `</section>`
  );
}
