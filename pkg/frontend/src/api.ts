// Thin typed client over the mirrordesk service HTTP API.
//
// All workbench state changes flow through exactly one call here; the
// client performs no retries or caching so every interaction maps to a
// single audit-visible request.

import type {
  ApiErrorBody,
  EngineConfig,
  EpisodeView,
  FitReport,
  NodeView,
  OverrideRecord,
  ProposalRecord,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

/** Raised for non-2xx responses; carries the service's error kind. */
export class ApiRequestError extends Error {
  readonly status: number;
  readonly kind: string;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message || `request failed with status ${status}`);
    this.name = "ApiRequestError";
    this.status = status;
    this.kind = body.error || "unknown";
  }
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl ?? (globalThis.fetch as unknown as FetchLike);
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: Parameters<FetchLike>[1] = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const payload = (await response.json()) as unknown;
    if (!response.ok) {
      throw new ApiRequestError(response.status, payload as ApiErrorBody);
    }
    return payload as T;
  }

  runEpisode(mode: string, seed?: number): Promise<EpisodeView> {
    return this.request("POST", "/episodes", { mode, seed: seed ?? null });
  }

  getEpisode(episodeId: string): Promise<EpisodeView> {
    return this.request("GET", `/episodes/${encodeURIComponent(episodeId)}`);
  }

  submitOverride(
    episodeId: string,
    override: Omit<OverrideRecord, "episode_id">,
  ): Promise<{ log_index: number; overrides: OverrideRecord[] }> {
    return this.request(
      "POST",
      `/episodes/${encodeURIComponent(episodeId)}/overrides`,
      override,
    );
  }

  getNode(nodeId: string): Promise<NodeView> {
    return this.request("GET", `/graph/nodes/${encodeURIComponent(nodeId)}`);
  }

  listProposals(): Promise<{ proposals: ProposalRecord[] }> {
    return this.request("GET", "/proposals");
  }

  decideProposal(
    proposalId: string,
    verdict: "approve" | "reject",
  ): Promise<{ proposal: ProposalRecord; config: EngineConfig }> {
    return this.request(
      "POST",
      `/proposals/${encodeURIComponent(proposalId)}/decision`,
      { verdict },
    );
  }

  getConfig(): Promise<EngineConfig> {
    return this.request("GET", "/config");
  }

  getFit(human: string, machine: string): Promise<FitReport> {
    const query = new URLSearchParams({ human, machine });
    return this.request("GET", `/fit?${query.toString()}`);
  }
}
