// Typed mirrors of the mirrordesk service API payloads.
//
// These interfaces follow the JSON emitted by the HTTP service exactly;
// the workbench never recomputes any of these values client-side.

/** Outcome of the ethical gate for one candidate. */
export type GateStatus = "passed" | "warned" | "disqualified";

export interface GateInfo {
  status: GateStatus;
  reason: string;
  evidence_ids: string[];
  confidence: number;
}

/** One ranked candidate as scored by the engine. */
export interface ScoreRow {
  candidate: string;
  per_dimension: Record<string, number>;
  competence: number;
  context_adjustment: number;
  total: number;
  gate: GateInfo;
  rationale: string[];
  uncertainty: number;
}

export interface StageRecord {
  step: number;
  name: string;
  details: Record<string, unknown>;
}

export interface OptionEntry {
  option: string;
  total: number;
  gate: string;
}

/** Human override annotation appended to the audit log. */
export interface OverrideRecord {
  episode_id: string;
  actor: string;
  choice: string;
  rationale: string;
  timestamp: string;
}

export type ProposalStatus = "pending" | "approved" | "rejected";

export interface ProposalRecord {
  id: string;
  kind: string;
  target: string;
  magnitude: number;
  rationale: string;
  status: ProposalStatus;
}

export interface MetaActionRecord {
  kind: string;
  target: string;
  trigger: string;
  factor: number | null;
}

/** Full episode view returned by GET /episodes/{id}. */
export interface EpisodeView {
  id: string;
  snapshot_version: number;
  snapshot_hash: string;
  mode: string;
  stages: StageRecord[];
  options: OptionEntry[];
  ranking: ScoreRow[];
  oversight: MetaActionRecord[];
  proposals: ProposalRecord[];
  audit: Record<string, unknown>[];
  conflicts: string[];
  overrides: OverrideRecord[];
  digest: string;
}

export interface EvidenceRecord {
  id: string;
  source: string;
  observed_at: string;
  reliability: number;
  uncertainty: number;
  weight_multiplier: number;
  polarity: string;
  episode_tag: string;
  payload: string;
}

/** Node drill-down returned by GET /graph/nodes/{id}. */
export interface NodeView {
  id: string;
  layer: string;
  kind: string;
  label: string;
  evidence: EvidenceRecord[];
  effective_confidence: number;
  contributions: Record<string, number>;
  contradictions: string[];
}

export interface EngineConfig {
  mode: string;
  group_weights: Record<string, number>;
  gate_threshold: number;
  conflict_threshold: number;
  adjustment_unit: number;
  adjustment_cap: number;
  down_weight_factor: number;
  no_hire_reserve: number;
  seed: number;
  version: number;
}

/** Person-machine fit report returned by GET /fit. */
export interface FitReport {
  human: string;
  machine: string;
  tau: number;
  topk: number;
  exclusion: number;
  composite: number;
  weights: number[];
  shared_candidates: number;
}

/** Error body returned by the service for domain errors. */
export interface ApiErrorBody {
  error: string;
  message: string;
}
