/** Payload shapes served by the results API. The client never recomputes
 * quality numbers; everything displayed originates from these documents. */

export interface Quality {
  support: number;
  confidence: number;
  language_fit: number | null;
  determinism: number;
  coverage: number;
  normalized_support: number;
  aggregate: number;
}

export interface NetTransition {
  id: number;
  label: string | null;
  src_pattern?: number;
}

export interface NetJson {
  places: number[];
  transitions: NetTransition[];
  /** arcs as [source, target]; transition endpoints are "t<id>" strings */
  arcs: [number | string, number | string][];
  initial: number[];
  finals: number[][];
}

export interface InstanceJson {
  trace: string;
  landmarks: number[];
  count: number;
}

export interface Pattern {
  tree: string;
  net: NetJson;
  quality: Quality;
  instances: InstanceJson[];
  activity_totals: Record<string, number>;
  activity_fitting: Record<string, number>;
}

export interface RunSummary {
  run_id: string;
  log_digest: string;
  patterns: number;
}

export interface RunDocument {
  run_id: string;
  log_digest: string;
  patterns: Pattern[];
  attributes: string[];
}

export interface Weights {
  support: number;
  confidence: number;
  language_fit: number;
  determinism: number;
  coverage: number;
  c?: number | null;
}

export interface RerankResponse {
  run_id: string;
  patterns: { tree: string; quality: Quality; net: NetJson }[];
}

export interface OverlayResponse {
  pattern: string;
  attribute: string;
  histograms: Record<string, Record<string, number>>;
}

export interface Group {
  alphabet: string[];
  head: string;
  members: string[];
}

export interface GroupsResponse {
  run_id: string;
  strategy: "alphabet" | "ranking";
  groups: Group[];
}
