// Wire types exactly as the server emits them.

export interface MetricsRecord {
  group_disparity: number;
  prediction_time: number;
  roc_auc_train: number;
  roc_auc_holdout: number;
}

export interface CandidateRecord {
  seq: number;
  id: string;
  phase: "structure" | "refinement";
  structure: Record<string, string>;
  assignment: Record<string, Record<string, unknown>>;
  metrics: MetricsRecord;
}

export interface SnapshotResponse {
  run_id: string;
  status: "running" | "completed";
  since: number;
  last_seq: number;
  candidates: CandidateRecord[];
}

export interface NumericDomain {
  lo: number;
  hi: number;
  scale: "linear" | "log";
}

export interface Axis {
  axis_id: string;
  kind: "identifier" | "categorical" | "numeric";
  parent: [string, string] | null;
  domain: string[] | NumericDomain;
  x: number;
}

export interface PolylineRecord {
  id: string;
  vertices: [number, number][];
  color_index: number;
}

export interface LayoutResponse {
  axes: Axis[];
  polylines: PolylineRecord[];
  ticks: Record<string, [string, number][]>;
  legend: Record<string, number>;
}

export interface LeaderboardRow {
  rank: number;
  id: string;
  roc_auc_holdout: number;
  group_disparity: number;
  prediction_time: number;
  structure: Record<string, string>;
  color_index: number;
}

export interface RunSummary {
  run_id: string;
  status: string;
  n_candidates: number;
  n_total: number;
  seed: number;
}

export interface CompletionSummary {
  run_id: string;
  status: string;
  n_candidates: number;
  best_id: string | null;
  best_roc_auc_holdout: number | null;
}

export type ExpansionPair = [slot: string, component: string];
