/** Wire types mirroring the planning service's JSON payloads. */

export interface Telemetry {
  labels_pushed: number;
  labels_popped: number;
  pruned_feasibility: number;
  pruned_optimality: number;
  pruned_bucket: number;
  goal_updates?: number;
  expanded?: number;
}

export interface Solution {
  solver: string;
  nodes: number[];
  total_time: number;
  total_log_risk: number;
  survival: number;
  telemetry: Telemetry;
  config: Record<string, unknown>;
  partial?: boolean;
}

export interface Problem {
  error: string;
  t_min?: number;
  budget?: number;
  revision?: string;
  detail?: unknown;
}

export type SolveResult =
  | { ok: true; solution: Solution }
  | { ok: false; problem: Problem; status: number };

export interface SweepEntryDoc {
  budget: number;
  status: string;
  solution?: Solution;
  t_min?: number;
}

export interface GridPayload {
  id: string;
  width: number;
  height: number;
  cell_size: number;
  risk: number[];
  terrain: (string | null)[] | null;
}

export interface GraphSummary {
  id: string;
  nodes: number;
  edges: number;
  grid: { width: number; height: number; cell_size: number } | null;
}

export interface SolverOptions {
  mode?: "bucketed" | "exact";
  target_buckets?: number;
  early_exit?: boolean;
  node_expansion_limit?: number;
}

export interface PatchCell {
  node: number;
  risk: number;
}

export interface ReplanOutcome {
  ok: boolean;
  revision?: string;
  solution?: Solution;
  problem?: Problem;
}
