/** Thin typed client for the planning service.
 *
 * Every number shown in the UI comes from these responses; the client never
 * recomputes path metrics locally.
 */

import type {
  GraphSummary, GridPayload, PatchCell, Problem, ReplanOutcome,
  SolveResult, SolverOptions, SweepEntryDoc,
} from "./types.js";

export class ApiClient {
  constructor(readonly base: string = "") {}

  private async post(path: string, body: unknown): Promise<Response> {
    return fetch(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async listGraphs(): Promise<GraphSummary[]> {
    const res = await fetch(this.base + "/api/graphs");
    if (!res.ok) throw new Error(`graph listing failed: ${res.status}`);
    return (await res.json()).graphs as GraphSummary[];
  }

  /** Grid rendering payload, or null when the graph is not grid-shaped. */
  async getGrid(graphId: string): Promise<GridPayload | null> {
    const res = await fetch(this.base + `/api/graphs/${encodeURIComponent(graphId)}/grid`);
    if (res.status === 422) return null;
    if (!res.ok) throw new Error(`grid fetch failed: ${res.status}`);
    return (await res.json()) as GridPayload;
  }

  async getGraphDoc(graphId: string): Promise<Record<string, unknown>> {
    const res = await fetch(this.base + `/api/graphs/${encodeURIComponent(graphId)}`);
    if (!res.ok) throw new Error(`graph fetch failed: ${res.status}`);
    return (await res.json()) as Record<string, unknown>;
  }

  async solve(graphId: string, start: number, goal: number, budget: number,
              config?: SolverOptions): Promise<SolveResult> {
    const res = await this.post("/api/solve", {
      graph_id: graphId, start, goal, budget,
      ...(config ? { config } : {}),
    });
    if (res.ok) return { ok: true, solution: await res.json() };
    return { ok: false, problem: (await res.json()) as Problem, status: res.status };
  }

  /** Minimum travel time for a pair, learned from the service's 422 payload. */
  async probeMinTime(graphId: string, start: number, goal: number): Promise<number> {
    const result = await this.solve(graphId, start, goal, 0);
    if (result.ok) return result.solution.total_time; // start == goal
    if (result.problem.error === "no_feasible_path" && result.problem.t_min !== undefined) {
      return result.problem.t_min;
    }
    throw new Error(`cannot determine minimum time: ${result.problem.error}`);
  }

  async sweep(graphId: string, start: number, goal: number, budgets: number[],
              config?: SolverOptions): Promise<SweepEntryDoc[]> {
    const res = await this.post("/api/sweep", {
      graph_id: graphId, start, goal, budgets,
      ...(config ? { config } : {}),
    });
    if (!res.ok) {
      const problem = (await res.json()) as Problem;
      throw new Error(`sweep failed: ${problem.error}`);
    }
    return (await res.json()).results as SweepEntryDoc[];
  }

  async replan(graphId: string, patch: PatchCell[], start: number, goal: number,
               budget: number, config?: SolverOptions): Promise<ReplanOutcome> {
    const res = await this.post("/api/replan", {
      graph_id: graphId, patch, start, goal, budget,
      ...(config ? { config } : {}),
    });
    const body = await res.json();
    if (res.ok) {
      return { ok: true, revision: body.revision, solution: body.solution };
    }
    const problem = body as Problem;
    return { ok: false, problem, revision: problem.revision };
  }
}
