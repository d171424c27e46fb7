/** End-to-end round trip against a live service on the bundled demo grid.
 *
 * Spawns `apulse serve --demo` and exercises the exact client functions the
 * UI uses: grid fetch, minimum-time probe, solve (< 2 s), sweep monotonicity,
 * and a replan that paints certain risk across the current path.
 */

import { type ChildProcess, spawn } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../../src/api.js";

const PORT = 8300 + Math.floor(Math.random() * 500);
const BASE = `http://127.0.0.1:${PORT}`;
const GRAPH = "demo-50x50";

let server: ChildProcess;
const api = new ApiClient(BASE);

async function waitForService(timeoutMs = 90000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastErr: unknown = null;
  while (Date.now() < deadline) {
    try {
      const res = await fetch(`${BASE}/api/graphs`);
      if (res.ok) return;
    } catch (err) {
      lastErr = err;
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error(`service did not come up on ${BASE}: ${lastErr}`);
}

beforeAll(async () => {
  server = spawn("python3", ["-m", "apulse.cli", "serve", "--demo",
                             "--port", String(PORT)],
                 { stdio: "ignore" });
  await waitForService();
  // warm the solver path once so the timed interaction below measures the
  // steady state a user sees, not first-query JIT/cache effects
  const tMin = await api.probeMinTime(GRAPH, 0, 2499);
  await api.solve(GRAPH, 0, 2499, tMin * 1.1);
}, 100000);

afterAll(() => {
  server?.kill("SIGTERM");
});

describe("demo grid round trip", () => {
  it("serves the 50x50 grid payload", async () => {
    const grid = await api.getGrid(GRAPH);
    expect(grid).not.toBeNull();
    expect(grid!.width).toBe(50);
    expect(grid!.height).toBe(50);
    expect(grid!.risk.length).toBe(2500);
    expect(Math.max(...grid!.risk)).toBeLessThanOrEqual(1);
  });

  it("completes a solve interaction in under 2 seconds", async () => {
    const tMin = await api.probeMinTime(GRAPH, 0, 2499);
    expect(tMin).toBeGreaterThan(0);
    const started = performance.now();
    const result = await api.solve(GRAPH, 0, 2499, tMin * 1.4);
    const elapsed = performance.now() - started;
    expect(elapsed).toBeLessThan(2000);
    expect(result.ok).toBe(true);
    if (result.ok) {
      expect(result.solution.nodes[0]).toBe(0);
      expect(result.solution.nodes.at(-1)).toBe(2499);
      expect(result.solution.survival).toBeGreaterThan(0);
      expect(result.solution.total_time).toBeLessThanOrEqual(tMin * 1.4 * (1 + 1e-9));
    }
  });

  it("reports t_min through the infeasible-budget response", async () => {
    const result = await api.solve(GRAPH, 0, 2499, 1);
    expect(result.ok).toBe(false);
    if (!result.ok) {
      expect(result.status).toBe(422);
      expect(result.problem.error).toBe("no_feasible_path");
      expect(result.problem.t_min).toBeGreaterThan(1);
    }
  });

  it("sweep survival is monotone non-decreasing in the budget", async () => {
    const tMin = await api.probeMinTime(GRAPH, 0, 2499);
    const budgets = Array.from({ length: 8 }, (_, i) => tMin * (1 + i * 0.14));
    const results = await api.sweep(GRAPH, 0, 2499, budgets,
                                    { mode: "exact" });
    expect(results.length).toBe(8);
    expect(results.map((r) => r.budget)).toEqual([...budgets].sort((a, b) => a - b));
    const survivals = results
      .filter((r) => r.status === "ok" && r.solution)
      .map((r) => r.solution!.survival);
    expect(survivals.length).toBeGreaterThan(0);
    for (let i = 1; i < survivals.length; i++) {
      expect(survivals[i]).toBeGreaterThanOrEqual(survivals[i - 1] - 1e-12);
    }
  });

  it("painting certain risk across the path reroutes or reports infeasibility", async () => {
    const tMin = await api.probeMinTime(GRAPH, 0, 2499);
    const budget = tMin * 1.4;
    const base = await api.solve(GRAPH, 0, 2499, budget);
    expect(base.ok).toBe(true);
    if (!base.ok) return;
    const interior = base.solution.nodes.slice(1, -1);
    const painted = interior.filter((_, i) => i % 2 === 0); // a broad barrier
    const outcome = await api.replan(
      GRAPH, painted.map((node) => ({ node, risk: 1.0 })), 0, 2499, budget);
    if (outcome.ok) {
      expect(outcome.revision).toBeTruthy();
      const rerouted = outcome.solution!.nodes;
      for (const node of painted) {
        expect(rerouted).not.toContain(node);
      }
      expect(rerouted).not.toEqual(base.solution.nodes);
    } else {
      expect(["no_feasible_path", "unreachable_goal"]).toContain(
        outcome.problem!.error);
    }
    // the base graph must be untouched: same query, same answer
    const again = await api.solve(GRAPH, 0, 2499, budget);
    expect(again.ok).toBe(true);
    if (again.ok) {
      expect(again.solution.nodes).toEqual(base.solution.nodes);
    }
  });

  it("replanned revisions are queryable and undoable by id", async () => {
    const tMin = await api.probeMinTime(GRAPH, 0, 2499);
    const budget = tMin * 1.3;
    const base = await api.solve(GRAPH, 0, 2499, budget);
    expect(base.ok).toBe(true);
    if (!base.ok) return;
    const victim = base.solution.nodes[Math.floor(base.solution.nodes.length / 2)];
    const grid = await api.getGrid(GRAPH);
    const originalRisk = grid!.risk[victim];
    const patched = await api.replan(GRAPH, [{ node: victim, risk: 1.0 }],
                                     0, 2499, budget);
    expect(patched.revision).toBeTruthy();
    // revert on top of the revision restores the original optimum
    const reverted = await api.replan(patched.revision!,
                                      [{ node: victim, risk: originalRisk }],
                                      0, 2499, budget);
    expect(reverted.ok).toBe(true);
    if (reverted.ok) {
      expect(reverted.solution!.nodes).toEqual(base.solution.nodes);
      expect(reverted.solution!.total_log_risk).toBe(base.solution.total_log_risk);
    }
  });
});
