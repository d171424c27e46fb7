import { describe, expect, it } from "vitest";

import { MAX_OVERLAYS, ViewState } from "../../src/state.js";
import type { Solution } from "../../src/types.js";

function solution(survival: number): Solution {
  return {
    solver: "apulse", nodes: [0, 1, 2], total_time: 10, total_log_risk: 0.5,
    survival,
    telemetry: {
      labels_pushed: 1, labels_popped: 1, pruned_feasibility: 0,
      pruned_optimality: 0, pruned_bucket: 0,
    },
    config: {},
  };
}

describe("sequence guard (last write wins)", () => {
  it("accepts only the latest issued request per kind", () => {
    const s = new ViewState();
    const a = s.nextSeq("solve");
    const b = s.nextSeq("solve");
    expect(s.acceptResponse("solve", a)).toBe(false); // stale
    expect(s.acceptResponse("solve", b)).toBe(true);
  });

  it("tracks kinds independently", () => {
    const s = new ViewState();
    const solveSeq = s.nextSeq("solve");
    s.nextSeq("sweep");
    expect(s.acceptResponse("solve", solveSeq)).toBe(true);
  });
});

describe("budget slider bounds", () => {
  it("is [t_min, 2*t_min]", () => {
    const s = new ViewState();
    expect(s.sliderBounds()).toBeNull();
    s.setMinTime(100);
    expect(s.sliderBounds()).toEqual({ min: 100, max: 200 });
    expect(s.budget).toBe(120); // default 1.2x
  });

  it("clamps a stale budget into the new bounds", () => {
    const s = new ViewState();
    s.setMinTime(100);
    s.budget = 190;
    s.setMinTime(50); // new pair with smaller t_min
    expect(s.budget).toBeLessThanOrEqual(100);
  });
});

describe("overlays", () => {
  it("keeps previous overlays for comparison, capped", () => {
    const s = new ViewState();
    for (let i = 0; i < MAX_OVERLAYS + 2; i++) s.addOverlay(100 + i, solution(0.5));
    expect(s.overlays.length).toBe(MAX_OVERLAYS);
    expect(s.overlays[MAX_OVERLAYS - 1].budget).toBe(100 + MAX_OVERLAYS + 1);
  });

  it("assigns distinct colors to consecutive overlays", () => {
    const s = new ViewState();
    const a = s.addOverlay(1, solution(0.1));
    const b = s.addOverlay(2, solution(0.2));
    expect(a.color).not.toBe(b.color);
  });

  it("resets on endpoint change", () => {
    const s = new ViewState();
    s.addOverlay(1, solution(0.1));
    s.setEndpoints(3, 4);
    expect(s.overlays).toEqual([]);
    expect(s.tMin).toBeNull();
  });
});

describe("patch editing and revisions", () => {
  it("toggles cells and drains sorted", () => {
    const s = new ViewState();
    s.togglePatchCell(5, 1.0);
    s.togglePatchCell(2, 1.0);
    s.togglePatchCell(5, 1.0); // toggle off
    s.togglePatchCell(9, 0.8);
    expect(s.takePatch()).toEqual([
      { node: 2, risk: 1.0 },
      { node: 9, risk: 0.8 },
    ]);
    expect(s.pendingPatch.size).toBe(0);
  });

  it("undo walks back to the base graph", () => {
    const s = new ViewState();
    s.baseGraphId = "demo";
    expect(s.activeGraphId).toBe("demo");
    s.pushRevision("demo-rev1");
    s.pushRevision("demo-rev2");
    expect(s.activeGraphId).toBe("demo-rev2");
    expect(s.undoRevision()).toBe("demo-rev1");
    expect(s.undoRevision()).toBe("demo");
    expect(s.undoRevision()).toBe("demo"); // idempotent at the bottom
  });
});
