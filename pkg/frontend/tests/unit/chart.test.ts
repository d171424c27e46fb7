import { describe, expect, it } from "vitest";

import { DEFAULT_LAYOUT, hitTest, layoutPoints } from "../../src/chart.js";

const layout = DEFAULT_LAYOUT;

describe("layoutPoints", () => {
  it("maps budgets onto the x axis in order", () => {
    const placed = layoutPoints([
      { budget: 100, survival: 0.1 },
      { budget: 150, survival: 0.2 },
      { budget: 200, survival: 0.3 },
    ], layout);
    expect(placed[0].x).toBe(layout.padLeft);
    expect(placed[2].x).toBe(layout.width - layout.padRight);
    expect(placed[1].x).toBeGreaterThan(placed[0].x);
    expect(placed[1].x).toBeLessThan(placed[2].x);
  });

  it("puts higher survival higher on the canvas", () => {
    const placed = layoutPoints([
      { budget: 1, survival: 0.1 },
      { budget: 2, survival: 0.9 },
    ], layout);
    expect(placed[1].y).toBeLessThan(placed[0].y);
  });

  it("keeps gaps as survival null", () => {
    const placed = layoutPoints([
      { budget: 1, survival: null },
      { budget: 2, survival: 0.5 },
    ], layout);
    expect(placed[0].survival).toBeNull();
  });

  it("handles a single point", () => {
    const placed = layoutPoints([{ budget: 5, survival: 0.5 }], layout);
    expect(placed.length).toBe(1);
    expect(Number.isFinite(placed[0].x)).toBe(true);
  });
});

describe("hitTest", () => {
  const placed = layoutPoints([
    { budget: 100, survival: 0.2 },
    { budget: 200, survival: null },
    { budget: 300, survival: 0.8 },
  ], layout);

  it("finds the nearest point within the radius", () => {
    const target = placed[2];
    expect(hitTest(placed, target.x + 3, target.y - 3)).toBe(2);
  });

  it("ignores gap points and far clicks", () => {
    const gap = placed[1];
    expect(hitTest(placed, gap.x, gap.y)).not.toBe(1);
    expect(hitTest(placed, -100, -100)).toBeNull();
  });
});
