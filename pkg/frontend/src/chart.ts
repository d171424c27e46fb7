/** Survival-vs-budget trade-off chart (canvas, one series). */

import type { SweepPoint } from "./state.js";

export interface ChartLayout {
  width: number;
  height: number;
  padLeft: number;
  padRight: number;
  padTop: number;
  padBottom: number;
}

export interface ChartPoint {
  x: number;
  y: number;
  budget: number;
  survival: number | null;
}

export const DEFAULT_LAYOUT: ChartLayout = {
  width: 360, height: 180, padLeft: 44, padRight: 10, padTop: 10, padBottom: 26,
};

/** Pixel positions for sweep points; gaps keep x but carry survival null. */
export function layoutPoints(points: SweepPoint[], layout: ChartLayout): ChartPoint[] {
  if (points.length === 0) return [];
  const budgets = points.map((p) => p.budget);
  const lo = Math.min(...budgets);
  const hi = Math.max(...budgets);
  const span = hi - lo || 1;
  const plotW = layout.width - layout.padLeft - layout.padRight;
  const plotH = layout.height - layout.padTop - layout.padBottom;
  return points.map((p) => ({
    x: layout.padLeft + ((p.budget - lo) / span) * plotW,
    y: p.survival === null
      ? layout.height - layout.padBottom
      : layout.padTop + (1 - p.survival) * plotH,
    budget: p.budget,
    survival: p.survival,
  }));
}

/** Index of the chart point within radius of (x, y), or null. */
export function hitTest(points: ChartPoint[], x: number, y: number,
                        radius = 8): number | null {
  let best: number | null = null;
  let bestD = radius * radius;
  points.forEach((p, i) => {
    if (p.survival === null) return;
    const d = (p.x - x) ** 2 + (p.y - y) ** 2;
    if (d <= bestD) {
      bestD = d;
      best = i;
    }
  });
  return best;
}

export function drawChart(ctx: CanvasRenderingContext2D, points: SweepPoint[],
                          layout: ChartLayout = DEFAULT_LAYOUT): ChartPoint[] {
  const placed = layoutPoints(points, layout);
  ctx.clearRect(0, 0, layout.width, layout.height);
  ctx.fillStyle = "#101722";
  ctx.fillRect(0, 0, layout.width, layout.height);

  // axes
  ctx.strokeStyle = "#3a4a60";
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(layout.padLeft, layout.padTop);
  ctx.lineTo(layout.padLeft, layout.height - layout.padBottom);
  ctx.lineTo(layout.width - layout.padRight, layout.height - layout.padBottom);
  ctx.stroke();
  ctx.fillStyle = "#8aa0b8";
  ctx.font = "10px sans-serif";
  ctx.fillText("survival %", 4, layout.padTop + 8);
  ctx.fillText("budget (s)", layout.width - 64, layout.height - 8);
  for (const frac of [0, 0.5, 1]) {
    const y = layout.padTop + (1 - frac) * (layout.height - layout.padTop - layout.padBottom);
    ctx.fillText(`${Math.round(frac * 100)}`, layout.padLeft - 22, y + 3);
  }

  // polyline with gaps at failed budgets
  ctx.strokeStyle = "#2ec4b6";
  ctx.lineWidth = 2;
  ctx.beginPath();
  let pen = false;
  for (const p of placed) {
    if (p.survival === null) {
      pen = false;
      continue;
    }
    if (pen) ctx.lineTo(p.x, p.y);
    else ctx.moveTo(p.x, p.y);
    pen = true;
  }
  ctx.stroke();

  for (const p of placed) {
    if (p.survival === null) continue;
    ctx.fillStyle = "#2ec4b6";
    ctx.beginPath();
    ctx.arc(p.x, p.y, 3.5, 0, Math.PI * 2);
    ctx.fill();
  }
  return placed;
}
