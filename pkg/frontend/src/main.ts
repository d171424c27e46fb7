/** DOM wiring for the what-if console. */

import { ApiClient } from "./api.js";
import { drawChart, hitTest, type ChartPoint, DEFAULT_LAYOUT } from "./chart.js";
import { debounce } from "./debounce.js";
import { fitCellPx, nodeAtPixel, type GridGeometry } from "./grid.js";
import {
  drawEndpoint, drawHeatmap, drawOverlay, drawPendingPatch, drawScatter,
} from "./heatmap.js";
import { ViewState } from "./state.js";
import type { GridPayload } from "./types.js";

const api = new ApiClient("");
const state = new ViewState();

const el = {
  graphSelect: document.getElementById("graph-select") as HTMLSelectElement,
  map: document.getElementById("map") as HTMLCanvasElement,
  chart: document.getElementById("chart") as HTMLCanvasElement,
  budget: document.getElementById("budget") as HTMLInputElement,
  budgetReadout: document.getElementById("budget-readout") as HTMLSpanElement,
  pairLabel: document.getElementById("pair-label") as HTMLSpanElement,
  status: document.getElementById("status") as HTMLDivElement,
  legend: document.getElementById("legend") as HTMLUListElement,
  sweepBtn: document.getElementById("sweep-btn") as HTMLButtonElement,
  sweepSteps: document.getElementById("sweep-steps") as HTMLInputElement,
  modePick: document.getElementById("mode-pick") as HTMLInputElement,
  modePaint: document.getElementById("mode-paint") as HTMLInputElement,
  paintRisk: document.getElementById("paint-risk") as HTMLInputElement,
  applyPatch: document.getElementById("apply-patch") as HTMLButtonElement,
  undoPatch: document.getElementById("undo-patch") as HTMLButtonElement,
  revisionLabel: document.getElementById("revision-label") as HTMLSpanElement,
};

let grid: GridPayload | null = null;
let geom: GridGeometry | null = null;
let chartPoints: ChartPoint[] = [];
let pickingGoal = false;

function status(text: string, kind: "info" | "warn" | "error" = "info"): void {
  el.status.textContent = text;
  el.status.dataset.kind = kind;
}

function repaint(): void {
  const ctx = el.map.getContext("2d")!;
  if (!grid || !geom) return;
  drawHeatmap(ctx, geom, grid.risk);
  drawPendingPatch(ctx, geom, state.pendingPatch);
  state.overlays.forEach((overlay, i) => {
    drawOverlay(ctx, geom!, overlay, i < state.overlays.length - 1);
  });
  if (state.start !== null) drawEndpoint(ctx, geom, state.start, "S");
  if (state.goal !== null) drawEndpoint(ctx, geom, state.goal, "G");
  renderLegend();
}

function renderLegend(): void {
  el.legend.innerHTML = "";
  for (const overlay of [...state.overlays].reverse()) {
    const li = document.createElement("li");
    const sol = overlay.solution;
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = overlay.color;
    li.appendChild(swatch);
    li.appendChild(document.createTextNode(
      ` B=${overlay.budget.toFixed(0)}s  t=${sol.total_time.toFixed(0)}s  ` +
      `survival ${(sol.survival * 100).toFixed(2)}%` +
      (sol.partial ? " (partial)" : ""),
    ));
    el.legend.appendChild(li);
  }
}

function syncBudgetControls(): void {
  const bounds = state.sliderBounds();
  if (!bounds || state.budget === null) {
    el.budget.disabled = true;
    el.budgetReadout.textContent = "pick start and goal";
    return;
  }
  el.budget.disabled = false;
  el.budget.min = String(bounds.min);
  el.budget.max = String(bounds.max);
  el.budget.step = String(Math.max(1, (bounds.max - bounds.min) / 200));
  el.budget.value = String(state.budget);
  el.budgetReadout.textContent =
    `${state.budget.toFixed(0)} s (min ${bounds.min.toFixed(0)} s)`;
}

async function refreshGrid(): Promise<void> {
  const seq = state.nextSeq("grid");
  const payload = await api.getGrid(state.activeGraphId);
  if (!state.acceptResponse("grid", seq)) return;
  if (payload === null) {
    grid = null;
    geom = null;
    status("graph is not grid-shaped: scatter view only, interactions disabled", "warn");
    const doc = await api.getGraphDoc(state.activeGraphId);
    const nodes = (doc.nodes as Array<{ x: number; y: number; risk: number }>) ?? [];
    drawScatter(el.map.getContext("2d")!, el.map.width, el.map.height, nodes);
    return;
  }
  grid = payload;
  geom = {
    width: payload.width,
    height: payload.height,
    cellPx: fitCellPx(el.map.width, el.map.height, payload.width, payload.height),
  };
  repaint();
}

const requestSolve = debounce(async () => {
  if (state.start === null || state.goal === null || state.budget === null) return;
  const seq = state.nextSeq("solve");
  const budget = state.budget;
  const result = await api.solve(state.activeGraphId, state.start, state.goal, budget);
  if (!state.acceptResponse("solve", seq)) return; // stale: a newer drag won
  if (result.ok) {
    state.addOverlay(budget, result.solution);
    status(result.solution.partial
      ? "partial result: expansion limit hit, showing best incumbent"
      : `survival ${(result.solution.survival * 100).toFixed(2)}% using ` +
        `${result.solution.total_time.toFixed(0)}s of ${budget.toFixed(0)}s`,
      result.solution.partial ? "warn" : "info");
    repaint();
  } else if (result.problem.error === "no_feasible_path") {
    status(`budget below minimum time (${result.problem.t_min?.toFixed(0)}s)`, "warn");
  } else {
    status(`solve failed: ${result.problem.error}`, "error");
  }
}, 150);

async function onPairChosen(): Promise<void> {
  el.pairLabel.textContent = `${state.start ?? "?"} -> ${state.goal ?? "?"}`;
  if (state.start === null || state.goal === null) return;
  try {
    const tMin = await api.probeMinTime(state.activeGraphId, state.start, state.goal);
    state.setMinTime(tMin);
    syncBudgetControls();
    requestSolve();
  } catch (err) {
    status(String(err), "error");
  }
}

function onMapClick(ev: MouseEvent): void {
  if (!geom) return;
  const rect = el.map.getBoundingClientRect();
  const node = nodeAtPixel(geom, ev.clientX - rect.left, ev.clientY - rect.top);
  if (node === null) return;
  if (el.modePaint.checked) {
    state.togglePatchCell(node, Number(el.paintRisk.value));
    repaint();
    return;
  }
  if (!pickingGoal) {
    state.setEndpoints(node, null);
    pickingGoal = true;
    status("start set: now click the goal cell");
  } else {
    state.setEndpoints(state.start, node);
    pickingGoal = false;
    void onPairChosen();
  }
  syncBudgetControls();
  repaint();
}

async function onSweep(): Promise<void> {
  const bounds = state.sliderBounds();
  if (!bounds || state.start === null || state.goal === null) {
    status("pick start and goal before sweeping", "warn");
    return;
  }
  const steps = Math.max(2, Number(el.sweepSteps.value) || 8);
  const budgets = Array.from({ length: steps }, (_, i) =>
    bounds.min + ((bounds.max - bounds.min) * i) / (steps - 1));
  const seq = state.nextSeq("sweep");
  status(`sweeping ${steps} budgets...`);
  const results = await api.sweep(state.activeGraphId, state.start, state.goal, budgets);
  if (!state.acceptResponse("sweep", seq)) return;
  state.setSweep(results.map((r) => ({
    budget: r.budget,
    survival: r.status === "ok" && r.solution ? r.solution.survival : null,
  })));
  chartPoints = drawChart(el.chart.getContext("2d")!, state.sweepPoints, DEFAULT_LAYOUT);
  status("sweep done: click a chart point to load that budget's path");
}

function onChartClick(ev: MouseEvent): void {
  const rect = el.chart.getBoundingClientRect();
  const idx = hitTest(chartPoints, ev.clientX - rect.left, ev.clientY - rect.top);
  if (idx === null) return;
  state.budget = chartPoints[idx].budget;
  syncBudgetControls();
  requestSolve();
}

async function onApplyPatch(): Promise<void> {
  if (state.pendingPatch.size === 0) {
    status("no cells painted", "warn");
    return;
  }
  if (state.start === null || state.goal === null || state.budget === null) {
    status("pick start/goal before replanning", "warn");
    return;
  }
  const patch = state.takePatch();
  const seq = state.nextSeq("replan");
  const outcome = await api.replan(state.activeGraphId, patch, state.start,
                                   state.goal, state.budget);
  if (!state.acceptResponse("replan", seq)) return;
  if (outcome.revision) {
    state.pushRevision(outcome.revision);
    el.revisionLabel.textContent = outcome.revision;
  }
  if (outcome.ok && outcome.solution) {
    state.addOverlay(state.budget, outcome.solution);
    status(`replanned on ${outcome.revision}: survival ` +
      `${(outcome.solution.survival * 100).toFixed(2)}%`);
  } else {
    status(`replan: ${outcome.problem?.error ?? "failed"}`, "warn");
  }
  await refreshGrid();
}

async function onUndoPatch(): Promise<void> {
  if (state.revisions.length === 0) {
    status("nothing to undo", "warn");
    return;
  }
  state.undoRevision();
  el.revisionLabel.textContent = state.revisions.length
    ? state.activeGraphId : "base";
  await refreshGrid();
  requestSolve();
}

async function onGraphChange(): Promise<void> {
  state.baseGraphId = el.graphSelect.value;
  state.revisions = [];
  state.setEndpoints(null, null);
  pickingGoal = false;
  el.revisionLabel.textContent = "base";
  el.pairLabel.textContent = "click two cells";
  syncBudgetControls();
  await refreshGrid();
  status("click a cell to set the start");
}

async function init(): Promise<void> {
  const graphs = await api.listGraphs();
  if (graphs.length === 0) {
    status("no graphs registered: start the service with --demo or --graph-dir", "error");
    return;
  }
  for (const g of graphs) {
    const option = document.createElement("option");
    option.value = g.id;
    option.textContent = `${g.id} (${g.nodes} nodes)`;
    el.graphSelect.appendChild(option);
  }
  el.graphSelect.addEventListener("change", () => void onGraphChange());
  el.map.addEventListener("click", onMapClick);
  el.chart.addEventListener("click", onChartClick);
  el.budget.addEventListener("input", () => {
    state.budget = Number(el.budget.value);
    syncBudgetControls();
    requestSolve();
  });
  el.sweepBtn.addEventListener("click", () => void onSweep());
  el.applyPatch.addEventListener("click", () => void onApplyPatch());
  el.undoPatch.addEventListener("click", () => void onUndoPatch());
  await onGraphChange();
}

void init();
