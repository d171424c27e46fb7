/** Risk heatmap and path overlay rendering. */

import { cssColor, riskColor, riskRaster } from "./colors.js";
import { cellCenter, cellOrigin, type GridGeometry } from "./grid.js";
import type { Overlay } from "./state.js";

export function drawHeatmap(ctx: CanvasRenderingContext2D, geom: GridGeometry,
                            risk: number[]): void {
  // paint at 1px per cell offscreen, then scale without smoothing
  const raster = riskRaster(risk, geom.width, geom.height);
  const image = new ImageData(raster, geom.width, geom.height);
  const off = document.createElement("canvas");
  off.width = geom.width;
  off.height = geom.height;
  off.getContext("2d")!.putImageData(image, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.clearRect(0, 0, geom.width * geom.cellPx, geom.height * geom.cellPx);
  ctx.drawImage(off, 0, 0, geom.width * geom.cellPx, geom.height * geom.cellPx);
}

export function drawPendingPatch(ctx: CanvasRenderingContext2D, geom: GridGeometry,
                                 patch: Map<number, number>): void {
  for (const [node, risk] of patch) {
    const { x, y } = cellOrigin(geom, node);
    ctx.fillStyle = cssColor(riskColor(risk), 0.85);
    ctx.fillRect(x, y, geom.cellPx, geom.cellPx);
    ctx.strokeStyle = "#ffffff";
    ctx.lineWidth = 1;
    ctx.strokeRect(x + 0.5, y + 0.5, geom.cellPx - 1, geom.cellPx - 1);
  }
}

export function drawOverlay(ctx: CanvasRenderingContext2D, geom: GridGeometry,
                            overlay: Overlay, faded: boolean): void {
  const nodes = overlay.solution.nodes;
  if (nodes.length === 0) return;
  ctx.save();
  ctx.strokeStyle = overlay.color;
  ctx.globalAlpha = faded ? 0.45 : 1.0;
  ctx.lineWidth = Math.max(2, geom.cellPx * 0.3);
  ctx.lineCap = "round";
  ctx.lineJoin = "round";
  if (overlay.solution.partial) ctx.setLineDash([6, 5]);
  ctx.beginPath();
  nodes.forEach((node, i) => {
    const { x, y } = cellCenter(geom, node);
    if (i === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
  ctx.stroke();
  ctx.restore();
}

export function drawEndpoint(ctx: CanvasRenderingContext2D, geom: GridGeometry,
                             node: number, label: "S" | "G"): void {
  const { x, y } = cellCenter(geom, node);
  const r = Math.max(5, geom.cellPx * 0.45);
  ctx.fillStyle = label === "S" ? "#ffffff" : "#ffd166";
  ctx.beginPath();
  ctx.arc(x, y, r, 0, Math.PI * 2);
  ctx.fill();
  ctx.fillStyle = "#10151c";
  ctx.font = `bold ${Math.max(8, r)}px sans-serif`;
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  ctx.fillText(label, x, y + 0.5);
}

/** Node-link fallback for graphs without grid structure: risk-colored dots. */
export function drawScatter(ctx: CanvasRenderingContext2D, canvasW: number,
                            canvasH: number,
                            nodes: Array<{ x: number; y: number; risk: number }>): void {
  ctx.fillStyle = "#101722";
  ctx.fillRect(0, 0, canvasW, canvasH);
  if (nodes.length === 0) return;
  const xs = nodes.map((n) => n.x);
  const ys = nodes.map((n) => n.y);
  const pad = 12;
  const spanX = Math.max(...xs) - Math.min(...xs) || 1;
  const spanY = Math.max(...ys) - Math.min(...ys) || 1;
  const minX = Math.min(...xs);
  const minY = Math.min(...ys);
  for (const n of nodes) {
    const px = pad + ((n.x - minX) / spanX) * (canvasW - 2 * pad);
    const py = canvasH - pad - ((n.y - minY) / spanY) * (canvasH - 2 * pad);
    ctx.fillStyle = cssColor(riskColor(n.risk));
    ctx.beginPath();
    ctx.arc(px, py, 3, 0, Math.PI * 2);
    ctx.fill();
  }
}
