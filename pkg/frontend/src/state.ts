/** Client view state.
 *
 * No solver state lives here: every interaction is an idempotent refetch and
 * the numbers displayed are exactly the server's. Responses are matched to
 * requests by per-interaction sequence numbers; anything older than the
 * latest issued request is discarded (last write wins).
 */

import { pathColor } from "./colors.js";
import type { Solution } from "./types.js";

export type RequestKind = "solve" | "sweep" | "replan" | "grid";

export interface Overlay {
  seq: number;
  budget: number;
  color: string;
  solution: Solution;
}

export interface SweepPoint {
  budget: number;
  survival: number | null; // null renders as a gap
}

export const MAX_OVERLAYS = 4;

export class ViewState {
  baseGraphId = "";
  /** replan revisions, newest last; empty means the base graph is active */
  revisions: string[] = [];

  start: number | null = null;
  goal: number | null = null;
  tMin: number | null = null;
  budget: number | null = null;

  overlays: Overlay[] = [];
  sweepPoints: SweepPoint[] = [];
  pendingPatch = new Map<number, number>();

  private issued: Record<RequestKind, number> = { solve: 0, sweep: 0, replan: 0, grid: 0 };
  private overlayCounter = 0;

  get activeGraphId(): string {
    return this.revisions.length
      ? this.revisions[this.revisions.length - 1]
      : this.baseGraphId;
  }

  nextSeq(kind: RequestKind): number {
    return ++this.issued[kind];
  }

  /** True when this response matches the latest issued request of its kind. */
  acceptResponse(kind: RequestKind, seq: number): boolean {
    return seq === this.issued[kind];
  }

  /** Budget slider bounds: [t_min, 2 * t_min] once the pair is known. */
  sliderBounds(): { min: number; max: number } | null {
    if (this.tMin === null) return null;
    return { min: this.tMin, max: 2 * this.tMin };
  }

  setEndpoints(start: number | null, goal: number | null): void {
    this.start = start;
    this.goal = goal;
    this.tMin = null;
    this.budget = null;
    this.overlays = [];
    this.sweepPoints = [];
  }

  setMinTime(tMin: number): void {
    this.tMin = tMin;
    const bounds = this.sliderBounds()!;
    if (this.budget === null || this.budget < bounds.min || this.budget > bounds.max) {
      this.budget = Math.min(bounds.max, tMin * 1.2);
    }
  }

  /** Keeps the previous overlays (up to MAX_OVERLAYS) for visual comparison. */
  addOverlay(budget: number, solution: Solution): Overlay {
    const overlay: Overlay = {
      seq: this.overlayCounter++,
      budget,
      color: pathColor(this.overlayCounter - 1),
      solution,
    };
    this.overlays.push(overlay);
    if (this.overlays.length > MAX_OVERLAYS) {
      this.overlays.splice(0, this.overlays.length - MAX_OVERLAYS);
    }
    return overlay;
  }

  clearOverlays(): void {
    this.overlays = [];
  }

  setSweep(points: SweepPoint[]): void {
    this.sweepPoints = points;
  }

  // -- patch editing ---------------------------------------------------------

  togglePatchCell(node: number, risk: number): void {
    if (this.pendingPatch.has(node) && this.pendingPatch.get(node) === risk) {
      this.pendingPatch.delete(node);
    } else {
      this.pendingPatch.set(node, risk);
    }
  }

  takePatch(): Array<{ node: number; risk: number }> {
    const patch = [...this.pendingPatch.entries()]
      .sort((a, b) => a[0] - b[0])
      .map(([node, risk]) => ({ node, risk }));
    this.pendingPatch.clear();
    return patch;
  }

  pushRevision(id: string): void {
    this.revisions.push(id);
  }

  /** Undo the newest patch; returns the now-active graph id. */
  undoRevision(): string {
    this.revisions.pop();
    return this.activeGraphId;
  }
}
