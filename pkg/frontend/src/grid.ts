/** Pixel <-> cell geometry for the row-major grid canvas. */

export interface GridGeometry {
  width: number;   // columns
  height: number;  // rows
  cellPx: number;  // square cell size in device pixels
}

export function fitCellPx(canvasW: number, canvasH: number,
                          cols: number, rows: number): number {
  return Math.max(1, Math.floor(Math.min(canvasW / cols, canvasH / rows)));
}

/** Node id under a canvas pixel, or null outside the grid. Row-major:
 * node = row * width + col (row 0 rendered at the top). */
export function nodeAtPixel(geom: GridGeometry, px: number, py: number): number | null {
  const col = Math.floor(px / geom.cellPx);
  const row = Math.floor(py / geom.cellPx);
  if (col < 0 || col >= geom.width || row < 0 || row >= geom.height) return null;
  return row * geom.width + col;
}

export function cellOrigin(geom: GridGeometry, node: number): { x: number; y: number } {
  const row = Math.floor(node / geom.width);
  const col = node % geom.width;
  return { x: col * geom.cellPx, y: row * geom.cellPx };
}

export function cellCenter(geom: GridGeometry, node: number): { x: number; y: number } {
  const { x, y } = cellOrigin(geom, node);
  return { x: x + geom.cellPx / 2, y: y + geom.cellPx / 2 };
}
