/** Color ramps and palettes. */

export type Rgb = [number, number, number];

// dark blue -> teal -> yellow -> orange -> red; perceptually ordered so low
// and high risk are unmistakable on the heatmap
const RISK_STOPS: Array<[number, Rgb]> = [
  [0.0, [18, 36, 70]],
  [0.25, [22, 110, 120]],
  [0.5, [120, 185, 80]],
  [0.75, [245, 200, 50]],
  [1.0, [210, 35, 35]],
];

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

export function riskColor(risk: number): Rgb {
  const r = Math.min(1, Math.max(0, risk));
  for (let i = 1; i < RISK_STOPS.length; i++) {
    const [x1, c1] = RISK_STOPS[i];
    if (r <= x1) {
      const [x0, c0] = RISK_STOPS[i - 1];
      const t = x1 === x0 ? 0 : (r - x0) / (x1 - x0);
      return [
        Math.round(lerp(c0[0], c1[0], t)),
        Math.round(lerp(c0[1], c1[1], t)),
        Math.round(lerp(c0[2], c1[2], t)),
      ];
    }
  }
  return RISK_STOPS[RISK_STOPS.length - 1][1];
}

export function cssColor([r, g, b]: Rgb, alpha = 1): string {
  return alpha >= 1 ? `rgb(${r},${g},${b})` : `rgba(${r},${g},${b},${alpha})`;
}

// overlay palette for successive solved paths; cycles when exhausted
const PATH_COLORS = ["#ff9f1c", "#2ec4b6", "#e071dc", "#8ecae6", "#f4f1de", "#b5e48c"];

export function pathColor(index: number): string {
  return PATH_COLORS[index % PATH_COLORS.length];
}

/** RGBA raster of the risk field, row-major, one pixel per cell. */
export function riskRaster(risk: number[], width: number,
                           height: number): Uint8ClampedArray<ArrayBuffer> {
  const out = new Uint8ClampedArray(new ArrayBuffer(width * height * 4));
  for (let i = 0; i < width * height; i++) {
    const [r, g, b] = riskColor(risk[i]);
    out[i * 4] = r;
    out[i * 4 + 1] = g;
    out[i * 4 + 2] = b;
    out[i * 4 + 3] = 255;
  }
  return out;
}
