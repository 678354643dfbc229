/**
 * Pure canvas-space helpers: world boxes, pixel transforms, axis ticks and
 * number formatting.  No DOM access, so everything is testable in node.
 */

import type { Pair } from "./api.js";

export interface WorldBox {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

export interface PixelTransform {
  x(wx: number): number;
  y(wy: number): number;
  scale: number;
}

const DEFAULT_BOX: WorldBox = { xMin: -2, xMax: 2, yMin: -2, yMax: 2 };

function finitePair(p: Pair | null | undefined): p is Pair {
  return !!p && Number.isFinite(p[0]) && Number.isFinite(p[1]);
}

/**
 * Bounding box of a set of polylines plus individual marker points, padded
 * by 8%.  Null samples and non-finite coordinates are skipped; with no
 * usable points at all a default box around the origin is returned.
 */
export function boundsFromPoints(
  polylines: ((Pair | null)[] | null)[],
  extras: (Pair | null | undefined)[] = [],
): WorldBox {
  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  const take = (p: Pair | null | undefined) => {
    if (!finitePair(p)) return;
    if (p[0] < xMin) xMin = p[0];
    if (p[0] > xMax) xMax = p[0];
    if (p[1] < yMin) yMin = p[1];
    if (p[1] > yMax) yMax = p[1];
  };
  for (const line of polylines) {
    if (!line) continue;
    for (const p of line) take(p);
  }
  for (const p of extras) take(p);
  if (xMin > xMax || yMin > yMax) return { ...DEFAULT_BOX };
  const padX = 0.08 * (xMax - xMin || 1);
  const padY = 0.08 * (yMax - yMin || 1);
  return { xMin: xMin - padX, xMax: xMax + padX, yMin: yMin - padY, yMax: yMax + padY };
}

/** Expand the shorter axis around its center until both spans match. */
export function squareBox(box: WorldBox): WorldBox {
  const spanX = box.xMax - box.xMin;
  const spanY = box.yMax - box.yMin;
  if (spanX === spanY) return { ...box };
  if (spanX > spanY) {
    const cy = (box.yMin + box.yMax) / 2;
    return { ...box, yMin: cy - spanX / 2, yMax: cy + spanX / 2 };
  }
  const cx = (box.xMin + box.xMax) / 2;
  return { ...box, xMin: cx - spanY / 2, xMax: cx + spanY / 2 };
}

/**
 * World-to-pixel mapping for a canvas of the given size.  The y axis flips
 * so world "up" renders upward.  `scale` carries pixels per world unit on
 * the x axis (equal to y when the box is square and the canvas matches).
 */
export function makeTransform(
  box: WorldBox,
  width: number,
  height: number,
  margin = 0,
): PixelTransform {
  const spanX = box.xMax - box.xMin || 1;
  const spanY = box.yMax - box.yMin || 1;
  const sx = (width - 2 * margin) / spanX;
  const sy = (height - 2 * margin) / spanY;
  return {
    x: (wx: number) => margin + (wx - box.xMin) * sx,
    y: (wy: number) => height - margin - (wy - box.yMin) * sy,
    scale: sx,
  };
}

/** Inverse of the x mapping: canvas pixel back to world coordinate. */
export function invertX(box: WorldBox, width: number, margin: number, px: number): number {
  const spanX = box.xMax - box.xMin || 1;
  const sx = (width - 2 * margin) / spanX;
  return box.xMin + (px - margin) / sx;
}

/** Round axis ticks on the usual 1-2-5 ladder. */
export function niceTicks(lo: number, hi: number, target = 5): number[] {
  if (!Number.isFinite(lo) || !Number.isFinite(hi) || hi <= lo) return [lo];
  const raw = (hi - lo) / Math.max(target, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = mag * (norm < 1.5 ? 1 : norm < 3.5 ? 2 : norm < 7.5 ? 5 : 10);
  const ticks: number[] = [];
  const first = Math.ceil(lo / step) * step;
  for (let v = first; v <= hi + step * 1e-9; v += step) {
    // snap tiny float drift so labels like "0" stay exact
    ticks.push(Math.abs(v) < step * 1e-6 ? 0 : v);
  }
  return ticks;
}

/** Compact display form: 5 significant digits, exponential off-scale. */
export function fmt(x: number | null | undefined, digits = 5): string {
  if (x === null || x === undefined || Number.isNaN(x)) return "n/a";
  if (!Number.isFinite(x)) return x > 0 ? "inf" : "-inf";
  if (x === 0) return "0";
  const ax = Math.abs(x);
  if (ax < 1e-2 || ax >= 1e5) return x.toExponential(digits - 1);
  return x.toPrecision(digits);
}

/** Complex pair as "a+bi" with the same compact digits. */
export function fmtPair(p: Pair | null | undefined, digits = 5): string {
  if (!p) return "n/a";
  const re = fmt(p[0], digits);
  const im = fmt(Math.abs(p[1]), digits);
  return p[1] < 0 ? `${re}-${im}i` : `${re}+${im}i`;
}
