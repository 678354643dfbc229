/**
 * Canvas renderers for the three explorer panels.
 *
 * Pure data massaging (segment splitting, nearest-sample lookup, annotation
 * strings) is exported separately so tests can cover it without a canvas.
 * All numbers are taken verbatim from service payloads; the only arithmetic
 * here is pixel mapping and one display-side reflection of the base line.
 */

import type { FramePayload, MapPayload, Pair } from "./api.js";
import {
  boundsFromPoints,
  fmt,
  makeTransform,
  niceTicks,
  squareBox,
  type PixelTransform,
  type WorldBox,
} from "./geometry.js";
import type { Viewport } from "./state.js";

const COLOR = {
  l1Forward: "#d62728",
  l1Backward: "#1f77b4",
  zc: "#2ca02c",
  tc: "#ff7f0e",
  tl: "#9467bd",
  roots: "#d62728",
  marker: "#222222",
  curve: "#1f77b4",
  branchB: "#7f7f7f",
  crossing: "#d62728",
  gap: "rgba(255, 193, 7, 0.25)",
  selection: "rgba(31, 119, 180, 0.18)",
  cursor: "#444444",
  axis: "#999999",
  banner: "#b71c1c",
};

/** Contiguous non-null runs of a sampled series, as [start, end) ranges. */
export function splitSegments(values: (number | null)[]): [number, number][] {
  const runs: [number, number][] = [];
  let start = -1;
  for (let i = 0; i < values.length; i++) {
    const ok = values[i] !== null && Number.isFinite(values[i] as number);
    if (ok && start < 0) start = i;
    if (!ok && start >= 0) {
      runs.push([start, i]);
      start = -1;
    }
  }
  if (start >= 0) runs.push([start, values.length]);
  return runs;
}

/** Index of the sample closest to x; -1 on an empty list. */
export function nearestIndex(xs: number[], x: number): number {
  let best = -1;
  let gap = Infinity;
  for (let i = 0; i < xs.length; i++) {
    const d = Math.abs(xs[i] - x);
    if (d < gap) {
      gap = d;
      best = i;
    }
  }
  return best;
}

/** Annotation lines for the distance panel, e.g. "t* = 1.2465". */
export function dsdAnnotations(frame: FramePayload): string[] {
  const lines: string[] = [];
  if (frame.t_star !== null) lines.push(`t* = ${fmt(frame.t_star)}`);
  if (frame.min_d2 !== null) lines.push(`d2(t*) = ${fmt(frame.min_d2)}`);
  return lines;
}

export interface GeometryOptions {
  showTerminalCurve: boolean;
  showTerminalLine: boolean;
  showRoots: boolean;
  roots: Pair[];
}

function drawPolyline(
  ctx: CanvasRenderingContext2D,
  tr: PixelTransform,
  points: (Pair | null)[],
  color: string,
  width = 1.5,
): void {
  ctx.strokeStyle = color;
  ctx.lineWidth = width;
  let open = false;
  ctx.beginPath();
  for (const p of points) {
    if (!p || !Number.isFinite(p[0]) || !Number.isFinite(p[1])) {
      open = false;
      continue;
    }
    const x = tr.x(p[0]);
    const y = tr.y(p[1]);
    if (open) ctx.lineTo(x, y);
    else ctx.moveTo(x, y);
    open = true;
  }
  ctx.stroke();
}

function drawDot(
  ctx: CanvasRenderingContext2D,
  tr: PixelTransform,
  p: Pair,
  color: string,
  label?: string,
  r = 3,
): void {
  const x = tr.x(p[0]);
  const y = tr.y(p[1]);
  ctx.fillStyle = color;
  ctx.beginPath();
  ctx.arc(x, y, r, 0, 2 * Math.PI);
  ctx.fill();
  if (label) {
    ctx.fillStyle = COLOR.marker;
    ctx.fillText(label, x + 5, y - 5);
  }
}

function drawRing(
  ctx: CanvasRenderingContext2D,
  tr: PixelTransform,
  p: Pair,
  color: string,
  r = 5,
): void {
  ctx.strokeStyle = color;
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  ctx.arc(tr.x(p[0]), tr.y(p[1]), r, 0, 2 * Math.PI);
  ctx.stroke();
}

function drawDiamond(
  ctx: CanvasRenderingContext2D,
  tr: PixelTransform,
  p: Pair,
  color: string,
  r = 5,
): void {
  const x = tr.x(p[0]);
  const y = tr.y(p[1]);
  ctx.strokeStyle = color;
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  ctx.moveTo(x, y - r);
  ctx.lineTo(x + r, y);
  ctx.lineTo(x, y + r);
  ctx.lineTo(x - r, y);
  ctx.closePath();
  ctx.stroke();
}

function banner(ctx: CanvasRenderingContext2D, width: number, text: string): void {
  ctx.fillStyle = COLOR.banner;
  ctx.fillRect(0, 0, width, 22);
  ctx.fillStyle = "#ffffff";
  ctx.fillText(text, 8, 15);
}

/**
 * The per-angle scene: base line (forward half red, mirrored half blue),
 * z-circumference in green, optional terminal curve and semi-line, fixed
 * points P1/Pc/Pa/PT, root overlay, and the minimizer markers (circles on
 * the parametric curves, a diamond on the circumference).
 */
export function drawGeometryPanel(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  frame: FramePayload,
  opts: GeometryOptions,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.font = "11px system-ui, sans-serif";

  // backward half of the base line, reflected through P1 for display
  const back: Pair[] = frame.l1.map((p) => [
    2 * frame.p1[0] - p[0],
    2 * frame.p1[1] - p[1],
  ]);

  const lines: ((Pair | null)[] | null)[] = [frame.l1, back, frame.zc_points];
  if (opts.showTerminalCurve) lines.push(frame.tc);
  if (opts.showTerminalLine) lines.push(frame.tl);
  const extras: (Pair | null | undefined)[] = [
    frame.p1,
    frame.rx,
    frame.anchor_point,
    frame.pc,
    frame.zc_t_star,
    [0, 0],
  ];
  if (frame.intersections) {
    extras.push(frame.intersections.i1, frame.intersections.i2);
  }
  if (opts.showRoots) extras.push(...opts.roots);

  const box = squareBox(boundsFromPoints(lines, extras));
  const side = Math.min(width, height);
  const tr = makeTransform(box, side, side, 14);

  // light axes through the origin
  ctx.strokeStyle = "#e0e0e0";
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(tr.x(box.xMin), tr.y(0));
  ctx.lineTo(tr.x(box.xMax), tr.y(0));
  ctx.moveTo(tr.x(0), tr.y(box.yMin));
  ctx.lineTo(tr.x(0), tr.y(box.yMax));
  ctx.stroke();

  drawPolyline(ctx, tr, back, COLOR.l1Backward);
  drawPolyline(ctx, tr, frame.l1, COLOR.l1Forward);
  if (frame.zc_points) drawPolyline(ctx, tr, frame.zc_points, COLOR.zc);
  if (opts.showTerminalCurve && frame.tc) drawPolyline(ctx, tr, frame.tc, COLOR.tc);
  if (opts.showTerminalLine && frame.tl) drawPolyline(ctx, tr, frame.tl, COLOR.tl);

  // t = 0 fixed points of the four trajectories
  drawDot(ctx, tr, frame.p1, COLOR.marker, "P1");
  if (frame.pc) drawDot(ctx, tr, frame.pc, COLOR.zc, "Pc");
  if (opts.showTerminalLine && frame.anchor_point) {
    drawDot(ctx, tr, frame.anchor_point, COLOR.tl, "Pa");
  }
  if (opts.showTerminalCurve && frame.tc && frame.tc[0]) {
    drawDot(ctx, tr, frame.tc[0], COLOR.tc, "PT");
  }

  // minimizer markers: circles on the curves, diamond on the circumference
  if (frame.t_star !== null) {
    const k = nearestIndex(frame.t_samples, frame.t_star);
    if (frame.rx) drawRing(ctx, tr, frame.rx, COLOR.l1Forward);
    if (opts.showTerminalCurve && frame.tc && k >= 0 && frame.tc[k]) {
      drawRing(ctx, tr, frame.tc[k] as Pair, COLOR.tc);
    }
    if (opts.showTerminalLine && frame.tl && k >= 0) {
      drawRing(ctx, tr, frame.tl[k], COLOR.tl);
    }
    if (frame.zc_t_star) drawDiamond(ctx, tr, frame.zc_t_star, COLOR.zc);
  }

  if (frame.intersections) {
    const { i1, i2 } = frame.intersections;
    if (i1) drawDiamond(ctx, tr, i1, COLOR.marker, 4);
    if (i2) drawDiamond(ctx, tr, i2, COLOR.marker, 4);
  }

  if (opts.showRoots) {
    for (const root of opts.roots) drawDot(ctx, tr, root, COLOR.roots, undefined, 3.5);
  }

  ctx.fillStyle = COLOR.marker;
  ctx.fillText(`theta = ${fmt(frame.theta)}`, 8, height - 8);

  if (frame.reason !== null) banner(ctx, width, frame.reason);
}

/** Distance profile d2 over t with the minimizer annotated. */
export function drawDsdPanel(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  frame: FramePayload,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.font = "11px system-ui, sans-serif";
  if (!frame.dsd_curve) {
    ctx.fillStyle = COLOR.branchB;
    ctx.fillText("distance profile needs degree >= 4", 10, height / 2);
    return;
  }
  const ts = frame.t_samples;
  const ys = frame.dsd_curve;
  let yMax = -Infinity;
  for (const v of ys) if (v !== null && Number.isFinite(v) && v > yMax) yMax = v;
  if (yMax === -Infinity) yMax = 1;
  const box: WorldBox = { xMin: ts[0], xMax: ts[ts.length - 1], yMin: 0, yMax: yMax * 1.05 };
  const margin = 36;
  const tr = makeTransform(box, width, height, margin);

  ctx.strokeStyle = COLOR.axis;
  ctx.lineWidth = 1;
  ctx.strokeRect(margin, margin, width - 2 * margin, height - 2 * margin);
  ctx.fillStyle = COLOR.marker;
  for (const t of niceTicks(box.xMin, box.xMax)) {
    ctx.fillText(fmt(t, 3), tr.x(t) - 8, height - margin + 14);
  }
  for (const v of niceTicks(box.yMin, box.yMax, 4)) {
    ctx.fillText(fmt(v, 3), 2, tr.y(v) + 4);
  }

  ctx.strokeStyle = COLOR.curve;
  ctx.lineWidth = 1.5;
  for (const [a, b] of splitSegments(ys)) {
    ctx.beginPath();
    for (let i = a; i < b; i++) {
      const x = tr.x(ts[i]);
      const y = tr.y(ys[i] as number);
      if (i === a) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    }
    ctx.stroke();
  }

  if (frame.t_star !== null) {
    const x = tr.x(frame.t_star);
    ctx.strokeStyle = COLOR.crossing;
    ctx.setLineDash([4, 3]);
    ctx.beginPath();
    ctx.moveTo(x, margin);
    ctx.lineTo(x, height - margin);
    ctx.stroke();
    ctx.setLineDash([]);
  }
  ctx.fillStyle = COLOR.marker;
  let row = margin + 14;
  for (const line of dsdAnnotations(frame)) {
    ctx.fillText(line, width - margin - 110, row);
    row += 14;
  }
}

export interface MapDrawOptions {
  viewport: Viewport;
  theta: number;
  selection: [number, number] | null;
  regional: MapPayload | null;
}

function drawSeries(
  ctx: CanvasRenderingContext2D,
  tr: PixelTransform,
  support: number[],
  values: (number | null)[],
  color: string,
  width: number,
): void {
  ctx.strokeStyle = color;
  ctx.lineWidth = width;
  for (const [a, b] of splitSegments(values)) {
    ctx.beginPath();
    for (let i = a; i < b; i++) {
      const x = tr.x(support[i]);
      const y = tr.y(values[i] as number);
      if (i === a) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    }
    ctx.stroke();
  }
}

/**
 * Proximity-map panel: both branch series, sign crossings on the zero line,
 * gap intervals shaded as zoom suggestions, the current angle cursor, any
 * in-progress drag selection and the latest regional overlay.
 */
export function drawMapPanel(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  map: MapPayload | null,
  opts: MapDrawOptions,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.font = "11px system-ui, sans-serif";
  if (!map) {
    ctx.fillStyle = COLOR.branchB;
    ctx.fillText("no map loaded - run a sweep", 10, height / 2);
    return;
  }
  const vp = opts.viewport;
  const box: WorldBox = {
    xMin: vp.thetaMin,
    xMax: vp.thetaMax,
    yMin: vp.yMin,
    yMax: vp.yMax,
  };
  const margin = 36;
  const tr = makeTransform(box, width, height, margin);
  const clipTop = margin;
  const clipBottom = height - margin;

  // gap intervals first, as translucent bands suggesting where to zoom
  const paintGaps = (gaps: [number, number][]) => {
    ctx.fillStyle = COLOR.gap;
    for (const [lo, hi] of gaps) {
      const x0 = Math.max(tr.x(lo), margin);
      const x1 = Math.min(tr.x(hi), width - margin);
      if (x1 > x0) ctx.fillRect(x0, clipTop, x1 - x0, clipBottom - clipTop);
    }
  };
  paintGaps(map.gaps);
  if (opts.regional) paintGaps(opts.regional.gaps);

  ctx.strokeStyle = COLOR.axis;
  ctx.lineWidth = 1;
  ctx.strokeRect(margin, margin, width - 2 * margin, height - 2 * margin);
  ctx.fillStyle = COLOR.marker;
  for (const t of niceTicks(box.xMin, box.xMax, 6)) {
    ctx.fillText(fmt(t, 3), tr.x(t) - 10, height - margin + 14);
  }
  for (const v of niceTicks(box.yMin, box.yMax, 4)) {
    ctx.fillText(fmt(v, 3), 2, tr.y(v) + 4);
  }

  // zero line, where crossings live
  if (box.yMin < 0 && box.yMax > 0) {
    ctx.strokeStyle = "#cccccc";
    ctx.beginPath();
    ctx.moveTo(margin, tr.y(0));
    ctx.lineTo(width - margin, tr.y(0));
    ctx.stroke();
  }

  ctx.save();
  ctx.beginPath();
  ctx.rect(margin, margin, width - 2 * margin, height - 2 * margin);
  ctx.clip();

  drawSeries(ctx, tr, map.support, map.values_a, COLOR.curve, 1.2);
  if (map.values_b) drawSeries(ctx, tr, map.support, map.values_b, COLOR.branchB, 1.0);

  if (opts.regional) {
    drawSeries(ctx, tr, opts.regional.support, opts.regional.values_a, "#0b3d91", 1.6);
    if (opts.regional.values_b) {
      drawSeries(ctx, tr, opts.regional.support, opts.regional.values_b, "#555555", 1.2);
    }
  }

  const zeroY = box.yMin < 0 && box.yMax > 0 ? tr.y(0) : clipBottom;
  ctx.fillStyle = COLOR.crossing;
  for (const c of map.crossings) {
    ctx.beginPath();
    ctx.arc(tr.x(c.theta), zeroY, 3, 0, 2 * Math.PI);
    ctx.fill();
  }
  if (opts.regional) {
    ctx.strokeStyle = COLOR.crossing;
    ctx.lineWidth = 1.5;
    for (const c of opts.regional.crossings) {
      ctx.beginPath();
      ctx.arc(tr.x(c.theta), zeroY, 5, 0, 2 * Math.PI);
      ctx.stroke();
    }
  }

  // current slider angle
  ctx.strokeStyle = COLOR.cursor;
  ctx.setLineDash([2, 3]);
  ctx.beginPath();
  ctx.moveTo(tr.x(opts.theta), clipTop);
  ctx.lineTo(tr.x(opts.theta), clipBottom);
  ctx.stroke();
  ctx.setLineDash([]);

  if (opts.selection) {
    const [a, b] = opts.selection;
    const x0 = tr.x(Math.min(a, b));
    const x1 = tr.x(Math.max(a, b));
    ctx.fillStyle = COLOR.selection;
    ctx.fillRect(x0, clipTop, x1 - x0, clipBottom - clipTop);
  }

  ctx.restore();
  ctx.fillStyle = COLOR.marker;
  ctx.fillText(`${map.kind} map, N=${map.n}${map.is_global ? " (global)" : ""}`, margin, 14);
}
