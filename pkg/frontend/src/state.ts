/**
 * View state and the pure transition helpers behind the explorer UI.
 *
 * Everything here is deliberately side-effect free so it can be unit tested
 * without a DOM.  The panels own drawing; network traffic is described by
 * small request objects so each user action maps to exactly one API call.
 */

import type { EstimateRow, MapKind, MapPayload } from "./api.js";

export const THETA_MIN = -Math.PI;
// largest double below pi keeps theta inside the half-open sweep interval
export const THETA_UPPER = Math.PI - 2 * Number.EPSILON;

export interface Viewport {
  thetaMin: number;
  thetaMax: number;
  yMin: number;
  yMax: number;
}

export interface ViewState {
  sessionId: string | null;
  degree: number | null;
  theta: number;
  mapKind: MapKind;
  viewport: Viewport;
  /** angular spacing of the loaded partition; drives the slider step */
  mapStep: number | null;
  showTerminalCurve: boolean;
  showTerminalLine: boolean;
  showRoots: boolean;
}

export interface RegionalRequest {
  kind: MapKind;
  from: number;
  to: number;
  n: number;
  withEstimates: true;
}

export function initialState(): ViewState {
  return {
    sessionId: null,
    degree: null,
    theta: 0,
    mapKind: "e",
    viewport: { thetaMin: THETA_MIN, thetaMax: Math.PI, yMin: -1, yMax: 1 },
    mapStep: null,
    showTerminalCurve: true,
    showTerminalLine: true,
    showRoots: false,
  };
}

/** Clamp an angle into [-pi, pi).  Non-finite input falls back to 0. */
export function clampTheta(theta: number): number {
  if (!Number.isFinite(theta)) return 0;
  if (theta < THETA_MIN) return THETA_MIN;
  if (theta >= Math.PI) return THETA_UPPER;
  return theta;
}

export function withTheta(state: ViewState, theta: number): ViewState {
  return { ...state, theta: clampTheta(theta) };
}

/** Slider granularity equals the loaded partition spacing. */
export function sliderStep(state: ViewState): number {
  return state.mapStep ?? Math.PI / 360;
}

/** Snap a raw slider value onto the nearest loaded support angle. */
export function snapToSupport(theta: number, support: number[]): number {
  if (support.length === 0) return clampTheta(theta);
  let best = support[0];
  let gap = Math.abs(theta - best);
  for (let i = 1; i < support.length; i++) {
    const d = Math.abs(theta - support[i]);
    if (d < gap) {
      gap = d;
      best = support[i];
    }
  }
  return best;
}

/** Order and de-NaN a viewport so both ranges stay finite and ascending. */
export function sanitizeViewport(v: Viewport): Viewport {
  let { thetaMin, thetaMax, yMin, yMax } = v;
  if (!Number.isFinite(thetaMin)) thetaMin = THETA_MIN;
  if (!Number.isFinite(thetaMax)) thetaMax = Math.PI;
  if (!Number.isFinite(yMin)) yMin = -1;
  if (!Number.isFinite(yMax)) yMax = 1;
  if (thetaMax < thetaMin) [thetaMin, thetaMax] = [thetaMax, thetaMin];
  if (yMax < yMin) [yMin, yMax] = [yMax, yMin];
  if (thetaMax === thetaMin) thetaMax = thetaMin + 1e-9;
  if (yMax === yMin) {
    yMin -= 0.5;
    yMax += 0.5;
  }
  return { thetaMin, thetaMax, yMin, yMax };
}

/** Display range for a loaded map: support extent by padded value extent. */
export function mapViewport(map: MapPayload): Viewport {
  let lo = Infinity;
  let hi = -Infinity;
  const scan = (values: (number | null)[] | null) => {
    if (!values) return;
    for (const v of values) {
      if (v === null || !Number.isFinite(v)) continue;
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  };
  scan(map.values_a);
  scan(map.values_b);
  if (lo > hi) {
    lo = -1;
    hi = 1;
  }
  const pad = 0.05 * (hi - lo || 1);
  return sanitizeViewport({
    thetaMin: map.from,
    thetaMax: map.to,
    yMin: lo - pad,
    yMax: hi + pad,
  });
}

export function applyMap(state: ViewState, map: MapPayload): ViewState {
  return {
    ...state,
    mapKind: map.kind,
    mapStep: map.step,
    viewport: mapViewport(map),
  };
}

/**
 * Turn a drag selection into one regional sweep request, or null when the
 * selection is degenerate.  Endpoints are ordered and clamped to the sweep
 * domain; the point count stays whatever the user configured.
 */
export function zoomRequest(
  state: ViewState,
  thetaA: number,
  thetaB: number,
  n: number,
): RegionalRequest | null {
  if (!Number.isFinite(thetaA) || !Number.isFinite(thetaB)) return null;
  let from = Math.min(thetaA, thetaB);
  let to = Math.max(thetaA, thetaB);
  from = Math.max(from, THETA_MIN);
  to = Math.min(to, Math.PI);
  if (!(to > from)) return null;
  if (!Number.isInteger(n) || n < 2) return null;
  return { kind: state.mapKind, from, to, n, withEstimates: true };
}

/** Append new estimate rows, skipping exact duplicates of existing ones. */
export function appendEstimates(
  existing: EstimateRow[],
  incoming: EstimateRow[] | null,
): EstimateRow[] {
  if (!incoming || incoming.length === 0) return existing;
  const seen = new Set(existing.map((r) => `${r.rx[0]}|${r.rx[1]}|${r.theta_hat}`));
  const merged = existing.slice();
  for (const row of incoming) {
    const key = `${row.rx[0]}|${row.rx[1]}|${row.theta_hat}`;
    if (seen.has(key)) continue;
    seen.add(key);
    merged.push(row);
  }
  return merged;
}

/**
 * One in-flight request per panel.  Starting a new request aborts the
 * previous one, so a panel never has two sweeps racing.
 */
export class RequestGate {
  private controller: AbortController | null = null;

  begin(): AbortSignal {
    if (this.controller) this.controller.abort();
    this.controller = new AbortController();
    return this.controller.signal;
  }

  settle(): void {
    this.controller = null;
  }

  get active(): boolean {
    return this.controller !== null;
  }
}
