/**
 * DOM wiring for the explorer page.
 *
 * Every control maps to exactly one API request: loading coefficients posts
 * the polynomial, the slider fetches one frame per move, the sweep button
 * and the kind selector fetch one map, a drag selection fetches one regional
 * map, and the solve button posts one solve.  Toggles only redraw.
 */

import { ApiClient, ApiError } from "./api.js";
import type { EstimateRow, FramePayload, MapKind, MapPayload, Pair } from "./api.js";
import { fmt, fmtPair, invertX } from "./geometry.js";
import { drawDsdPanel, drawGeometryPanel, drawMapPanel } from "./panels.js";
import {
  RequestGate,
  type ViewState,
  appendEstimates,
  applyMap,
  clampTheta,
  initialState,
  sliderStep,
  snapToSupport,
  withTheta,
  zoomRequest,
} from "./state.js";

function must<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

const api = new ApiClient("");

const coeffInput = must<HTMLTextAreaElement>("coefficients");
const loadButton = must<HTMLButtonElement>("load");
const statusLine = must<HTMLSpanElement>("status");
const thetaSlider = must<HTMLInputElement>("theta");
const thetaLabel = must<HTMLSpanElement>("theta-label");
const toggleTc = must<HTMLInputElement>("toggle-tc");
const toggleTl = must<HTMLInputElement>("toggle-tl");
const toggleRoots = must<HTMLInputElement>("toggle-roots");
const kindSelect = must<HTMLSelectElement>("map-kind");
const sweepN = must<HTMLInputElement>("sweep-n");
const sweepButton = must<HTMLButtonElement>("sweep");
const zoomN = must<HTMLInputElement>("zoom-n");
const solveButton = must<HTMLButtonElement>("solve");
const tableBody = must<HTMLTableSectionElement>("estimate-rows");
const geoCanvas = must<HTMLCanvasElement>("geometry-canvas");
const dsdCanvas = must<HTMLCanvasElement>("dsd-canvas");
const mapCanvas = must<HTMLCanvasElement>("map-canvas");

let state: ViewState = initialState();
let frame: FramePayload | null = null;
let baseMap: MapPayload | null = null;
let regional: MapPayload | null = null;
let estimates: (EstimateRow & { source: string })[] = [];
let selection: [number, number] | null = null;
let dragStart: number | null = null;

const frameGate = new RequestGate();
const mapGate = new RequestGate();
const zoomGate = new RequestGate();

const MAP_MARGIN = 36;

function setStatus(text: string, isError = false): void {
  statusLine.textContent = text;
  statusLine.style.color = isError ? "#b71c1c" : "#333";
}

function reportError(err: unknown): void {
  if (err instanceof DOMException && err.name === "AbortError") return;
  if (err instanceof ApiError) setStatus(`error ${err.status}: ${err.message}`, true);
  else setStatus(String(err), true);
}

function rootOverlay(): Pair[] {
  return estimates.map((r) => r.rx);
}

function redrawGeometry(): void {
  const ctx = geoCanvas.getContext("2d");
  if (!ctx) return;
  if (!frame) {
    ctx.clearRect(0, 0, geoCanvas.width, geoCanvas.height);
    return;
  }
  drawGeometryPanel(ctx, geoCanvas.width, geoCanvas.height, frame, {
    showTerminalCurve: state.showTerminalCurve,
    showTerminalLine: state.showTerminalLine,
    showRoots: state.showRoots,
    roots: rootOverlay(),
  });
}

function redrawDsd(): void {
  const ctx = dsdCanvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, dsdCanvas.width, dsdCanvas.height);
  if (frame) drawDsdPanel(ctx, dsdCanvas.width, dsdCanvas.height, frame);
}

function redrawMap(): void {
  const ctx = mapCanvas.getContext("2d");
  if (!ctx) return;
  drawMapPanel(ctx, mapCanvas.width, mapCanvas.height, baseMap, {
    viewport: state.viewport,
    theta: state.theta,
    selection,
    regional,
  });
}

function redrawAll(): void {
  redrawGeometry();
  redrawDsd();
  redrawMap();
}

function renderTable(): void {
  tableBody.textContent = "";
  for (const row of estimates) {
    const tr = document.createElement("tr");
    const cells = [
      fmtPair(row.rx, 7),
      fmt(row.theta_hat, 7),
      fmt(row.delta, 4),
      row.d2 === null ? "n/a" : fmt(row.d2, 4),
      row.source,
    ];
    for (const text of cells) {
      const td = document.createElement("td");
      td.textContent = text;
      tr.appendChild(td);
    }
    tableBody.appendChild(tr);
  }
}

function syncSlider(): void {
  thetaSlider.min = String(-Math.PI);
  thetaSlider.max = String(Math.PI);
  thetaSlider.step = String(sliderStep(state));
  thetaSlider.value = String(state.theta);
  thetaLabel.textContent = fmt(state.theta, 6);
}

async function refreshFrame(): Promise<void> {
  if (!state.sessionId || (state.degree ?? 0) < 3) return;
  const signal = frameGate.begin();
  try {
    frame = await api.fetchFrame(state.sessionId, state.theta, {}, signal);
    frameGate.settle();
    setStatus(frame.reason ? `frame: ${frame.reason}` : "frame loaded", frame.reason !== null);
    redrawGeometry();
    redrawDsd();
    redrawMap();
  } catch (err) {
    reportError(err);
  }
}

async function runSweep(): Promise<void> {
  if (!state.sessionId || (state.degree ?? 0) < 3) return;
  const n = parseInt(sweepN.value, 10);
  if (!Number.isInteger(n) || n < 2) {
    setStatus("sweep N must be an integer >= 2", true);
    return;
  }
  const signal = mapGate.begin();
  setStatus(`sweeping ${kindSelect.value} map at N=${n} ...`);
  try {
    const map = await api.fetchMap(
      {
        id: state.sessionId,
        kind: kindSelect.value as MapKind,
        from: -Math.PI,
        to: Math.PI,
        n,
      },
      signal,
    );
    mapGate.settle();
    baseMap = map;
    regional = null;
    state = applyMap(state, map);
    state = withTheta(state, snapToSupport(state.theta, map.support));
    syncSlider();
    setStatus(`${map.kind} map: ${map.crossings.length} crossings, ${map.gaps.length} gaps`);
    redrawMap();
  } catch (err) {
    reportError(err);
  }
}

async function runZoom(a: number, b: number): Promise<void> {
  if (!state.sessionId) return;
  const n = parseInt(zoomN.value, 10);
  const request = zoomRequest(state, a, b, n);
  if (!request) {
    setStatus("selection too small for a regional sweep", true);
    return;
  }
  const signal = zoomGate.begin();
  setStatus(`regional sweep [${fmt(request.from, 4)}, ${fmt(request.to, 4)}) at N=${n} ...`);
  try {
    const map = await api.fetchMap(
      {
        id: state.sessionId,
        kind: request.kind,
        from: request.from,
        to: request.to,
        n: request.n,
        withEstimates: true,
      },
      signal,
    );
    zoomGate.settle();
    regional = map;
    const before = estimates.length;
    const merged = appendEstimates(estimates, map.estimates);
    estimates = merged.map((row, i) =>
      i < before ? estimates[i] : { ...row, source: `zoom ${map.kind}` },
    );
    renderTable();
    setStatus(
      `regional sweep found ${map.crossings.length} crossings, ` +
        `${estimates.length - before} new rows`,
    );
    redrawMap();
    redrawGeometry();
  } catch (err) {
    reportError(err);
  }
}

loadButton.addEventListener("click", async () => {
  let coefficients: unknown;
  try {
    coefficients = JSON.parse(coeffInput.value);
  } catch {
    setStatus("coefficients must be a JSON array", true);
    return;
  }
  if (!Array.isArray(coefficients)) {
    setStatus("coefficients must be a JSON array", true);
    return;
  }
  try {
    const created = await api.createPolynomial(coefficients as Pair[]);
    state = { ...initialState(), sessionId: created.id, degree: created.degree };
    frame = null;
    baseMap = null;
    regional = null;
    estimates = [];
    selection = null;
    renderTable();
    syncSlider();
    redrawAll();
    setStatus(
      created.degree < 3
        ? `degree ${created.degree} loaded; frames and maps need degree >= 3, solve still works`
        : `degree ${created.degree} loaded as ${created.id}`,
    );
  } catch (err) {
    reportError(err);
  }
});

thetaSlider.addEventListener("input", () => {
  let theta = clampTheta(parseFloat(thetaSlider.value));
  if (baseMap) theta = snapToSupport(theta, baseMap.support);
  state = withTheta(state, theta);
  thetaLabel.textContent = fmt(state.theta, 6);
  void refreshFrame();
});

toggleTc.addEventListener("change", () => {
  state = { ...state, showTerminalCurve: toggleTc.checked };
  redrawGeometry();
});
toggleTl.addEventListener("change", () => {
  state = { ...state, showTerminalLine: toggleTl.checked };
  redrawGeometry();
});
toggleRoots.addEventListener("change", () => {
  state = { ...state, showRoots: toggleRoots.checked };
  redrawGeometry();
});

kindSelect.addEventListener("change", () => {
  state = { ...state, mapKind: kindSelect.value as MapKind };
  void runSweep();
});
sweepButton.addEventListener("click", () => void runSweep());

solveButton.addEventListener("click", async () => {
  if (!state.sessionId) return;
  setStatus("solving ...");
  try {
    const out = await api.solve(state.sessionId, {
      n: parseInt(sweepN.value, 10) || 2500,
    });
    estimates = [];
    for (const [kind, rows] of Object.entries(out.tables)) {
      for (const row of rows ?? []) {
        estimates.push({ ...row, source: kind });
      }
    }
    renderTable();
    setStatus(
      `solve done: ${estimates.length} rows` +
        (out.rescue_used ? " (rescue sweep used)" : ""),
    );
    redrawGeometry();
  } catch (err) {
    reportError(err);
  }
});

function canvasTheta(event: MouseEvent): number {
  const rect = mapCanvas.getBoundingClientRect();
  const px = ((event.clientX - rect.left) / rect.width) * mapCanvas.width;
  const box = {
    xMin: state.viewport.thetaMin,
    xMax: state.viewport.thetaMax,
    yMin: state.viewport.yMin,
    yMax: state.viewport.yMax,
  };
  return invertX(box, mapCanvas.width, MAP_MARGIN, px);
}

mapCanvas.addEventListener("mousedown", (event) => {
  if (!baseMap) return;
  dragStart = canvasTheta(event);
  selection = [dragStart, dragStart];
  redrawMap();
});

mapCanvas.addEventListener("mousemove", (event) => {
  if (dragStart === null) return;
  selection = [dragStart, canvasTheta(event)];
  redrawMap();
});

mapCanvas.addEventListener("mouseup", (event) => {
  if (dragStart === null) return;
  const a = dragStart;
  const b = canvasTheta(event);
  dragStart = null;
  selection = null;
  redrawMap();
  void runZoom(a, b);
});

mapCanvas.addEventListener("mouseleave", () => {
  dragStart = null;
  selection = null;
  redrawMap();
});

syncSlider();
redrawAll();
setStatus("paste coefficients and load to begin");
