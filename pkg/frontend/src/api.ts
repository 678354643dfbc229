/**
 * Typed client for the root-finder HTTP service.
 *
 * Payload conventions mirror the server exactly: complex numbers travel as
 * [re, im] pairs, undefined or non-finite values arrive as null, and every
 * GET is deterministic for a given query string.  The client performs no
 * numeric work of its own; it only shuttles JSON.
 */

export type Pair = [number, number];

export type MapKind = "e" | "dd2" | "dt";

export interface ZCircle {
  center: Pair;
  radius: number;
}

export interface IntersectionInfo {
  i1: Pair | null;
  i2: Pair | null;
  t1: number | null;
  t2: number | null;
  relevance: number;
}

/** One geometric snapshot at a fixed angle, plus sampled polylines. */
export interface FramePayload {
  degree: number;
  theta: number;
  p1: Pair;
  v_theta: Pair;
  t_star: number | null;
  min_d2: number | null;
  rx: Pair | null;
  anchor_point: Pair | null;
  v_tl: Pair | null;
  zc: ZCircle | null;
  pc: Pair | null;
  zc_t_star: Pair | null;
  intersections: IntersectionInfo | null;
  proj_i0: [Pair | null, Pair | null] | null;
  proj_c0: [Pair | null, Pair | null] | null;
  e_a: number | null;
  e_b: number | null;
  t_samples: number[];
  l1: Pair[];
  tc: (Pair | null)[] | null;
  tl: Pair[] | null;
  zc_points: Pair[] | null;
  dsd_curve: (number | null)[] | null;
  reason: string | null;
}

export interface Crossing {
  theta: number;
  delta: number;
}

export interface EstimateRow {
  rx: Pair;
  theta_hat: number;
  delta: number;
  d2: number | null;
}

export interface MapPayload {
  kind: MapKind;
  n: number;
  from: number;
  to: number;
  is_global: boolean;
  step: number;
  tol: number;
  support: number[];
  values_a: (number | null)[];
  values_b: (number | null)[] | null;
  min_f: (number | null)[] | null;
  min_t: (number | null)[] | null;
  rx: (Pair | null)[] | null;
  ap: (Pair | null)[] | null;
  crossings: Crossing[];
  gaps: [number, number][];
  estimates: EstimateRow[] | null;
}

export interface SolvePayload {
  degree: number;
  tables: Partial<Record<MapKind, EstimateRow[]>>;
  gaps: Partial<Record<MapKind, [number, number][]>>;
  rescue_used: boolean;
}

export interface OptimizerOptions {
  method?: "grid" | "twophase";
  maxit?: number;
  temp?: number;
  tmax?: number;
  seed?: number;
}

export interface MapQuery extends OptimizerOptions {
  id: string;
  kind: MapKind;
  from: number;
  to: number;
  n: number;
  tol?: number;
  withEstimates?: boolean;
}

export interface SolveOptions extends OptimizerOptions {
  from?: number;
  to?: number;
  n?: number;
  kinds?: MapKind[];
  tol_e?: number;
  tol_dd2?: number;
  tol_dt?: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly payload?: unknown,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

function optimizerParams(params: URLSearchParams, opts: OptimizerOptions): void {
  if (opts.method !== undefined) params.set("method", opts.method);
  if (opts.maxit !== undefined) params.set("maxit", String(opts.maxit));
  if (opts.temp !== undefined) params.set("temp", String(opts.temp));
  if (opts.tmax !== undefined) params.set("tmax", String(opts.tmax));
  if (opts.seed !== undefined) params.set("seed", String(opts.seed));
}

async function detailOf(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (body && typeof body.detail === "string") return body.detail;
  } catch {
    // non-JSON error body; fall through to the generic message
  }
  return `request failed with status ${response.status}`;
}

export class ApiClient {
  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string = "",
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((input, init) => globalThis.fetch(input, init));
  }

  private url(path: string, params?: URLSearchParams): string {
    const query = params ? `?${params.toString()}` : "";
    return `${this.baseUrl}${path}${query}`;
  }

  async createPolynomial(coefficients: (Pair | number | string)[]): Promise<{ id: string; degree: number }> {
    const response = await this.fetchImpl(this.url("/api/polynomial"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ coefficients }),
    });
    if (response.status !== 201) {
      throw new ApiError(response.status, await detailOf(response));
    }
    return (await response.json()) as { id: string; degree: number };
  }

  /**
   * Fetch the geometric frame at one angle.  A 422 carries a frame body with
   * a non-null `reason` (degenerate circle or no admissible minimizer); that
   * body is returned so the caller can draw whatever survived.
   */
  async fetchFrame(
    id: string,
    theta: number,
    opts: OptimizerOptions = {},
    signal?: AbortSignal,
  ): Promise<FramePayload> {
    const params = new URLSearchParams({ id, theta: String(theta) });
    optimizerParams(params, opts);
    const response = await this.fetchImpl(this.url("/api/frame", params), { signal });
    if (response.status === 200 || response.status === 422) {
      return (await response.json()) as FramePayload;
    }
    throw new ApiError(response.status, await detailOf(response));
  }

  async fetchMap(query: MapQuery, signal?: AbortSignal): Promise<MapPayload> {
    const params = new URLSearchParams({
      id: query.id,
      kind: query.kind,
      from: String(query.from),
      to: String(query.to),
      n: String(query.n),
    });
    if (query.tol !== undefined) params.set("tol", String(query.tol));
    if (query.withEstimates) params.set("with_estimates", "true");
    optimizerParams(params, query);
    const response = await this.fetchImpl(this.url("/api/map", params), { signal });
    if (response.status !== 200) {
      throw new ApiError(response.status, await detailOf(response));
    }
    return (await response.json()) as MapPayload;
  }

  async solve(id: string, options?: SolveOptions): Promise<SolvePayload> {
    const body: Record<string, unknown> = { id };
    if (options !== undefined) body.options = options;
    const response = await this.fetchImpl(this.url("/api/solve"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (response.status !== 200) {
      throw new ApiError(response.status, await detailOf(response));
    }
    return (await response.json()) as SolvePayload;
  }
}
