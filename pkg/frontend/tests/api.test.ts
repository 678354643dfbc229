import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

interface Call {
  url: string;
  init?: RequestInit;
}

function stubFetch(status: number, body: unknown) {
  const calls: Call[] = [];
  const fetchImpl = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({ url, init });
    const text = typeof body === "string" ? body : JSON.stringify(body);
    return new Response(text, { status });
  };
  return { calls, fetchImpl };
}

function query(url: string): URLSearchParams {
  return new URL(url, "http://test").searchParams;
}

describe("createPolynomial", () => {
  it("posts the coefficient list and returns the session", async () => {
    const { calls, fetchImpl } = stubFetch(201, { id: "abc123", degree: 3 });
    const client = new ApiClient("", fetchImpl);
    const out = await client.createPolynomial([[1, 1], [2, 2]]);
    expect(out).toEqual({ id: "abc123", degree: 3 });
    expect(calls).toHaveLength(1);
    expect(calls[0].url).toBe("/api/polynomial");
    expect(calls[0].init?.method).toBe("POST");
    expect(JSON.parse(calls[0].init?.body as string)).toEqual({
      coefficients: [[1, 1], [2, 2]],
    });
  });

  it("surfaces the server detail on rejection", async () => {
    const { fetchImpl } = stubFetch(400, { detail: "degree >= 2 required" });
    const client = new ApiClient("", fetchImpl);
    await expect(client.createPolynomial([[1, 0]])).rejects.toMatchObject({
      status: 400,
      message: "degree >= 2 required",
    });
  });
});

describe("fetchFrame", () => {
  it("encodes id and angle in the query string", async () => {
    const { calls, fetchImpl } = stubFetch(200, { degree: 7, reason: null });
    const client = new ApiClient("", fetchImpl);
    await client.fetchFrame("abc", 0.73136);
    const params = query(calls[0].url);
    expect(calls[0].url.startsWith("/api/frame?")).toBe(true);
    expect(params.get("id")).toBe("abc");
    expect(params.get("theta")).toBe("0.73136");
    expect(params.get("seed")).toBeNull();
  });

  it("passes optimizer options through verbatim", async () => {
    const { calls, fetchImpl } = stubFetch(200, { degree: 7, reason: null });
    const client = new ApiClient("", fetchImpl);
    await client.fetchFrame("abc", -2.5, { method: "twophase", seed: 42, tmax: 8 });
    const params = query(calls[0].url);
    expect(params.get("method")).toBe("twophase");
    expect(params.get("seed")).toBe("42");
    expect(params.get("tmax")).toBe("8");
  });

  it("returns the degenerate body on 422 so panels can draw a banner", async () => {
    const { fetchImpl } = stubFetch(422, {
      degree: 3,
      t_star: null,
      reason: "degenerate z-circumference: the base line passes through the origin",
    });
    const client = new ApiClient("", fetchImpl);
    const frame = await client.fetchFrame("abc", 0);
    expect(frame.reason).toMatch(/degenerate/);
  });

  it("throws ApiError elsewhere", async () => {
    const { fetchImpl } = stubFetch(404, { detail: "unknown id" });
    const client = new ApiClient("", fetchImpl);
    const err = await client.fetchFrame("nope", 0).catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(404);
    expect((err as ApiError).message).toBe("unknown id");
  });

  it("forwards the abort signal", async () => {
    const { calls, fetchImpl } = stubFetch(200, { degree: 7, reason: null });
    const client = new ApiClient("", fetchImpl);
    const controller = new AbortController();
    await client.fetchFrame("abc", 1, {}, controller.signal);
    expect(calls[0].init?.signal).toBe(controller.signal);
  });
});

describe("fetchMap", () => {
  it("builds the regional query used by drag-to-zoom", async () => {
    const { calls, fetchImpl } = stubFetch(200, { kind: "e", crossings: [] });
    const client = new ApiClient("", fetchImpl);
    await client.fetchMap({
      id: "abc",
      kind: "e",
      from: 3.0,
      to: 3.1,
      n: 1000,
      withEstimates: true,
    });
    const params = query(calls[0].url);
    expect(calls[0].url.startsWith("/api/map?")).toBe(true);
    expect(params.get("kind")).toBe("e");
    expect(params.get("from")).toBe("3");
    expect(params.get("to")).toBe("3.1");
    expect(params.get("n")).toBe("1000");
    expect(params.get("with_estimates")).toBe("true");
  });

  it("omits optional parameters that were not set", async () => {
    const { calls, fetchImpl } = stubFetch(200, { kind: "dd2" });
    const client = new ApiClient("", fetchImpl);
    await client.fetchMap({ id: "abc", kind: "dd2", from: -Math.PI, to: Math.PI, n: 2500 });
    const params = query(calls[0].url);
    expect(params.get("with_estimates")).toBeNull();
    expect(params.get("tol")).toBeNull();
    expect(params.get("method")).toBeNull();
  });

  it("maps the point cap rejection onto ApiError", async () => {
    const { fetchImpl } = stubFetch(413, { detail: "n exceeds the 200000 point cap" });
    const client = new ApiClient("", fetchImpl);
    const err = await client
      .fetchMap({ id: "abc", kind: "e", from: -1, to: 1, n: 300000 })
      .catch((e: unknown) => e);
    expect((err as ApiError).status).toBe(413);
  });
});

describe("solve", () => {
  it("posts id plus options", async () => {
    const { calls, fetchImpl } = stubFetch(200, {
      degree: 3,
      tables: { e: [] },
      gaps: { e: [] },
      rescue_used: false,
    });
    const client = new ApiClient("", fetchImpl);
    const out = await client.solve("abc", { n: 1000, kinds: ["e"] });
    expect(out.rescue_used).toBe(false);
    expect(calls[0].url).toBe("/api/solve");
    expect(JSON.parse(calls[0].init?.body as string)).toEqual({
      id: "abc",
      options: { n: 1000, kinds: ["e"] },
    });
  });

  it("sends a bare id when no options are given", async () => {
    const { calls, fetchImpl } = stubFetch(200, {
      degree: 2,
      tables: {},
      gaps: {},
      rescue_used: false,
    });
    const client = new ApiClient("", fetchImpl);
    await client.solve("abc");
    expect(JSON.parse(calls[0].init?.body as string)).toEqual({ id: "abc" });
  });
});

describe("error bodies", () => {
  it("falls back to a generic message when the body is not JSON", async () => {
    const { fetchImpl } = stubFetch(500, "boom");
    const client = new ApiClient("", fetchImpl);
    const err = await client.solve("abc").catch((e: unknown) => e);
    expect((err as ApiError).message).toBe("request failed with status 500");
  });

  it("prefixes the base url on every route", async () => {
    const { calls, fetchImpl } = stubFetch(201, { id: "x", degree: 4 });
    const client = new ApiClient("http://127.0.0.1:8020", fetchImpl);
    await client.createPolynomial([[1, 0], [2, 0], [3, 0], [4, 0]]);
    expect(calls[0].url).toBe("http://127.0.0.1:8020/api/polynomial");
  });
});
