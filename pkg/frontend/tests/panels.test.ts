import { describe, expect, it } from "vitest";

import type { FramePayload } from "../src/api.js";
import { dsdAnnotations, nearestIndex, splitSegments } from "../src/panels.js";

function frameStub(overrides: Partial<FramePayload> = {}): FramePayload {
  return {
    degree: 7,
    theta: 0.73136,
    p1: [0, 0],
    v_theta: [1, 0],
    t_star: null,
    min_d2: null,
    rx: null,
    anchor_point: null,
    v_tl: null,
    zc: null,
    pc: null,
    zc_t_star: null,
    intersections: null,
    proj_i0: null,
    proj_c0: null,
    e_a: null,
    e_b: null,
    t_samples: [],
    l1: [],
    tc: null,
    tl: null,
    zc_points: null,
    dsd_curve: null,
    reason: null,
    ...overrides,
  };
}

describe("splitSegments", () => {
  it("splits a sampled series at nulls and NaNs", () => {
    expect(splitSegments([1, null, 2, 3, NaN, 4])).toEqual([
      [0, 1],
      [2, 4],
      [5, 6],
    ]);
  });

  it("keeps an unbroken series as one run", () => {
    expect(splitSegments([5, 6, 7])).toEqual([[0, 3]]);
  });

  it("returns nothing for an all-null series", () => {
    expect(splitSegments([null, null])).toEqual([]);
    expect(splitSegments([])).toEqual([]);
  });
});

describe("nearestIndex", () => {
  it("finds the closest sample to the minimizer", () => {
    expect(nearestIndex([0, 0.5, 1.0, 1.5, 2.0], 1.2465)).toBe(2);
    expect(nearestIndex([0, 0.5, 1.0, 1.5, 2.0], 1.3)).toBe(3);
  });

  it("is -1 on an empty list", () => {
    expect(nearestIndex([], 1)).toBe(-1);
  });
});

describe("dsdAnnotations", () => {
  it("formats the minimizer pair like the plots", () => {
    const frame = frameStub({
      t_star: 1.2464843578604432,
      min_d2: 0.004205858710356954,
    });
    expect(dsdAnnotations(frame)).toEqual(["t* = 1.2465", "d2(t*) = 4.2059e-3"]);
  });

  it("omits whatever is undefined", () => {
    expect(dsdAnnotations(frameStub())).toEqual([]);
    expect(dsdAnnotations(frameStub({ t_star: 2.5 }))).toEqual(["t* = 2.5000"]);
  });
});
