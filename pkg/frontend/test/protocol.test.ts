import { describe, expect, it } from "vitest";

import {
  DEFAULT_PARAMS,
  minimalChange,
  parseServerMsg,
  validateDifficulty,
} from "../src/protocol.js";

describe("validateDifficulty", () => {
  it("accepts the defaults", () => {
    expect(validateDifficulty(DEFAULT_PARAMS)).toEqual([]);
  });

  it("rejects overcook at or below cook time client-side", () => {
    const p = { ...DEFAULT_PARAMS, overcook_time_s: DEFAULT_PARAMS.cook_time_s };
    expect(validateDifficulty(p)).toContain("overcook time must exceed cook time");
  });

  it("rejects non-positive durations and non-integer counts", () => {
    const p = { ...DEFAULT_PARAMS, memorize_duration_s: 0, dimsum_item_count: 2.5 };
    const problems = validateDifficulty(p);
    expect(problems.some((m) => m.includes("memorize"))).toBe(true);
    expect(problems.some((m) => m.includes("item count"))).toBe(true);
  });
});

describe("minimalChange", () => {
  const VALUES = [1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 5000, 10000];

  it("solves the reference case", () => {
    expect(minimalChange(125, VALUES)).toEqual(
      new Map([
        [100, 1],
        [20, 1],
        [5, 1],
      ]),
    );
  });

  it("returns empty for zero", () => {
    expect(minimalChange(0, VALUES).size).toBe(0);
  });

  it("always sums to the requested amount", () => {
    for (let x = 1; x <= 500; x++) {
      let total = 0;
      for (const [v, n] of minimalChange(x, VALUES)) total += v * n;
      expect(total).toBe(x);
    }
  });
});

describe("parseServerMsg", () => {
  it("accepts the four server types", () => {
    for (const type of ["snapshot", "scent", "metrics", "error"]) {
      expect(parseServerMsg(JSON.stringify({ type })).type).toBe(type);
    }
  });

  it("rejects client-only and unknown types", () => {
    expect(() => parseServerMsg(JSON.stringify({ type: "frame" }))).toThrow();
    expect(() => parseServerMsg(JSON.stringify({ type: "bogus" }))).toThrow();
  });
});
