import { describe, expect, it } from "vitest";

import type { Rubric } from "../src/api";
import { previewTotal } from "../src/grading";
import {
  add,
  equals,
  formatRational,
  parseRational,
  percentDisplay,
  sum,
  ZERO,
} from "../src/rational";

describe("parseRational", () => {
  it("parses integers, fractions and decimals to the same value", () => {
    expect(equals(parseRational("3"), { num: 3n, den: 1n })).toBe(true);
    expect(equals(parseRational("7/2"), parseRational("3.5"))).toBe(true);
    expect(equals(parseRational("0.25"), { num: 1n, den: 4n })).toBe(true);
    expect(equals(parseRational("-3/6"), { num: -1n, den: 2n })).toBe(true);
  });

  it("rejects malformed input", () => {
    expect(() => parseRational("abc")).toThrow();
    expect(() => parseRational("1/0")).toThrow();
    expect(() => parseRational("")).toThrow();
  });
});

describe("formatRational", () => {
  it("renders integers bare and others as p/q", () => {
    expect(formatRational(parseRational("4/2"))).toBe("2");
    expect(formatRational(parseRational("3.5"))).toBe("7/2");
    expect(formatRational(ZERO)).toBe("0");
  });
});

describe("arithmetic", () => {
  it("adds with normalization", () => {
    expect(formatRational(add(parseRational("1/2"), parseRational("1/2")))).toBe("1");
    expect(formatRational(sum(["1/4", "1/4", "1/2"].map(parseRational)))).toBe("1");
  });
});

describe("percentDisplay", () => {
  it("renders two decimals with round-half-up", () => {
    expect(percentDisplay(parseRational("3"), parseRational("4"))).toBe("75.00");
    expect(percentDisplay(parseRational("1"), parseRational("3"))).toBe("33.33");
    expect(percentDisplay(parseRational("2"), parseRational("3"))).toBe("66.67");
    // 1/8 of 100 = 12.5 exactly at the half-cent boundary: 12.505 -> n/a;
    // exercise an exact .5 cent case: 100 * 1/800 = 0.125 -> 0.13
    expect(percentDisplay(parseRational("1"), parseRational("800"))).toBe("0.13");
    expect(percentDisplay(parseRational("4"), parseRational("4"))).toBe("100.00");
  });
});

const RUBRIC: Rubric = {
  id: "r1",
  name: "demo",
  description: "",
  predefined: false,
  max_score: "4",
  criteria: [
    {
      name: "C1",
      levels: [
        { label: "Poor", points: "1" },
        { label: "Good", points: "2" },
      ],
    },
    {
      name: "C2",
      levels: [
        { label: "Poor", points: "1" },
        { label: "Good", points: "2" },
      ],
    },
  ],
};

describe("previewTotal", () => {
  it("reports a running total while incomplete", () => {
    const p = previewTotal(RUBRIC, { C1: "Good" });
    expect(p.complete).toBe(false);
    expect(p.total).toBe("2");
    expect(p.percentDisplay).toBeNull();
  });

  it("matches the exact total and percentage once complete", () => {
    const p = previewTotal(RUBRIC, { C1: "Poor", C2: "Good" });
    expect(p.complete).toBe(true);
    expect(p.total).toBe("3");
    expect(p.percentDisplay).toBe("75.00");
  });

  it("ignores labels that do not exist in the rubric", () => {
    const p = previewTotal(RUBRIC, { C1: "Stellar", C2: "Good" });
    expect(p.complete).toBe(false);
    expect(p.total).toBe("2");
  });
});
