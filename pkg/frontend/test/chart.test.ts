import { describe, expect, it } from "vitest";
import type { SolveBody } from "../src/api.js";
import { Rat } from "../src/rationals.js";
import {
  dominatedShrink2d,
  idealPoint2d,
  projectPoints,
  renderFrontierChart,
  staircaseArea,
  witnessLabel,
  type Pair,
} from "../src/chart.js";

function pair(x: number | [bigint, bigint], y: number | [bigint, bigint]): Pair {
  const make = (v: number | [bigint, bigint]) =>
    typeof v === "number" ? Rat.fromInt(v) : Rat.fromBigints(v[0], v[1]);
  return [make(x), make(y)];
}

function body(points: (number | string)[][], witnesses?: Record<string, number>[]): SolveBody {
  return {
    citizen_id: "walker",
    scenario_id: "base",
    method: "eps",
    dimensions: ["beauty", "health"],
    points: points.map((values, i) => ({
      values,
      witness: witnesses?.[i] ?? { street_1_2: 1 },
      alternates_count: 1,
    })),
  };
}

describe("staircaseArea", () => {
  it("sums slabs for a nondominated staircase", () => {
    // union of [0,6]x[0,6] and [0,4]x[0,7]: 36 + 4
    expect(staircaseArea([pair(6, 6), pair(4, 7)], pair(6, 7)).toJson()).toBe(40);
  });

  it("clips to the box", () => {
    expect(staircaseArea([pair(10, 10)], pair(6, 7)).toJson()).toBe(42);
  });

  it("drops points on or below the axes after clipping", () => {
    expect(staircaseArea([pair(0, 5), pair(5, 0), pair(-2, 3)], pair(6, 7)).toJson()).toBe(0);
  });

  it("ignores dominated and duplicate corners", () => {
    const withExtras = [pair(6, 6), pair(4, 7), pair(4, 7), pair(3, 5), pair(6, 6)];
    expect(staircaseArea(withExtras, pair(6, 7)).toJson()).toBe(40);
  });

  it("is zero for an empty frontier or degenerate box", () => {
    expect(staircaseArea([], pair(6, 7)).toJson()).toBe(0);
    expect(staircaseArea([pair(3, 3)], pair(0, 7)).toJson()).toBe(0);
  });

  it("stays exact on fractional corners", () => {
    // [0,1/3]x[0,3] has area 1; adding [0,2]x[0,1/2] contributes (2-1/3)*1/2
    const area = staircaseArea([pair([1n, 3n], 3), pair(2, [1n, 2n])], pair(2, 3));
    expect(area.toJson()).toBe("11/6");
  });
});

describe("dominatedShrink2d and idealPoint2d", () => {
  it("matches the worked example", () => {
    const before = [pair(6, 6), pair(4, 7)];
    const after = [pair(5, 6), pair(4, 7)];
    expect(dominatedShrink2d(before, after).toJson()).toBe(6);
  });

  it("uses the before ideal point as the box", () => {
    expect(idealPoint2d([pair(6, 6), pair(4, 7)]).map((r) => r.toJson())).toEqual([6, 7]);
    // an after point beyond the box is clipped, so gains outside it do not count
    const shrink = dominatedShrink2d([pair(2, 2)], [pair(50, 50)]);
    expect(shrink.toJson()).toBe(0);
  });

  it("treats an empty before frontier as the origin box", () => {
    expect(idealPoint2d([]).map((r) => r.toJson())).toEqual([0, 0]);
    expect(dominatedShrink2d([], [pair(3, 3)]).toJson()).toBe(0);
  });

  it("loses the whole region when the after frontier is empty", () => {
    expect(dominatedShrink2d([pair(6, 6), pair(4, 7)], []).toJson()).toBe(40);
  });
});

describe("renderFrontierChart", () => {
  it("embeds the served point sets verbatim in data-points", () => {
    const before = body([
      [6, 6],
      [4, 7],
    ]);
    const after = body([
      [5, 6],
      [4, 7],
    ]);
    const chart = renderFrontierChart(before, after, { xDim: 0, yDim: 1 });
    expect(chart.beforeData).toBe(JSON.stringify(before.points.map((p) => p.values)));
    expect(chart.afterData).toBe(JSON.stringify(after.points.map((p) => p.values)));
    // attribute embedding only XML-escapes; unescaping restores the bytes
    const matches = [...chart.svg.matchAll(/data-points="([^"]*)"/g)];
    expect(matches).toHaveLength(2);
    const unescape = (s: string) => s.replace(/&quot;/g, '"').replace(/&amp;/g, "&");
    expect(unescape(matches[0]![1]!)).toBe(chart.beforeData);
    expect(unescape(matches[1]![1]!)).toBe(chart.afterData!);
  });

  it("preserves fraction tokens through rendering", () => {
    const before = body([["13/2", 6]]);
    const chart = renderFrontierChart(before, null, { xDim: 0, yDim: 1 });
    expect(chart.beforeData).toBe('[["13/2",6]]');
    expect(chart.afterData).toBeNull();
    expect(chart.shadedArea).toBeNull();
  });

  it("computes the exact shaded area for the before/after pair", () => {
    const chart = renderFrontierChart(
      body([
        [6, 6],
        [4, 7],
      ]),
      body([
        [5, 6],
        [4, 7],
      ]),
      { xDim: 0, yDim: 1 },
    );
    expect(chart.shadedArea!.toJson()).toBe(6);
    expect(chart.svg).toContain('fill-rule="evenodd"');
    expect(chart.svg).toContain('class="shrink"');
  });

  it("flags an empty after frontier and shades the whole lost region", () => {
    const chart = renderFrontierChart(
      body([
        [6, 6],
        [4, 7],
      ]),
      body([]),
      { xDim: 0, yDim: 1 },
    );
    expect(chart.shadedArea!.toJson()).toBe(40);
    expect(chart.svg).toContain("after frontier is empty");
    expect(chart.afterData).toBe("[]");
  });

  it("reports no feasible doings when both frontiers are empty", () => {
    const chart = renderFrontierChart(body([]), body([]), { xDim: 0, yDim: 1 });
    expect(chart.svg).toContain("no feasible doings");
    expect(chart.shadedArea!.toJson()).toBe(0);
  });

  it("writes witness tooltips and axis names", () => {
    const chart = renderFrontierChart(
      body([[6, 6]], [{ street_1_2: 1, street_2_3: 2 }]),
      null,
      { xDim: 0, yDim: 1 },
    );
    expect(chart.svg).toContain("street_2_3 x2");
    expect(chart.svg).toContain(">beauty</text>");
    expect(chart.svg).toContain(">health</text>");
  });

  it("projects the chosen dimension pair", () => {
    const wide: SolveBody = {
      citizen_id: "c",
      scenario_id: "base",
      method: "eps",
      dimensions: ["a", "b", "c"],
      points: [{ values: [1, 2, 3], witness: {}, alternates_count: null }],
    };
    const pairs = projectPoints(wide, 2, 0);
    expect(pairs[0]![0].toJson()).toBe(3);
    expect(pairs[0]![1].toJson()).toBe(1);
  });
});

describe("witnessLabel", () => {
  it("renders counts and alternates", () => {
    expect(witnessLabel({ values: [], witness: { b: 2, a: 1 }, alternates_count: 3 })).toBe(
      "a, b x2 (+2 alternate doings)",
    );
  });

  it("handles the empty doing", () => {
    expect(witnessLabel({ values: [], witness: {}, alternates_count: null })).toBe("(do nothing)");
  });
});
