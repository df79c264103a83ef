import { describe, expect, it } from "vitest";

import { catalog, computeMetrics, runSuite } from "../src/index.js";

describe("boundary validation happens before any file is written", () => {
  it("rejects 1-d input", () => {
    expect(() => computeMetrics([1, 2, 3] as unknown as number[][], [[1]])).toThrow(
      /2-d array/,
    );
  });

  it("rejects empty input", () => {
    expect(() => computeMetrics([], [[1]])).toThrow(/2-d array/);
  });

  it("rejects NaN and infinity", () => {
    expect(() => computeMetrics([[1, NaN]], [[1, 2]])).toThrow(/finite/);
    expect(() => computeMetrics([[1, 2]], [[Infinity, 2]])).toThrow(/finite/);
  });

  it("rejects ragged rows", () => {
    expect(() => computeMetrics([[1, 2], [3]], [[1, 2]])).toThrow(/row 1/);
  });

  it("rejects column count mismatch between the two sets", () => {
    expect(() => computeMetrics([[1, 2]], [[1, 2, 3]])).toThrow(/columns/);
  });

  it("rejects schema width mismatch", () => {
    expect(() =>
      computeMetrics([[1, 2]], [[1, 2]], {
        columns: [{ name: "only_one", kind: "numerical" }],
      }),
    ).toThrow(/declares 1 columns/);
  });

  it("rejects categorical codes outside the declared range", () => {
    const columns = [
      { name: "a", kind: "numerical" as const },
      { name: "b", kind: "categorical" as const, categories: 2 },
    ];
    expect(() => computeMetrics([[0.5, 5]], [[0.5, 1]], { columns })).toThrow(
      /outside \[0, 2\)/,
    );
    expect(() => computeMetrics([[0.5, 0.5]], [[0.5, 1]], { columns })).toThrow(
      /outside/,
    );
  });
});

describe("core diagnostics surface as thrown Errors", () => {
  it("propagates CLI validation text for a bad suite config", () => {
    expect(() => runSuite({ checks: ["no_such_check"], repeats: 1 })).toThrow(
      /no_such_check/,
    );
  });

  it("propagates CLI validation text for a bad catalog grid", () => {
    expect(() => catalog({ grid: 4 })).toThrow(/grid/);
  });
});

describe("catalog round-trip", () => {
  it("returns all fourteen checks with sweep cells", () => {
    const entries = catalog({ grid: 5, baseSize: 200 });
    expect(entries).toHaveLength(14);
    const ids = entries.map((e) => e.check);
    expect(ids).toContain("gaussian_mean_difference");
    expect(ids).toContain("discrete_vs_continuous");
    for (const entry of entries) {
      expect(entry.variants.length).toBeGreaterThan(0);
      for (const variant of entry.variants) {
        expect(variant.cells.length).toBeGreaterThanOrEqual(3);
        for (const cell of variant.cells) {
          expect(cell.n_real).toBeGreaterThanOrEqual(100);
          expect(cell.real.type).toBeTruthy();
        }
      }
    }
    const tabular = entries.filter((e) => e.tabular).map((e) => e.check);
    expect(tabular.sort()).toEqual([
      "discrete_vs_continuous",
      "gaussian_mean_difference_pareto",
    ]);
  });
});
