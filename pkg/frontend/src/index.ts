import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { runCli } from "./cli.js";
import { writePair, type Matrix } from "./data.js";
import {
  METRIC_IDS,
  type CatalogEntry,
  type CatalogOptions,
  type ComputeMetricsOptions,
  type Curve,
  type MetricId,
  type MetricValues,
  type SuiteOptions,
  type SuiteResults,
  type SuiteTables,
  type Verdict,
  type VerdictLetter,
} from "./types.js";

export * from "./types.js";
export { cliCommand } from "./cli.js";
export { defaultColumns, validateMatrix, type Matrix } from "./data.js";

/**
 * Score a real/synthetic pair with every metric the CLI reports.
 *
 * The arrays are written to CSV with shortest-round-trip formatting and
 * handed to `gensanity eval`, so the values are exactly the core's; no
 * numerical logic lives on this side of the boundary.
 */
export function computeMetrics(
  real: Matrix,
  synthetic: Matrix,
  options: ComputeMetricsOptions = {},
): MetricValues {
  const files = writePair(real, synthetic, options.columns);
  try {
    const out = runCli([
      "eval",
      "--real",
      files.realPath,
      "--synthetic",
      files.syntheticPath,
      "--schema",
      files.schemaPath,
    ]);
    const parsed = JSON.parse(out) as Record<string, number>;
    const values = {} as MetricValues;
    for (const id of METRIC_IDS) {
      const v = parsed[id];
      if (typeof v !== "number") {
        throw new Error(`CLI eval output is missing metric ${id}`);
      }
      values[id] = v;
    }
    return values;
  } finally {
    files.cleanup();
  }
}

function suiteArgs(options: SuiteOptions, outDir: string): string[] {
  const args = ["run", "--out", outDir];
  if (options.seed !== undefined) args.push("--seed", String(options.seed));
  if (options.repeats !== undefined) args.push("--repeats", String(options.repeats));
  if (options.checks !== undefined) args.push("--checks", options.checks.join(","));
  if (options.metrics !== undefined) args.push("--metrics", options.metrics.join(","));
  if (options.embedding !== undefined) args.push("--embedding", options.embedding);
  if (options.workers !== undefined) args.push("--workers", String(options.workers));
  if (options.baseSize !== undefined) args.push("--base-size", String(options.baseSize));
  if (options.grid !== undefined) args.push("--grid", String(options.grid));
  if (options.sweepMin !== undefined) args.push("--sweep-min", String(options.sweepMin));
  if (options.sweepMax !== undefined) args.push("--sweep-max", String(options.sweepMax));
  if (options.fast) args.push("--fast");
  return args;
}

interface RawBundle {
  config: Record<string, unknown>;
  effective: { grid: number; repeats: number };
  catalog_sha256: string;
  criteria_sha256: string;
  curves: {
    check: string;
    variant: string;
    row: string;
    metric: MetricId;
    log_x: boolean;
    xs: number[];
    values: (number | null)[][];
    error: string | null;
  }[];
  verdicts: {
    row: string;
    desideratum: string;
    metric: MetricId;
    letter: VerdictLetter;
    detail?: string;
  }[];
}

/**
 * Run the sanity-check suite through `gensanity run` and parse everything
 * it exported.  Without `out` the export goes to a temp dir that is removed
 * once parsed; pass `out` to keep the files.
 */
export function runSuite(options: SuiteOptions = {}): SuiteResults {
  const keepDir = options.out !== undefined;
  const outDir = options.out ?? mkdtempSync(join(tmpdir(), "gensanity-run-"));
  try {
    runCli(suiteArgs(options, outDir));
    const bundle = JSON.parse(
      readFileSync(join(outDir, "results.json"), "utf-8"),
    ) as RawBundle;

    const curves: Curve[] = bundle.curves.map((c) => ({
      check: c.check,
      variant: c.variant,
      row: c.row,
      metric: c.metric,
      logX: c.log_x,
      xs: c.xs,
      values: c.values,
      error: c.error,
    }));
    const verdicts: Verdict[] = bundle.verdicts.map((v) => ({
      row: v.row,
      desideratum: v.desideratum,
      metric: v.metric,
      letter: v.letter,
      detail: v.detail ?? "",
    }));
    const byCell = new Map<string, VerdictLetter>();
    for (const v of verdicts) {
      byCell.set(`${v.row}${v.desideratum}${v.metric}`, v.letter);
    }
    const tables: SuiteTables = {
      fidelity: {
        markdown: readFileSync(join(outDir, "table_fidelity.md"), "utf-8"),
        csv: readFileSync(join(outDir, "table_fidelity.csv"), "utf-8"),
      },
      diversity: {
        markdown: readFileSync(join(outDir, "table_diversity.md"), "utf-8"),
        csv: readFileSync(join(outDir, "table_diversity.csv"), "utf-8"),
      },
    };
    return {
      config: bundle.config,
      effective: bundle.effective,
      catalogSha256: bundle.catalog_sha256,
      criteriaSha256: bundle.criteria_sha256,
      curves,
      verdicts,
      tables,
      outDir: keepDir ? outDir : null,
      letter: (row, desideratum, metric) =>
        byCell.get(`${row}${desideratum}${metric}`),
    };
  } finally {
    if (!keepDir) rmSync(outDir, { recursive: true, force: true });
  }
}

/** Fetch the check catalog as the CLI prints it. */
export function catalog(options: CatalogOptions = {}): CatalogEntry[] {
  const args = ["catalog"];
  if (options.baseSize !== undefined) args.push("--base-size", String(options.baseSize));
  if (options.grid !== undefined) args.push("--grid", String(options.grid));
  if (options.sweepMin !== undefined) args.push("--sweep-min", String(options.sweepMin));
  if (options.sweepMax !== undefined) args.push("--sweep-max", String(options.sweepMax));
  return JSON.parse(runCli(args)) as CatalogEntry[];
}

/* The CLI, CSV columns, and docs all use snake_case identifiers; mirror
   them here so either naming style finds the entry points. */
export const compute_metrics = computeMetrics;
export const run_suite = runSuite;
