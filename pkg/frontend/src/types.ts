/** Stable metric identifiers, in the order the CLI reports them. */
export const METRIC_IDS = [
  "iprec",
  "irec",
  "density",
  "coverage",
  "iap",
  "ibr",
  "cprec",
  "crec",
  "symprec",
  "symrec",
  "pprec",
  "prec_p",
] as const;

export type MetricId = (typeof METRIC_IDS)[number];

export type MetricValues = Record<MetricId, number>;

/** Column description matching the schema sidecar the CLI reads. */
export type Column =
  | { name: string; kind: "numerical" }
  | { name: string; kind: "categorical"; categories: number };

export interface ComputeMetricsOptions {
  /**
   * Column schema for the two tables.  Defaults to all-numerical columns
   * named x0..x{m-1}.  Categorical columns must hold integer codes in
   * [0, categories).
   */
  columns?: Column[];
}

export interface SuiteOptions {
  seed?: number;
  repeats?: number;
  /** Check ids to run; omit for the full catalog. */
  checks?: string[];
  /** Metric ids to evaluate; omit for all twelve. */
  metrics?: MetricId[];
  embedding?: "simple" | "one-class";
  workers?: number;
  baseSize?: number;
  grid?: number;
  sweepMin?: number;
  sweepMax?: number;
  /** Halve repeats and coarsen sweeps for smoke runs. */
  fast?: boolean;
  /**
   * Directory to export into.  Omit for a temporary directory that is
   * deleted once the results are parsed.
   */
  out?: string;
}

export type VerdictLetter = "T" | "F" | "H" | "L" | "E";

export interface Verdict {
  row: string;
  desideratum: string;
  metric: MetricId;
  letter: VerdictLetter;
  detail: string;
}

export interface Curve {
  check: string;
  variant: string;
  row: string;
  metric: MetricId;
  logX: boolean;
  xs: number[];
  /** One inner array per sweep position, one entry per repeat; null = NaN. */
  values: (number | null)[][];
  error: string | null;
}

export interface SuiteTables {
  fidelity: { markdown: string; csv: string };
  diversity: { markdown: string; csv: string };
}

export interface SuiteResults {
  /** The configuration echo from the results bundle. */
  config: Record<string, unknown>;
  effective: { grid: number; repeats: number };
  catalogSha256: string;
  criteriaSha256: string;
  curves: Curve[];
  verdicts: Verdict[];
  tables: SuiteTables;
  /** Export directory, when the caller asked for one; otherwise null. */
  outDir: string | null;
  /** Verdict letter at (row, desideratum, metric), or undefined. */
  letter(row: string, desideratum: string, metric: MetricId): VerdictLetter | undefined;
}

/** Distribution descriptions are passed through untouched. */
export type DistributionSpec = { type: string } & Record<string, unknown>;

export interface CatalogCell {
  x: number;
  real: DistributionSpec;
  synthetic: DistributionSpec;
  n_real: number;
  n_synthetic: number;
}

export interface CatalogVariant {
  name: string;
  row: string;
  log_x: boolean;
  cells: CatalogCell[];
}

export interface CatalogEntry {
  check: string;
  title: string;
  tabular: boolean;
  variants: CatalogVariant[];
}

export interface CatalogOptions {
  baseSize?: number;
  grid?: number;
  sweepMin?: number;
  sweepMax?: number;
}
