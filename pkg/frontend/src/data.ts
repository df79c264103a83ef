import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import type { Column } from "./types.js";

/** Rows-of-numbers matrix as produced by plain JS code. */
export type Matrix = readonly (readonly number[])[];

/**
 * Boundary validation: the binding refuses anything the core would reject,
 * with the failure named before any file is written.
 */
export function validateMatrix(label: string, data: Matrix): void {
  if (!Array.isArray(data) || data.length === 0 || !Array.isArray(data[0])) {
    throw new TypeError(`${label} must be a non-empty 2-d array of numbers`);
  }
  const width = data[0].length;
  if (width === 0) {
    throw new TypeError(`${label} must have at least one column`);
  }
  for (let i = 0; i < data.length; i++) {
    const row = data[i];
    if (!Array.isArray(row) || row.length !== width) {
      throw new TypeError(
        `${label} row ${i} has ${Array.isArray(row) ? row.length : "no"} entries, expected ${width}`,
      );
    }
    for (let j = 0; j < width; j++) {
      const v = row[j];
      if (typeof v !== "number" || !Number.isFinite(v)) {
        throw new RangeError(`${label}[${i}][${j}] is not a finite number: ${v}`);
      }
    }
  }
}

export function defaultColumns(width: number): Column[] {
  return Array.from({ length: width }, (_, j) => ({
    name: `x${j}`,
    kind: "numerical" as const,
  }));
}

function checkColumns(columns: Column[], width: number): void {
  if (columns.length !== width) {
    throw new TypeError(
      `schema declares ${columns.length} columns but data has ${width}`,
    );
  }
  for (const col of columns) {
    if (col.kind === "categorical" && (!Number.isInteger(col.categories) || col.categories < 1)) {
      throw new TypeError(`column ${col.name}: categories must be a positive integer`);
    }
  }
}

/**
 * Serialize one cell exactly as the core's writer does: integer codes for
 * categoricals, shortest round-trip decimal for numericals.  JS and Python
 * both use shortest-representation float formatting, so values survive the
 * trip through text unchanged.
 */
function formatCell(col: Column, v: number, rowIdx: number): string {
  if (col.kind === "categorical") {
    if (!Number.isInteger(v) || v < 0 || v >= col.categories) {
      throw new RangeError(
        `column ${col.name} row ${rowIdx}: code ${v} outside [0, ${col.categories})`,
      );
    }
    return String(v);
  }
  return String(v);
}

export function writeCsv(path: string, columns: Column[], data: Matrix): void {
  const lines = [columns.map((c) => c.name).join(",")];
  for (let i = 0; i < data.length; i++) {
    const row = data[i] as readonly number[];
    lines.push(columns.map((c, j) => formatCell(c, row[j] as number, i)).join(","));
  }
  writeFileSync(path, lines.join("\n") + "\n", "utf-8");
}

export function writeSchema(path: string, columns: Column[]): void {
  const cols = columns.map((c) =>
    c.kind === "categorical"
      ? { name: c.name, kind: c.kind, categories: c.categories }
      : { name: c.name, kind: c.kind },
  );
  writeFileSync(path, JSON.stringify({ columns: cols }) + "\n", "utf-8");
}

/**
 * Write a real/synthetic pair plus shared schema into a fresh temp dir.
 * Returns the three paths and a cleanup callback.
 */
export function writePair(
  real: Matrix,
  synthetic: Matrix,
  columns?: Column[],
): {
  realPath: string;
  syntheticPath: string;
  schemaPath: string;
  cleanup: () => void;
} {
  validateMatrix("real", real);
  validateMatrix("synthetic", synthetic);
  const width = (real[0] as readonly number[]).length;
  const synWidth = (synthetic[0] as readonly number[]).length;
  if (synWidth !== width) {
    throw new TypeError(`real has ${width} columns but synthetic has ${synWidth}`);
  }
  const cols = columns ?? defaultColumns(width);
  checkColumns(cols, width);

  const dir = mkdtempSync(join(tmpdir(), "gensanity-"));
  const realPath = join(dir, "real.csv");
  const syntheticPath = join(dir, "synthetic.csv");
  const schemaPath = join(dir, "schema.json");
  writeCsv(realPath, cols, real);
  writeCsv(syntheticPath, cols, synthetic);
  writeSchema(schemaPath, cols);
  return {
    realPath,
    syntheticPath,
    schemaPath,
    cleanup: () => rmSync(dir, { recursive: true, force: true }),
  };
}
