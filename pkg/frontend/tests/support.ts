/** Deterministic fixture generation, independent of the binding code. */

export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Standard normal via Box-Muller on the given uniform source. */
export function gaussian(uniform: () => number): number {
  let u = 0;
  while (u === 0) u = uniform();
  const v = uniform();
  return Math.sqrt(-2.0 * Math.log(u)) * Math.cos(2.0 * Math.PI * v);
}

export function gaussianMatrix(
  uniform: () => number,
  n: number,
  d: number,
  shift = 0,
  scale = 1,
): number[][] {
  const rows: number[][] = [];
  for (let i = 0; i < n; i++) {
    const row: number[] = [];
    for (let j = 0; j < d; j++) {
      row.push(shift + scale * gaussian(uniform));
    }
    rows.push(row);
  }
  return rows;
}
