/** Group rows into per-scheme series of (x, mean, stderr) points. */

import { ResultRow } from "./csv";

export interface SeriesPoint {
  x: number;
  mean: number;
  stderr: number;
  n: number;
}

export interface Series {
  scheme: string;
  points: SeriesPoint[];
}

export function aggregateSeries(
  rows: ResultRow[],
  value: (row: ResultRow) => number
): Series[] {
  const byScheme = new Map<string, Map<number, number[]>>();
  for (const row of rows) {
    if (row.sweepValue === null) continue;
    let cells = byScheme.get(row.scheme);
    if (!cells) {
      cells = new Map();
      byScheme.set(row.scheme, cells);
    }
    let bucket = cells.get(row.sweepValue);
    if (!bucket) {
      bucket = [];
      cells.set(row.sweepValue, bucket);
    }
    bucket.push(value(row));
  }
  const series: Series[] = [];
  for (const scheme of [...byScheme.keys()].sort()) {
    const cells = byScheme.get(scheme)!;
    const points: SeriesPoint[] = [...cells.entries()]
      .sort((a, b) => a[0] - b[0])
      .map(([x, values]) => {
        const n = values.length;
        const mean = values.reduce((s, v) => s + v, 0) / n;
        let stderr = 0;
        if (n > 1) {
          const variance =
            values.reduce((s, v) => s + (v - mean) * (v - mean), 0) / (n - 1);
          stderr = Math.sqrt(variance / n);
        }
        return { x, mean, stderr, n };
      });
    series.push({ scheme, points });
  }
  return series;
}
