/** The three figure families, all built from the same CSV schema. */

import { aggregateSeries, Series } from "./aggregate";
import { ResultRow } from "./csv";
import { renderChart, ScatterPoint } from "./svg";

export type FigureKind = "load_vs_g" | "time_vs_capacity" | "runtime_vs_size";

export const FIGURE_KINDS: FigureKind[] = [
  "load_vs_g",
  "time_vs_capacity",
  "runtime_vs_size",
];

/** Schemes whose result does not depend on the batch size g. */
const FLAT_IN_G = ["mds", "mgl"];

function scatterOf(rows: ResultRow[], value: (r: ResultRow) => number): ScatterPoint[] {
  return rows
    .filter((r) => r.sweepValue !== null)
    .map((r) => ({ scheme: r.scheme, x: r.sweepValue as number, y: value(r) }));
}

export function renderFigure(kind: FigureKind, rows: ResultRow[]): string {
  if (rows.length === 0) {
    throw new Error("no data rows to plot");
  }
  if (kind === "load_vs_g") {
    const value = (r: ResultRow) => r.objectiveMessageUnits;
    return renderChart({
      title: "Worst-case link load vs batch size",
      xLabel: "g (max messages per batch)",
      yLabel: "max-link load (message units)",
      series: aggregateSeries(rows, value),
      flatSchemes: FLAT_IN_G,
      scatter: scatterOf(rows, value),
    });
  }
  if (kind === "time_vs_capacity") {
    const value = (r: ResultRow) => r.objectiveMessageUnits;
    return renderChart({
      title: "Delivery time vs edge capacity",
      xLabel: "edge capacity (bits per channel use)",
      yLabel: "delivery time (channel uses)",
      series: aggregateSeries(rows, value),
      scatter: scatterOf(rows, value),
      logX: true,
    });
  }
  // runtime_vs_size: solver wall-clock against the sweep variable
  const value = (r: ResultRow) => r.wallclockMs;
  return renderChart({
    title: "Solver wall-clock vs problem size",
    xLabel: rows[0].sweepName === "g" ? "g (max messages per batch)" : rows[0].sweepName,
    yLabel: "wall-clock (ms)",
    series: aggregateSeries(rows, value),
    scatter: scatterOf(rows, value),
  });
}
