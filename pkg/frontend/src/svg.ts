/** Minimal SVG line-chart renderer: mean lines with error bands, optional
 * flat baseline rules, and one faint dot per underlying trial row. */

import { Series } from "./aggregate";

export interface ScatterPoint {
  scheme: string;
  x: number;
  y: number;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  /** schemes drawn as dashed horizontal rules at their overall mean */
  flatSchemes?: string[];
  scatter?: ScatterPoint[];
  logX?: boolean;
  width?: number;
  height?: number;
}

const COLORS = ["#1f6fb2", "#c44e52", "#55a868", "#8172b2", "#937860"];
const MARGIN = { top: 40, right: 150, bottom: 50, left: 70 };

function niceTicks(lo: number, hi: number, count: number): number[] {
  if (hi === lo) {
    return [lo];
  }
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const scaled = span / count / step;
  const unit = scaled >= 5 ? 10 : scaled >= 2 ? 5 : scaled >= 1 ? 2 : 1;
  const tick = unit * step;
  const start = Math.ceil(lo / tick) * tick;
  const ticks: number[] = [];
  for (let v = start; v <= hi + tick * 1e-9; v += tick) {
    ticks.push(parseFloat(v.toPrecision(10)));
  }
  return ticks;
}

function fmt(value: number): string {
  return parseFloat(value.toPrecision(6)).toString();
}

export function renderChart(spec: ChartSpec): string {
  const width = spec.width ?? 760;
  const height = spec.height ?? 480;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const flat = new Set(spec.flatSchemes ?? []);
  const tx = (v: number) => (spec.logX ? Math.log2(v) : v);

  const xs: number[] = [];
  const ys: number[] = [];
  for (const s of spec.series) {
    for (const p of s.points) {
      xs.push(tx(p.x));
      ys.push(p.mean + p.stderr, p.mean - p.stderr);
    }
  }
  for (const p of spec.scatter ?? []) {
    xs.push(tx(p.x));
    ys.push(p.y);
  }
  if (xs.length === 0) {
    throw new Error("nothing to plot");
  }
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  let yLo = Math.min(0, ...ys);
  let yHi = Math.max(...ys);
  if (xHi === xLo) {
    xLo -= 0.5;
    xHi += 0.5;
  }
  yHi += (yHi - yLo) * 0.05 || 1;

  const X = (v: number) => MARGIN.left + ((tx(v) - xLo) / (xHi - xLo)) * plotW;
  const Y = (v: number) => MARGIN.top + plotH - ((v - yLo) / (yHi - yLo)) * plotH;

  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`
  );
  out.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  out.push(
    `<text x="${width / 2}" y="20" text-anchor="middle" font-size="15">${spec.title}</text>`
  );

  // axes and grid
  const xTickVals = spec.logX
    ? [...new Set(spec.series.flatMap((s) => s.points.map((p) => p.x)))].sort((a, b) => a - b)
    : niceTicks(xLo, xHi, 8);
  const yTicks = niceTicks(yLo, yHi, 6);
  for (const v of yTicks) {
    const y = Y(v);
    out.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + plotW}" y2="${y}" stroke="#ddd"/>`
    );
    out.push(
      `<text x="${MARGIN.left - 8}" y="${y + 4}" text-anchor="end">${fmt(v)}</text>`
    );
  }
  for (const v of xTickVals) {
    const x = spec.logX ? X(v) : MARGIN.left + ((v - xLo) / (xHi - xLo)) * plotW;
    out.push(
      `<line x1="${x}" y1="${MARGIN.top + plotH}" x2="${x}" y2="${MARGIN.top + plotH + 5}" stroke="#333"/>`
    );
    out.push(
      `<text x="${x}" y="${MARGIN.top + plotH + 20}" text-anchor="middle">${fmt(v)}</text>`
    );
  }
  out.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top + plotH}" x2="${MARGIN.left + plotW}" ` +
      `y2="${MARGIN.top + plotH}" stroke="#333"/>`
  );
  out.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" ` +
      `y2="${MARGIN.top + plotH}" stroke="#333"/>`
  );
  out.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${height - 12}" text-anchor="middle">${spec.xLabel}</text>`
  );
  out.push(
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${spec.yLabel}</text>`
  );

  const color = new Map(spec.series.map((s, i) => [s.scheme, COLORS[i % COLORS.length]]));

  // faint per-trial dots first so lines draw over them
  for (const p of spec.scatter ?? []) {
    out.push(
      `<circle class="trial-point" cx="${X(p.x).toFixed(2)}" cy="${Y(p.y).toFixed(2)}" ` +
        `r="1.6" fill="${color.get(p.scheme) ?? "#999"}" fill-opacity="0.25"/>`
    );
  }

  let legendY = MARGIN.top + 8;
  for (const s of spec.series) {
    const c = color.get(s.scheme)!;
    if (flat.has(s.scheme)) {
      // flat reference scheme: one dashed rule at the overall mean
      const all = s.points.reduce(
        (acc, p) => ({ sum: acc.sum + p.mean * p.n, n: acc.n + p.n }),
        { sum: 0, n: 0 }
      );
      const y = Y(all.sum / all.n);
      out.push(
        `<line class="baseline-rule" x1="${MARGIN.left}" y1="${y}" ` +
          `x2="${MARGIN.left + plotW}" y2="${y}" stroke="${c}" stroke-width="1.5" ` +
          `stroke-dasharray="7 4"/>`
      );
    } else {
      if (s.points.some((p) => p.stderr > 0)) {
        const upper = s.points.map((p) => `${X(p.x).toFixed(2)},${Y(p.mean + p.stderr).toFixed(2)}`);
        const lower = s.points
          .slice()
          .reverse()
          .map((p) => `${X(p.x).toFixed(2)},${Y(p.mean - p.stderr).toFixed(2)}`);
        out.push(
          `<polygon class="stderr-band" points="${upper.join(" ")} ${lower.join(" ")}" ` +
            `fill="${c}" fill-opacity="0.15"/>`
        );
      }
      const path = s.points
        .map((p) => `${X(p.x).toFixed(2)},${Y(p.mean).toFixed(2)}`)
        .join(" ");
      out.push(
        `<polyline class="mean-line" points="${path}" fill="none" stroke="${c}" stroke-width="2"/>`
      );
      for (const p of s.points) {
        out.push(
          `<circle class="mean-point" cx="${X(p.x).toFixed(2)}" cy="${Y(p.mean).toFixed(2)}" ` +
            `r="3.2" fill="${c}"/>`
        );
      }
    }
    out.push(
      `<line x1="${width - 135}" y1="${legendY}" x2="${width - 112}" y2="${legendY}" ` +
        `stroke="${c}" stroke-width="2"${flat.has(s.scheme) ? ' stroke-dasharray="7 4"' : ""}/>`
    );
    out.push(`<text x="${width - 106}" y="${legendY + 4}">${s.scheme}</text>`);
    legendY += 18;
  }
  out.push("</svg>");
  return out.join("\n");
}
