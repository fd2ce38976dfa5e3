/** CLI: render one figure from an experiment CSV.
 *
 *   node dist/cli.js --input results.csv --kind load_vs_g --out figure.svg
 */

import * as fs from "fs";

import { CsvSchemaError, parseResultsCsv } from "./csv";
import { FIGURE_KINDS, FigureKind, renderFigure } from "./figures";

export interface PlotSpec {
  input: string;
  kind: FigureKind;
  out: string;
}

export function parseArgs(argv: string[]): PlotSpec {
  const opts = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (!flag.startsWith("--") || value === undefined) {
      throw new Error(`malformed arguments near ${flag}`);
    }
    opts.set(flag.slice(2), value);
  }
  for (const key of ["input", "kind", "out"]) {
    if (!opts.has(key)) {
      throw new Error(`missing required flag --${key}`);
    }
  }
  const kind = opts.get("kind") as FigureKind;
  if (!FIGURE_KINDS.includes(kind)) {
    throw new Error(`unknown kind ${kind}; expected one of ${FIGURE_KINDS.join(", ")}`);
  }
  return { input: opts.get("input")!, kind, out: opts.get("out")! };
}

export function runCli(argv: string[]): number {
  let spec: PlotSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  try {
    const rows = parseResultsCsv(fs.readFileSync(spec.input, "utf-8"));
    const svg = renderFigure(spec.kind, rows);
    fs.writeFileSync(spec.out, svg);
    console.log(`wrote ${spec.out} (${rows.length} rows)`);
    return 0;
  } catch (err) {
    if (err instanceof CsvSchemaError) {
      console.error(`schema error: ${err.message}`);
      return 3;
    }
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(runCli(process.argv.slice(2)));
}
