/** Parsing for the experiment CSV emitted by the simulator harness. */

export interface ResultRow {
  scheme: string;
  sweepName: string;
  sweepValue: number | null;
  trial: number;
  seed: string;
  objectiveMessageUnits: number;
  objectiveFileUnits: number;
  wallclockMs: number;
}

export const REQUIRED_COLUMNS = [
  "scheme",
  "sweep_name",
  "sweep_value",
  "trial",
  "seed",
  "objective_message_units",
  "objective_file_units",
  "wallclock_ms",
] as const;

export class CsvSchemaError extends Error {}

export function parseResultsCsv(text: string): ResultRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new CsvSchemaError("empty CSV: no header row");
  }
  const header = lines[0].split(",");
  const index = new Map(header.map((name, i) => [name, i]));
  for (const column of REQUIRED_COLUMNS) {
    if (!index.has(column)) {
      throw new CsvSchemaError(`missing column: ${column}`);
    }
  }
  const at = (fields: string[], column: string) => fields[index.get(column)!];
  const rows: ResultRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    if (fields.length < header.length) {
      throw new CsvSchemaError(`row ${i} has ${fields.length} fields, expected ${header.length}`);
    }
    const sweepRaw = at(fields, "sweep_value");
    rows.push({
      scheme: at(fields, "scheme"),
      sweepName: at(fields, "sweep_name"),
      sweepValue: sweepRaw === "" ? null : parseFloat(sweepRaw),
      trial: parseInt(at(fields, "trial"), 10),
      seed: at(fields, "seed"),
      objectiveMessageUnits: parseFloat(at(fields, "objective_message_units")),
      objectiveFileUnits: parseFloat(at(fields, "objective_file_units")),
      wallclockMs: parseFloat(at(fields, "wallclock_ms")),
    });
  }
  return rows;
}
