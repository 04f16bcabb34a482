/**
 * Strict reader for the simulator's CSV output.
 *
 * Both schemas are plain comma-separated text with one header row, LF line
 * endings and unquoted fields, so a split-based parser is exact.
 */

import { readFile } from "fs/promises";

export interface CsvTable {
  header: string[];
  rows: string[][];
  path: string;
}

export function parseCsv(text: string, path = "<string>"): CsvTable {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error(`${path}: empty file`);
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const fields = line.split(",");
    if (fields.length !== header.length) {
      throw new Error(
        `${path}: row ${i + 1} has ${fields.length} fields, expected ${header.length}`,
      );
    }
    return fields;
  });
  return { header, rows, path };
}

export async function readCsv(path: string): Promise<CsvTable> {
  return parseCsv(await readFile(path, "utf-8"), path);
}

/** Map column names to indices, failing with the first missing name. */
export function columnIndex(
  table: CsvTable,
  columns: readonly string[],
): Map<string, number> {
  const index = new Map<string, number>();
  for (const name of columns) {
    const at = table.header.indexOf(name);
    if (at < 0) {
      throw new Error(`${table.path}: missing column ${name}`);
    }
    index.set(name, at);
  }
  return index;
}

export function toNumber(field: string, column: string, path: string): number {
  const value = Number(field);
  if (!Number.isFinite(value)) {
    throw new Error(`${path}: cannot parse ${column} value ${JSON.stringify(field)}`);
  }
  return value;
}
