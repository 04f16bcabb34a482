/**
 * Time-series figure: running normalized throughput vs slot, one curve per
 * policy, averaged across every seed found in the input files.
 */

import { writeFile } from "fs/promises";

import { renderChart, Series } from "./chart.js";
import { columnIndex, readCsv } from "./csv.js";
import { toNumber } from "./csv.js";

export interface FigureSpec {
  out: string;
  title?: string;
  xLabel?: string;
  yLabel?: string;
}

const COLUMNS = ["policy", "slot", "running_norm_throughput"] as const;

export async function plotTimeseries(
  csvPaths: string[],
  spec: FigureSpec,
): Promise<string> {
  if (csvPaths.length === 0) {
    throw new Error("at least one CSV path is required");
  }
  // policy -> slot -> [sum, count]
  const acc = new Map<string, Map<number, [number, number]>>();
  let dataRows = 0;
  for (const path of csvPaths) {
    const table = await readCsv(path);
    const cols = columnIndex(table, COLUMNS);
    for (const row of table.rows) {
      const policy = row[cols.get("policy")!];
      const slot = toNumber(row[cols.get("slot")!], "slot", path);
      const value = toNumber(
        row[cols.get("running_norm_throughput")!],
        "running_norm_throughput",
        path,
      );
      let bySlot = acc.get(policy);
      if (!bySlot) {
        bySlot = new Map();
        acc.set(policy, bySlot);
      }
      const cell = bySlot.get(slot);
      if (cell) {
        cell[0] += value;
        cell[1] += 1;
      } else {
        bySlot.set(slot, [value, 1]);
      }
      dataRows += 1;
    }
  }
  if (dataRows === 0) {
    throw new Error("no data rows");
  }

  const series: Series[] = [...acc.keys()].sort().map((policy) => {
    const bySlot = acc.get(policy)!;
    const points = [...bySlot.entries()]
      .sort((a, b) => a[0] - b[0])
      .map(([slot, [sum, count]]) => ({ x: slot, y: sum / count }));
    return { label: policy, points };
  });

  const svg = renderChart(series, {
    title: spec.title,
    xLabel: spec.xLabel ?? "slot",
    yLabel: spec.yLabel ?? "running normalized throughput",
  });
  await writeFile(spec.out, svg, "utf-8");
  return svg;
}
