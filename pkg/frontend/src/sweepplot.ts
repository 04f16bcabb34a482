/**
 * Sweep figure: steady-state throughput vs the swept parameter with 95%
 * confidence whiskers, one series per policy.
 */

import { writeFile } from "fs/promises";

import { renderChart, Series, Whisker } from "./chart.js";
import { columnIndex, readCsv, toNumber } from "./csv.js";

import type { FigureSpec } from "./timeseries.js";

const COLUMNS = [
  "policy",
  "param_name",
  "param_value",
  "steady_state_throughput",
  "ci_low",
  "ci_high",
] as const;

interface SweepRow {
  policy: string;
  value: number;
  steady: number;
  ciLow: number;
  ciHigh: number;
}

export async function plotSweep(csvPath: string, spec: FigureSpec): Promise<string> {
  const table = await readCsv(csvPath);
  const cols = columnIndex(table, COLUMNS);
  if (table.rows.length === 0) {
    throw new Error("no data rows");
  }

  const paramNames = new Set(table.rows.map((r) => r[cols.get("param_name")!]));
  if (paramNames.size > 1) {
    throw new Error(
      `mixed param_name values: ${[...paramNames].sort().join(", ")}`,
    );
  }
  const paramName = [...paramNames][0];

  const rows: SweepRow[] = table.rows.map((r) => ({
    policy: r[cols.get("policy")!],
    value: toNumber(r[cols.get("param_value")!], "param_value", csvPath),
    steady: toNumber(
      r[cols.get("steady_state_throughput")!], "steady_state_throughput", csvPath),
    ciLow: toNumber(r[cols.get("ci_low")!], "ci_low", csvPath),
    ciHigh: toNumber(r[cols.get("ci_high")!], "ci_high", csvPath),
  }));

  const policies = [...new Set(rows.map((r) => r.policy))].sort();
  const series: Series[] = policies.map((policy) => {
    const mine = rows
      .filter((r) => r.policy === policy)
      .sort((a, b) => a.value - b.value);
    const whiskers: Whisker[] = mine.map((r) => ({
      x: r.value,
      low: r.ciLow,
      high: r.ciHigh,
    }));
    return {
      label: policy,
      points: mine.map((r) => ({ x: r.value, y: r.steady })),
      whiskers,
      markers: true,
    };
  });

  const svg = renderChart(series, {
    title: spec.title,
    xLabel: spec.xLabel ?? paramName,
    yLabel: spec.yLabel ?? "steady-state normalized throughput",
  });
  await writeFile(spec.out, svg, "utf-8");
  return svg;
}
