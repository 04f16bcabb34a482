/**
 * Minimal deterministic SVG line chart: axes with tick labels, one polyline
 * per series, optional confidence whiskers and point markers, and a legend.
 * No DOM, no timestamps — identical input yields identical bytes.
 */

export interface Point {
  x: number;
  y: number;
}

export interface Whisker {
  x: number;
  low: number;
  high: number;
}

export interface Series {
  label: string;
  points: Point[];
  whiskers?: Whisker[];
  markers?: boolean;
}

export interface ChartSpec {
  title?: string;
  xLabel: string;
  yLabel: string;
  width?: number;
  height?: number;
}

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const MARGIN = { top: 40, right: 24, bottom: 52, left: 64 };

function fmt(v: number): string {
  // Fixed-precision coordinates keep the output stable across platforms.
  return v.toFixed(2);
}

function fmtTick(v: number): string {
  const abs = Math.abs(v);
  if (v !== 0 && (abs >= 1e5 || abs < 1e-3)) return v.toExponential(1);
  return parseFloat(v.toPrecision(6)).toString();
}

/** Round tick steps to a 1/2/5 ladder covering [min, max]. */
export function niceTicks(min: number, max: number, count = 6): number[] {
  if (!(max > min)) {
    const pad = Math.abs(min) > 0 ? Math.abs(min) * 0.5 : 1;
    return niceTicks(min - pad, min + pad, count);
  }
  const raw = (max - min) / count;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = (norm <= 1 ? 1 : norm <= 2 ? 2 : norm <= 5 ? 5 : 10) * mag;
  const ticks: number[] = [];
  for (let t = Math.ceil(min / step) * step; t <= max + step * 1e-9; t += step) {
    ticks.push(Math.abs(t) < step * 1e-9 ? 0 : t);
  }
  return ticks;
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderChart(series: Series[], spec: ChartSpec): string {
  if (series.length === 0 || series.every((s) => s.points.length === 0)) {
    throw new Error("nothing to plot: no series data");
  }
  const width = spec.width ?? 860;
  const height = spec.height ?? 520;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  const ys = series.flatMap((s) => [
    ...s.points.map((p) => p.y),
    ...(s.whiskers ?? []).flatMap((w) => [w.low, w.high]),
  ]);
  let xMin = Math.min(...xs);
  let xMax = Math.max(...xs);
  let yMin = Math.min(...ys, 0);
  let yMax = Math.max(...ys);
  if (xMax === xMin) {
    xMin -= 1;
    xMax += 1;
  }
  if (yMax === yMin) {
    yMax = yMin + 1;
  }
  const yPad = (yMax - yMin) * 0.06;
  yMax += yPad;

  const sx = (x: number) => MARGIN.left + ((x - xMin) / (xMax - xMin)) * plotW;
  const sy = (y: number) => MARGIN.top + plotH - ((y - yMin) / (yMax - yMin)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
  );

  if (spec.title) {
    parts.push(
      `<text x="${width / 2}" y="22" text-anchor="middle" font-size="15">` +
        `${escapeXml(spec.title)}</text>`,
    );
  }

  // Grid and ticks.
  for (const t of niceTicks(yMin, yMax)) {
    const y = fmt(sy(t));
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${width - MARGIN.right}" y2="${y}" ` +
        `stroke="#dddddd" stroke-width="0.6"/>`,
      `<text x="${MARGIN.left - 7}" y="${fmt(sy(t) + 3.5)}" text-anchor="end" ` +
        `font-size="11">${fmtTick(t)}</text>`,
    );
  }
  for (const t of niceTicks(xMin, xMax, 8)) {
    if (t < xMin - 1e-9 || t > xMax + 1e-9) continue;
    const x = fmt(sx(t));
    parts.push(
      `<line x1="${x}" y1="${MARGIN.top + plotH}" x2="${x}" ` +
        `y2="${MARGIN.top + plotH + 5}" stroke="#333333"/>`,
      `<text x="${x}" y="${MARGIN.top + plotH + 19}" text-anchor="middle" ` +
        `font-size="11">${fmtTick(t)}</text>`,
    );
  }

  // Axes.
  parts.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" ` +
      `y2="${MARGIN.top + plotH}" stroke="#333333"/>`,
    `<line x1="${MARGIN.left}" y1="${MARGIN.top + plotH}" ` +
      `x2="${width - MARGIN.right}" y2="${MARGIN.top + plotH}" stroke="#333333"/>`,
    `<text x="${MARGIN.left + plotW / 2}" y="${height - 12}" text-anchor="middle" ` +
      `font-size="13">${escapeXml(spec.xLabel)}</text>`,
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="13" ` +
      `transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">` +
      `${escapeXml(spec.yLabel)}</text>`,
  );

  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    for (const w of s.whiskers ?? []) {
      const x = fmt(sx(w.x));
      const lo = fmt(sy(w.low));
      const hi = fmt(sy(w.high));
      parts.push(
        `<line x1="${x}" y1="${lo}" x2="${x}" y2="${hi}" stroke="${color}" ` +
          `stroke-width="1.2" class="whisker"/>`,
        `<line x1="${fmt(sx(w.x) - 4)}" y1="${lo}" x2="${fmt(sx(w.x) + 4)}" ` +
          `y2="${lo}" stroke="${color}" stroke-width="1.2"/>`,
        `<line x1="${fmt(sx(w.x) - 4)}" y1="${hi}" x2="${fmt(sx(w.x) + 4)}" ` +
          `y2="${hi}" stroke="${color}" stroke-width="1.2"/>`,
      );
    }
    const coords = s.points
      .map((p) => `${fmt(sx(p.x))},${fmt(sy(p.y))}`)
      .join(" ");
    parts.push(
      `<polyline points="${coords}" fill="none" stroke="${color}" ` +
        `stroke-width="1.6" class="series"/>`,
    );
    if (s.markers) {
      for (const p of s.points) {
        parts.push(
          `<circle cx="${fmt(sx(p.x))}" cy="${fmt(sy(p.y))}" r="3" fill="${color}"/>`,
        );
      }
    }
  });

  // Legend, top-left inside the plot area.
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const y = MARGIN.top + 14 + i * 18;
    parts.push(
      `<line x1="${MARGIN.left + 10}" y1="${y - 4}" x2="${MARGIN.left + 34}" ` +
        `y2="${y - 4}" stroke="${color}" stroke-width="2"/>`,
      `<text x="${MARGIN.left + 40}" y="${y}" font-size="12">` +
        `${escapeXml(s.label)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
