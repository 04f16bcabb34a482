#!/usr/bin/env node
/** plot-timeseries <csv...> --out <img> [--title <text>] */

import { plotTimeseries } from "./timeseries.js";

function usage(): never {
  console.error("usage: plot-timeseries <csv...> --out <img> [--title <text>]");
  process.exit(2);
}

async function main(argv: string[]): Promise<number> {
  const paths: string[] = [];
  let out = "";
  let title: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--out") {
      out = argv[++i] ?? usage();
    } else if (arg === "--title") {
      title = argv[++i] ?? usage();
    } else if (arg.startsWith("--")) {
      usage();
    } else {
      paths.push(arg);
    }
  }
  if (!out || paths.length === 0) usage();
  try {
    await plotTimeseries(paths, { out, title });
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
  console.log(`wrote ${out}`);
  return 0;
}

main(process.argv.slice(2)).then((code) => {
  process.exitCode = code;
});
