#!/usr/bin/env node
/** plot-sweep <csv> --out <img> [--title <text>] */

import { plotSweep } from "./sweepplot.js";

function usage(): never {
  console.error("usage: plot-sweep <csv> --out <img> [--title <text>]");
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
  if (!out || paths.length !== 1) usage();
  try {
    await plotSweep(paths[0], { out, title });
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
