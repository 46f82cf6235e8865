/**
 * Log-log error-versus-h figure with a slope-1 reference line.
 *
 *   node dist/convergence.js --input study.csv --output fig.svg [--title T]
 */

import { pathToFileURL } from "node:url";

import { readStudy } from "./csv.js";
import { buildConvergenceFigure } from "./figures.js";
import { parseFigureArgs, readText, runEntry, writeText } from "./cli.js";

export function main(argv: string[]): void {
  const args = parseFigureArgs(argv, false);
  const rows = readStudy(readText(args.input));
  writeText(args.output, buildConvergenceFigure(rows, args.title));
}

if (
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href
) {
  runEntry(main);
}
