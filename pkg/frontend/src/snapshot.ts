/**
 * Snapshot figure: one panel per requested time, |u| solid and v dashed.
 *
 *   node dist/snapshot.js --input fields.csv --output fig.svg --times 0,1,2.5
 */

import { pathToFileURL } from "node:url";

import { readFields } from "./csv.js";
import { buildSnapshotFigure } from "./figures.js";
import { parseFigureArgs, readText, runEntry, writeText } from "./cli.js";

export function main(argv: string[]): void {
  const args = parseFigureArgs(argv, true);
  const snaps = readFields(readText(args.input));
  writeText(args.output, buildSnapshotFigure(snaps, args.times!, args.tol));
}

if (
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href
) {
  runEntry(main);
}
