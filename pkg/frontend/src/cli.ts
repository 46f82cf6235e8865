/** Shared flag handling for the one-script-per-figure entry points. */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

export interface FigureArgs {
  input: string;
  output: string;
  times: number[] | null;
  tol: number | undefined;
  title: string | undefined;
}

export function parseFigureArgs(
  argv: readonly string[],
  needsTimes: boolean,
): FigureArgs {
  const { values } = parseArgs({
    args: [...argv],
    options: {
      input: { type: "string" },
      output: { type: "string" },
      times: { type: "string" },
      tol: { type: "string" },
      title: { type: "string" },
    },
    strict: true,
  });
  if (values.input === undefined || values.output === undefined) {
    throw new Error("--input and --output are required");
  }
  let times: number[] | null = null;
  if (needsTimes) {
    if (values.times === undefined) {
      throw new Error("--times is required (comma-separated list)");
    }
    times = values.times.split(",").map((s) => {
      const t = Number(s);
      if (Number.isNaN(t)) {
        throw new Error(`cannot parse time ${JSON.stringify(s)}`);
      }
      return t;
    });
  } else if (values.times !== undefined) {
    throw new Error("--times is not accepted by this figure kind");
  }
  let tol: number | undefined;
  if (values.tol !== undefined) {
    tol = Number(values.tol);
    if (!(tol >= 0)) {
      throw new Error(`--tol must be a nonnegative number, got ${values.tol}`);
    }
  }
  return { input: values.input, output: values.output, times, tol, title: values.title };
}

export function readText(path: string): string {
  return readFileSync(path, { encoding: "utf-8" });
}

export function writeText(path: string, content: string): void {
  writeFileSync(path, content, { encoding: "utf-8" });
}

/** Run an entry point, mapping thrown errors to stderr + exit code 1. */
export function runEntry(main: (argv: string[]) => void): void {
  try {
    main(process.argv.slice(2));
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    process.exitCode = 1;
  }
}
