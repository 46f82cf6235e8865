import { existsSync, mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { CsvSchemaError } from "../src/csv.js";
import { main as convergenceMain } from "../src/convergence.js";
import { main as reimMain } from "../src/reim.js";
import { main as snapshotMain } from "../src/snapshot.js";

const FIX = fileURLToPath(new URL("./fixtures/", import.meta.url));
const FIELDS = join(FIX, "general_fields.csv");
const STUDY = join(FIX, "linear_study.csv");

function outPath(name: string): string {
  return join(mkdtempSync(join(tmpdir(), "swlw-plots-")), name);
}

function expectSvgFile(path: string): void {
  expect(existsSync(path)).toBe(true);
  expect(readFileSync(path, { encoding: "utf-8" }).startsWith("<svg ")).toBe(
    true,
  );
}

describe("snapshot entry point", () => {
  it("writes an SVG for a comma-separated time list", () => {
    const out = outPath("snap.svg");
    snapshotMain(["--input", FIELDS, "--output", out, "--times", "0,1,2.5"]);
    expectSvgFile(out);
  });

  it("requires --times", () => {
    expect(() =>
      snapshotMain(["--input", FIELDS, "--output", outPath("x.svg")]),
    ).toThrow(/--times is required/);
  });

  it("passes --tol through to the matcher", () => {
    expect(() =>
      snapshotMain([
        "--input",
        FIELDS,
        "--output",
        outPath("x.svg"),
        "--times",
        "1.4",
        "--tol",
        "0.01",
      ]),
    ).toThrow(/available times/);
  });

  it("fails loudly when handed the wrong schema", () => {
    expect(() =>
      snapshotMain([
        "--input",
        STUDY,
        "--output",
        outPath("x.svg"),
        "--times",
        "0",
      ]),
    ).toThrow(CsvSchemaError);
  });
});

describe("real/imaginary entry point", () => {
  it("writes an SVG", () => {
    const out = outPath("reim.svg");
    reimMain(["--input", FIELDS, "--output", out, "--times", "2.5"]);
    expectSvgFile(out);
  });
});

describe("convergence entry point", () => {
  it("writes an SVG and accepts a title", () => {
    const out = outPath("conv.svg");
    convergenceMain([
      "--input",
      STUDY,
      "--output",
      out,
      "--title",
      "traveling wave",
    ]);
    expectSvgFile(out);
    expect(readFileSync(out, { encoding: "utf-8" })).toContain(
      "traveling wave",
    );
  });

  it("rejects --times", () => {
    expect(() =>
      convergenceMain([
        "--input",
        STUDY,
        "--output",
        outPath("x.svg"),
        "--times",
        "1",
      ]),
    ).toThrow(/--times is not accepted/);
  });

  it("fails loudly when handed the wrong schema", () => {
    expect(() =>
      convergenceMain(["--input", FIELDS, "--output", outPath("x.svg")]),
    ).toThrow(/schema mismatch/);
  });
});
