/**
 * End-to-end figure set over CSVs produced by the solver CLI:
 * the five-snapshot wave-packet figure schedule, the real/imaginary
 * figure at the final time, and both convergence figures.
 */

import { existsSync, mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { main as convergenceMain } from "../src/convergence.js";
import { main as reimMain } from "../src/reim.js";
import { main as snapshotMain } from "../src/snapshot.js";

const FIX = fileURLToPath(new URL("./fixtures/", import.meta.url));

describe("criterion: figure set renders from solver CSVs", () => {
  const dir = mkdtempSync(join(tmpdir(), "swlw-figset-"));

  it("renders the five-snapshot wave-packet figure", () => {
    const out = join(dir, "general_snapshots.svg");
    snapshotMain([
      "--input",
      join(FIX, "general_fields.csv"),
      "--output",
      out,
      "--times",
      "0,1,1.5,2,2.5",
    ]);
    expect(existsSync(out)).toBe(true);
  });

  it("renders the real/imaginary figure at the final time", () => {
    const out = join(dir, "general_reim.svg");
    reimMain([
      "--input",
      join(FIX, "general_fields.csv"),
      "--output",
      out,
      "--times",
      "2.5",
    ]);
    expect(existsSync(out)).toBe(true);
  });

  it("renders both convergence figures", () => {
    for (const name of ["linear_study", "nonlinear_study"]) {
      const out = join(dir, `${name}.svg`);
      convergenceMain([
        "--input",
        join(FIX, `${name}.csv`),
        "--output",
        out,
      ]);
      expect(existsSync(out)).toBe(true);
    }
  });

  it("fails loudly on schema-mismatched input", () => {
    expect(() =>
      snapshotMain([
        "--input",
        join(FIX, "linear_study.csv"),
        "--output",
        join(dir, "nope.svg"),
        "--times",
        "0",
      ]),
    ).toThrow(/schema mismatch/);
  });
});
