import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import {
  CsvSchemaError,
  FIELDS_HEADER,
  parseNumericCsv,
  readFields,
  readStudy,
} from "../src/csv.js";

const FIX = new URL("./fixtures/", import.meta.url);

function fixture(name: string): string {
  return readFileSync(new URL(name, FIX), { encoding: "utf-8" });
}

describe("parseNumericCsv", () => {
  it("rejects a header that is not byte-identical to the schema", () => {
    const bad = "t,x,re_u,im_u,abs_u,w\n0,0,0,0,0,0\n";
    expect(() => parseNumericCsv(bad, FIELDS_HEADER)).toThrow(CsvSchemaError);
    expect(() => parseNumericCsv(bad, FIELDS_HEADER)).toThrow(
      /schema mismatch.*abs_u,v.*abs_u,w/s,
    );
  });

  it("rejects rows with the wrong number of columns", () => {
    const bad = "t,x,re_u,im_u,abs_u,v\n0,0,0,0,0\n";
    expect(() => parseNumericCsv(bad, FIELDS_HEADER)).toThrow(/line 2/);
  });

  it("rejects non-numeric cells, naming the column", () => {
    const bad = "t,x,re_u,im_u,abs_u,v\n0,0,oops,0,0,0\n";
    expect(() => parseNumericCsv(bad, FIELDS_HEADER)).toThrow(
      /line 2.*"oops".*re_u/,
    );
  });

  it("accepts the producer's literal nan spelling", () => {
    const text = "h,tau,err_u_l2,err_v_l2,order_u,order_v\n1,1,1,1,nan,nan\n";
    const rows = readStudy(text);
    expect(rows).toHaveLength(1);
    expect(Number.isNaN(rows[0]!.orderU)).toBe(true);
  });

  it("rejects an empty file", () => {
    expect(() => parseNumericCsv("", FIELDS_HEADER)).toThrow(/empty file/);
  });
});

describe("readFields", () => {
  it("groups rows into snapshots in file order", () => {
    const text =
      "t,x,re_u,im_u,abs_u,v\n" +
      "0,-1,1,0,1,0.5\n0,1,0,1,1,0.5\n" +
      "2,-1,0,0,0,0\n2,1,0,0,0,0\n";
    const snaps = readFields(text);
    expect(snaps.map((s) => s.t)).toEqual([0, 2]);
    expect(snaps[0]!.x).toEqual([-1, 1]);
    expect(snaps[0]!.reU).toEqual([1, 0]);
    expect(snaps[1]!.v).toEqual([0, 0]);
  });

  it("rejects a header-only table", () => {
    expect(() => readFields("t,x,re_u,im_u,abs_u,v\n")).toThrow(/no data/);
  });

  it("reads the generated run fixture", () => {
    const snaps = readFields(fixture("general_fields.csv"));
    expect(snaps).toHaveLength(5);
    for (const s of snaps) {
      expect(s.x).toHaveLength(2000);
    }
    expect(snaps[0]!.t).toBe(0);
    expect(snaps[4]!.t).toBeCloseTo(2.5, 10);
  });
});

describe("readStudy", () => {
  it("reads the generated study fixture", () => {
    const rows = readStudy(fixture("linear_study.csv"));
    expect(rows).toHaveLength(4);
    expect(rows.map((r) => r.h)).toEqual([0.4, 0.2, 0.1, 0.05]);
    expect(Number.isNaN(rows[0]!.orderU)).toBe(true);
    expect(rows[3]!.orderV).toBeGreaterThan(0.9);
  });
});
