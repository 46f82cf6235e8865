/**
 * Strict readers for the solver's CSV outputs.
 *
 * These never recompute physics: they parse the two schemas produced by the
 * batch CLI and nothing else.  Any deviation from the expected header or a
 * non-numeric cell is a hard error, not a silent reinterpretation.
 */

export class CsvSchemaError extends Error {}

export const FIELDS_HEADER = ["t", "x", "re_u", "im_u", "abs_u", "v"] as const;
export const STUDY_HEADER = [
  "h",
  "tau",
  "err_u_l2",
  "err_v_l2",
  "order_u",
  "order_v",
] as const;

/** One snapshot block of the fields table: every row sharing a time stamp. */
export interface FieldsSnapshot {
  t: number;
  x: number[];
  reU: number[];
  imU: number[];
  absU: number[];
  v: number[];
}

export interface StudyRow {
  h: number;
  tau: number;
  errU: number;
  errV: number;
  orderU: number;
  orderV: number;
}

function parseCell(raw: string, line: number, column: string): number {
  const value = Number(raw);
  // the producer spells out non-finite diagnostics ("nan" in the first
  // study row's order columns); anything else that fails Number() is junk
  if (Number.isNaN(value) && raw.trim() !== "nan") {
    throw new CsvSchemaError(
      `line ${line}: cannot parse ${JSON.stringify(raw)} in column ${column}`,
    );
  }
  return value;
}

export function parseNumericCsv(
  text: string,
  expected: readonly string[],
): number[][] {
  const lines = text.split(/\r?\n/);
  while (lines.length > 0 && lines[lines.length - 1] === "") {
    lines.pop();
  }
  if (lines.length === 0) {
    throw new CsvSchemaError("empty file: no header row");
  }
  const header = lines[0]!;
  const want = expected.join(",");
  if (header !== want) {
    throw new CsvSchemaError(
      `schema mismatch: expected header ${JSON.stringify(want)}, ` +
        `got ${JSON.stringify(header)}`,
    );
  }
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i]!.split(",");
    if (cells.length !== expected.length) {
      throw new CsvSchemaError(
        `line ${i + 1}: expected ${expected.length} columns, got ${cells.length}`,
      );
    }
    rows.push(cells.map((c, j) => parseCell(c, i + 1, expected[j]!)));
  }
  return rows;
}

/** Group fields rows into snapshots, preserving file order of the times. */
export function readFields(text: string): FieldsSnapshot[] {
  const rows = parseNumericCsv(text, FIELDS_HEADER);
  const out: FieldsSnapshot[] = [];
  const byTime = new Map<number, FieldsSnapshot>();
  for (const r of rows) {
    const [t, x, reU, imU, absU, v] = r as [
      number,
      number,
      number,
      number,
      number,
      number,
    ];
    let snap = byTime.get(t);
    if (snap === undefined) {
      snap = { t, x: [], reU: [], imU: [], absU: [], v: [] };
      byTime.set(t, snap);
      out.push(snap);
    }
    snap.x.push(x);
    snap.reU.push(reU);
    snap.imU.push(imU);
    snap.absU.push(absU);
    snap.v.push(v);
  }
  if (out.length === 0) {
    throw new CsvSchemaError("fields table has a header but no data rows");
  }
  return out;
}

export function readStudy(text: string): StudyRow[] {
  return parseNumericCsv(text, STUDY_HEADER).map((r) => {
    const [h, tau, errU, errV, orderU, orderV] = r as [
      number,
      number,
      number,
      number,
      number,
      number,
    ];
    return { h, tau, errU, errV, orderU, orderV };
  });
}
