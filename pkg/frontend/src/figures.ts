/**
 * Figure builders: pure functions from parsed CSV tables to SVG markup.
 *
 * Axis ranges are auto-scaled with 5 percent margins.  Requested snapshot
 * times resolve to the nearest stored time within a tolerance; by default
 * half the smallest gap between stored times, intended to mirror half the
 * producing run's snapshot spacing.
 */

import type { FieldsSnapshot, StudyRow } from "./csv.js";
import {
  LinScale,
  LogScale,
  dataRange,
  decadeTicks,
  esc,
  fmt,
  linTicks,
  padRange,
  polylinePath,
  svgDocument,
} from "./svg.js";

export class FigureError extends Error {}

const PANEL_W = 640;
const PANEL_H = 230;
const MARGIN = { left: 72, right: 16, top: 30, bottom: 46 };
const CURVE_A = "#1f77b4"; // solid
const CURVE_B = "#d62728"; // dashed
const REF_GREY = "#888888";

interface Curve {
  xs: readonly number[];
  ys: readonly number[];
  color: string;
  dash: string | null;
  label: string;
}

export function defaultTimeTolerance(times: readonly number[]): number {
  const sorted = [...times].sort((a, b) => a - b);
  let gap = Infinity;
  for (let i = 1; i < sorted.length; i++) {
    const d = sorted[i]! - sorted[i - 1]!;
    if (d > 0) {
      gap = Math.min(gap, d);
    }
  }
  return Number.isFinite(gap) ? gap / 2 : 1e-9;
}

export function matchSnapshot(
  snaps: readonly FieldsSnapshot[],
  t: number,
  tol?: number,
): FieldsSnapshot {
  const available = snaps.map((s) => s.t);
  const limit = tol ?? defaultTimeTolerance(available);
  let best: FieldsSnapshot | null = null;
  let bestGap = Infinity;
  for (const s of snaps) {
    const gap = Math.abs(s.t - t);
    if (gap < bestGap) {
      bestGap = gap;
      best = s;
    }
  }
  if (best === null || bestGap > limit) {
    throw new FigureError(
      `no snapshot within ${fmt(limit)} of t = ${fmt(t)}; ` +
        `available times: ${available.map(fmt).join(", ")}`,
    );
  }
  return best;
}

function panel(
  curves: readonly Curve[],
  yTop: number,
  title: string,
  xLabel: string,
  yLabel: string,
): string {
  const xr = padRange(
    ...(() => {
      const r = dataRange(curves.flatMap((c) => [...c.xs]));
      return [r.lo, r.hi] as const;
    })(),
  );
  const yr = padRange(
    ...(() => {
      const r = dataRange(curves.flatMap((c) => [...c.ys]));
      return [r.lo, r.hi] as const;
    })(),
  );
  const x0 = MARGIN.left;
  const x1 = PANEL_W - MARGIN.right;
  const y0 = yTop + MARGIN.top;
  const y1 = yTop + PANEL_H - MARGIN.bottom;
  const sx = new LinScale(xr, x0, x1);
  const sy = new LinScale(yr, y1, y0);

  const parts: string[] = [];
  parts.push(
    `<rect x="${x0}" y="${y0}" width="${x1 - x0}" height="${y1 - y0}" ` +
      `fill="none" stroke="black" stroke-width="1"/>`,
  );
  for (const t of linTicks(xr.lo, xr.hi, 8)) {
    const px = sx.map(t);
    parts.push(
      `<line x1="${fmt(px)}" y1="${y1}" x2="${fmt(px)}" y2="${y1 + 4}" stroke="black"/>`,
      `<text x="${fmt(px)}" y="${y1 + 17}" font-size="11" text-anchor="middle">${fmt(t)}</text>`,
    );
  }
  for (const t of linTicks(yr.lo, yr.hi, 5)) {
    const py = sy.map(t);
    parts.push(
      `<line x1="${x0 - 4}" y1="${fmt(py)}" x2="${x0}" y2="${fmt(py)}" stroke="black"/>`,
      `<text x="${x0 - 7}" y="${fmt(py + 4)}" font-size="11" text-anchor="end">${fmt(t)}</text>`,
    );
  }
  for (const c of curves) {
    const dash = c.dash === null ? "" : ` stroke-dasharray="${c.dash}"`;
    parts.push(
      `<path d="${polylinePath(c.xs, c.ys, sx, sy)}" fill="none" ` +
        `stroke="${c.color}" stroke-width="1.5"${dash}/>`,
    );
  }
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${yTop + 18}" font-size="13" ` +
      `text-anchor="middle" font-weight="bold">${esc(title)}</text>`,
    `<text x="${(x0 + x1) / 2}" y="${y1 + 34}" font-size="12" text-anchor="middle">${esc(xLabel)}</text>`,
    `<text x="16" y="${(y0 + y1) / 2}" font-size="12" text-anchor="middle" ` +
      `transform="rotate(-90 16 ${(y0 + y1) / 2})">${esc(yLabel)}</text>`,
  );
  // legend, top-right inside the frame
  curves.forEach((c, i) => {
    const ly = y0 + 14 + 16 * i;
    const dash = c.dash === null ? "" : ` stroke-dasharray="${c.dash}"`;
    parts.push(
      `<line x1="${x1 - 92}" y1="${ly}" x2="${x1 - 64}" y2="${ly}" ` +
        `stroke="${c.color}" stroke-width="1.5"${dash}/>`,
      `<text x="${x1 - 58}" y="${ly + 4}" font-size="11">${esc(c.label)}</text>`,
    );
  });
  return parts.join("\n") + "\n";
}

function timePanels(
  snaps: readonly FieldsSnapshot[],
  times: readonly number[],
  tol: number | undefined,
  curvesOf: (s: FieldsSnapshot) => readonly Curve[],
  yLabel: string,
): string {
  if (times.length === 0) {
    throw new FigureError("no times requested");
  }
  const body = times
    .map((t, i) => {
      const snap = matchSnapshot(snaps, t, tol);
      return panel(
        curvesOf(snap),
        i * PANEL_H,
        `t = ${fmt(snap.t)}`,
        "x",
        yLabel,
      );
    })
    .join("");
  return svgDocument(PANEL_W, PANEL_H * times.length, body);
}

/** One panel per requested time: |u| solid, v dashed. */
export function buildSnapshotFigure(
  snaps: readonly FieldsSnapshot[],
  times: readonly number[],
  tol?: number,
): string {
  return timePanels(
    snaps,
    times,
    tol,
    (s) => [
      { xs: s.x, ys: s.absU, color: CURVE_A, dash: null, label: "|u|" },
      { xs: s.x, ys: s.v, color: CURVE_B, dash: "6 3", label: "v" },
    ],
    "|u|, v",
  );
}

/** One panel per requested time: Re u solid, Im u dashed. */
export function buildReImFigure(
  snaps: readonly FieldsSnapshot[],
  times: readonly number[],
  tol?: number,
): string {
  return timePanels(
    snaps,
    times,
    tol,
    (s) => [
      { xs: s.x, ys: s.reU, color: CURVE_A, dash: null, label: "Re u" },
      { xs: s.x, ys: s.imU, color: CURVE_B, dash: "6 3", label: "Im u" },
    ],
    "Re u, Im u",
  );
}

/** Log-log error-versus-resolution plot with a first-order reference line. */
export function buildConvergenceFigure(
  rows: readonly StudyRow[],
  title = "convergence",
): string {
  if (rows.length < 2) {
    throw new FigureError(
      `convergence plot needs at least 2 study rows, got ${rows.length}`,
    );
  }
  const hs = rows.map((r) => r.h);
  const errs = rows.flatMap((r) => [r.errU, r.errV]);
  for (const v of [...hs, ...errs]) {
    if (!(v > 0)) {
      throw new FigureError(`log-log plot needs positive data, got ${v}`);
    }
  }
  const first = rows[0]!;
  const refYs = hs.map((h) => (first.errU * h) / first.h);

  // 5% margins in log space
  const xr = padRange(...logSpan(hs));
  const yr = padRange(...logSpan([...errs, ...refYs]));
  const x0 = MARGIN.left;
  const x1 = PANEL_W - MARGIN.right;
  const y0 = MARGIN.top;
  const y1 = PANEL_H + 60 - MARGIN.bottom;
  const sx = new LogScale({ lo: 10 ** xr.lo, hi: 10 ** xr.hi }, x0, x1);
  const sy = new LogScale({ lo: 10 ** yr.lo, hi: 10 ** yr.hi }, y1, y0);

  const parts: string[] = [];
  parts.push(
    `<rect x="${x0}" y="${y0}" width="${x1 - x0}" height="${y1 - y0}" ` +
      `fill="none" stroke="black" stroke-width="1"/>`,
  );
  for (const t of decadeTicks(10 ** xr.lo, 10 ** xr.hi)) {
    const px = sx.map(t);
    parts.push(
      `<line x1="${fmt(px)}" y1="${y1}" x2="${fmt(px)}" y2="${y1 + 4}" stroke="black"/>`,
      `<text x="${fmt(px)}" y="${y1 + 17}" font-size="11" text-anchor="middle">${fmt(t)}</text>`,
    );
  }
  for (const t of decadeTicks(10 ** yr.lo, 10 ** yr.hi)) {
    const py = sy.map(t);
    parts.push(
      `<line x1="${x0 - 4}" y1="${fmt(py)}" x2="${x0}" y2="${fmt(py)}" stroke="black"/>`,
      `<text x="${x0 - 7}" y="${fmt(py + 4)}" font-size="11" text-anchor="end">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<path d="${polylinePath(hs, refYs, sx, sy)}" fill="none" ` +
      `stroke="${REF_GREY}" stroke-width="1" stroke-dasharray="3 3"/>`,
  );
  const series: Array<[string, (r: StudyRow) => number, string]> = [
    ["error in u", (r) => r.errU, CURVE_A],
    ["error in v", (r) => r.errV, CURVE_B],
  ];
  for (const [, pick, color] of series) {
    parts.push(
      `<path d="${polylinePath(hs, rows.map(pick), sx, sy)}" fill="none" ` +
        `stroke="${color}" stroke-width="1.5"/>`,
    );
    for (const r of rows) {
      parts.push(
        `<circle cx="${fmt(sx.map(r.h))}" cy="${fmt(sy.map(pick(r)))}" ` +
          `r="3" fill="${color}"/>`,
      );
    }
  }
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="18" font-size="13" text-anchor="middle" ` +
      `font-weight="bold">${esc(title)}</text>`,
    `<text x="${(x0 + x1) / 2}" y="${y1 + 34}" font-size="12" text-anchor="middle">h</text>`,
    `<text x="16" y="${(y0 + y1) / 2}" font-size="12" text-anchor="middle" ` +
      `transform="rotate(-90 16 ${(y0 + y1) / 2})">L2 error</text>`,
  );
  const legend: Array<[string, string, string | null]> = [
    ["error in u", CURVE_A, null],
    ["error in v", CURVE_B, null],
    ["slope 1 reference", REF_GREY, "3 3"],
  ];
  legend.forEach(([label, color, dash], i) => {
    const ly = y0 + 14 + 16 * i;
    const dashAttr = dash === null ? "" : ` stroke-dasharray="${dash}"`;
    parts.push(
      `<line x1="${x0 + 10}" y1="${ly}" x2="${x0 + 38}" y2="${ly}" ` +
        `stroke="${color}" stroke-width="1.5"${dashAttr}/>`,
      `<text x="${x0 + 44}" y="${ly + 4}" font-size="11">${esc(label)}</text>`,
    );
  });
  return svgDocument(PANEL_W, PANEL_H + 60, parts.join("\n") + "\n");
}

function logSpan(values: readonly number[]): [number, number] {
  const r = dataRange(values.map(Math.log10));
  return [r.lo, r.hi];
}
