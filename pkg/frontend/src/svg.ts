/**
 * Minimal deterministic SVG plotting primitives.
 *
 * No rendering backend, no randomness, no timestamps: identical inputs
 * produce byte-identical markup.
 */

export interface Range {
  lo: number;
  hi: number;
}

/** Deterministic compact number formatting for SVG coordinates and labels. */
export function fmt(x: number): string {
  if (!Number.isFinite(x)) {
    return String(x);
  }
  if (x === 0) {
    return "0";
  }
  const s = x.toPrecision(6);
  // strip trailing zeros without touching exponent notation
  return s.includes("e")
    ? s.replace(/\.?0+e/, "e")
    : s.replace(/(\.\d*?)0+$/, "$1").replace(/\.$/, "");
}

/** Widen [lo, hi] by a symmetric margin; degenerate ranges get unit width. */
export function padRange(lo: number, hi: number, frac = 0.05): Range {
  if (!(lo <= hi)) {
    throw new Error(`invalid range [${lo}, ${hi}]`);
  }
  const span = hi - lo;
  const pad = span > 0 ? frac * span : Math.max(1, Math.abs(lo)) * frac;
  return { lo: lo - pad, hi: hi + pad };
}

export function dataRange(values: readonly number[]): Range {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (Number.isFinite(v)) {
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
  }
  if (lo > hi) {
    throw new Error("no finite values to scale");
  }
  return { lo, hi };
}

export class LinScale {
  constructor(
    readonly domain: Range,
    readonly outLo: number,
    readonly outHi: number,
  ) {
    if (!(domain.hi > domain.lo)) {
      throw new Error(`degenerate scale domain [${domain.lo}, ${domain.hi}]`);
    }
  }

  map(x: number): number {
    const u = (x - this.domain.lo) / (this.domain.hi - this.domain.lo);
    return this.outLo + u * (this.outHi - this.outLo);
  }
}

/** Linear scale in log10 space; domain bounds are raw (positive) values. */
export class LogScale {
  private readonly inner: LinScale;

  constructor(domain: Range, outLo: number, outHi: number) {
    if (!(domain.lo > 0)) {
      throw new Error(`log scale needs positive domain, got lo = ${domain.lo}`);
    }
    this.inner = new LinScale(
      { lo: Math.log10(domain.lo), hi: Math.log10(domain.hi) },
      outLo,
      outHi,
    );
  }

  map(x: number): number {
    return this.inner.map(Math.log10(x));
  }
}

/** Round-valued ticks at 1/2/5 times a power of ten covering [lo, hi]. */
export function linTicks(lo: number, hi: number, target = 6): number[] {
  const span = hi - lo;
  if (!(span > 0)) {
    return [lo];
  }
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  let step = 10 * mag;
  for (const m of [1, 2, 5]) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return ticks;
}

/** Powers of ten lying inside [lo, hi] (at least the two endpoints' decades). */
export function decadeTicks(lo: number, hi: number): number[] {
  const first = Math.ceil(Math.log10(lo) - 1e-12);
  const last = Math.floor(Math.log10(hi) + 1e-12);
  const ticks: number[] = [];
  for (let e = first; e <= last; e++) {
    ticks.push(Math.pow(10, e));
  }
  return ticks.length > 0 ? ticks : [lo, hi];
}

export function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export interface Scale {
  map(x: number): number;
}

/** Path data for a polyline through (x[i], y[i]) in scaled coordinates. */
export function polylinePath(
  xs: readonly number[],
  ys: readonly number[],
  sx: Scale,
  sy: Scale,
): string {
  if (xs.length !== ys.length || xs.length === 0) {
    throw new Error("polyline needs matching nonempty coordinate arrays");
  }
  const parts: string[] = [];
  for (let i = 0; i < xs.length; i++) {
    const cmd = i === 0 ? "M" : "L";
    parts.push(`${cmd}${fmt(sx.map(xs[i]!))} ${fmt(sy.map(ys[i]!))}`);
  }
  return parts.join("");
}

export function svgDocument(
  width: number,
  height: number,
  body: string,
): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
    `height="${height}" viewBox="0 0 ${width} ${height}" ` +
    `font-family="sans-serif">\n` +
    `<rect width="${width}" height="${height}" fill="white"/>\n` +
    body +
    `</svg>\n`
  );
}
