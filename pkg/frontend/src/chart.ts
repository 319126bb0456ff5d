// Frontier chart rendered as a standalone SVG string.
//
// The chart is a pure function of solve response bodies, so it can be unit
// tested without a DOM. Fidelity rule: the plotted point sets are embedded
// verbatim in data-points attributes as JSON.stringify of the served value
// arrays, and the shaded area between the two staircases is computed with
// exact rational arithmetic using the same algorithm as the service
// (clip to box, drop weakly dominated corners, sum horizontal slabs).
// Floats appear only in pixel geometry.

import type { FrontierPointBody, SolveBody } from "./api.js";
import { Rat, ratFromJson } from "./rationals.js";

export type Pair = [Rat, Rat];

export function projectPoints(body: SolveBody, xDim: number, yDim: number): Pair[] {
  return body.points.map((p) => {
    const x = p.values[xDim];
    const y = p.values[yDim];
    if (x === undefined || y === undefined) {
      throw new Error(`point has no dimensions ${xDim},${yDim}`);
    }
    return [ratFromJson(x), ratFromJson(y)];
  });
}

/** Componentwise maximum; the origin when there are no points. */
export function idealPoint2d(points: Pair[]): Pair {
  let bx = Rat.zero();
  let by = Rat.zero();
  for (const [x, y] of points) {
    bx = bx.max(x);
    by = by.max(y);
  }
  return [bx, by];
}

function nondominated2d(points: Pair[]): Pair[] {
  const kept: Pair[] = [];
  for (const candidate of points) {
    const dominated = points.some(
      (other) =>
        (other[0].cmp(candidate[0]) !== 0 || other[1].cmp(candidate[1]) !== 0) &&
        other[0].cmp(candidate[0]) >= 0 &&
        other[1].cmp(candidate[1]) >= 0,
    );
    if (dominated) continue;
    if (kept.some((k) => k[0].cmp(candidate[0]) === 0 && k[1].cmp(candidate[1]) === 0)) continue;
    kept.push(candidate);
  }
  return kept;
}

function clipAndKeep(points: Pair[], box: Pair): Pair[] {
  const zero = Rat.zero();
  const clipped: Pair[] = [];
  for (const [x, y] of points) {
    const cx = x.min(box[0]);
    const cy = y.min(box[1]);
    if (cx.cmp(zero) > 0 && cy.cmp(zero) > 0) clipped.push([cx, cy]);
  }
  // descending x gives ascending y for a nondominated set
  return nondominated2d(clipped).sort((a, b) => {
    const byX = b[0].cmp(a[0]);
    return byX !== 0 ? byX : b[1].cmp(a[1]);
  });
}

/** Exact area of the union of [0,x]x[0,y] rectangles clipped to the box. */
export function staircaseArea(points: Pair[], box: Pair): Rat {
  const zero = Rat.zero();
  if (box[0].cmp(zero) <= 0 || box[1].cmp(zero) <= 0) return zero;
  let area = Rat.zero();
  let prevY = Rat.zero();
  for (const [x, y] of clipAndKeep(points, box)) {
    if (y.cmp(prevY) > 0) {
      area = area.add(x.mul(y.sub(prevY)));
      prevY = y;
    }
  }
  return area;
}

/** Area lost by the after frontier inside the before ideal box. */
export function dominatedShrink2d(before: Pair[], after: Pair[]): Rat {
  const box = idealPoint2d(before);
  return staircaseArea(before, box).sub(staircaseArea(after, box));
}

export function witnessLabel(point: FrontierPointBody): string {
  const parts = Object.entries(point.witness)
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([action, count]) => (count === 1 ? action : `${action} x${count}`));
  const doing = parts.length > 0 ? parts.join(", ") : "(do nothing)";
  if (point.alternates_count !== null && point.alternates_count > 1) {
    return `${doing} (+${point.alternates_count - 1} alternate doings)`;
  }
  return doing;
}

export interface ChartOptions {
  xDim: number;
  yDim: number;
  width?: number;
  height?: number;
  beforeLabel?: string;
  afterLabel?: string;
}

export interface ChartResult {
  svg: string;
  /** Exact string embedded as data-points for the before layer. */
  beforeData: string;
  afterData: string | null;
  /** Exact shrink area for the projected pair; null without an after layer. */
  shadedArea: Rat | null;
}

const XML_ESCAPES: Record<string, string> = {
  "&": "&amp;",
  "<": "&lt;",
  ">": "&gt;",
  '"': "&quot;",
};

function esc(text: string): string {
  return text.replace(/[&<>"]/g, (c) => XML_ESCAPES[c] ?? c);
}

function tickStep(span: number): number {
  if (span <= 0) return 1;
  const raw = span / 5;
  const power = 10 ** Math.floor(Math.log10(raw));
  for (const mult of [1, 2, 5, 10]) {
    if (raw <= mult * power) return mult * power;
  }
  return 10 * power;
}

function ticks(min: number, max: number): number[] {
  const step = tickStep(max - min);
  const out: number[] = [];
  for (let t = Math.ceil(min / step) * step; t <= max + step * 1e-9; t += step) {
    out.push(Math.abs(t) < step * 1e-9 ? 0 : t);
  }
  return out;
}

function fmt(n: number): string {
  return Number.isInteger(n) ? n.toString() : n.toFixed(2).replace(/\.?0+$/, "");
}

interface Scale {
  (value: number): number;
}

function makeScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (value) => r0 + ((value - d0) / span) * (r1 - r0);
}

/** Staircase boundary of the dominated region, as a closed SVG subpath. */
function regionSubpath(points: Pair[], box: Pair, sx: Scale, sy: Scale): string {
  const corners = clipAndKeep(points, box);
  if (corners.length === 0 || box[0].cmp(Rat.zero()) <= 0 || box[1].cmp(Rat.zero()) <= 0) {
    return "";
  }
  const x0 = sx(0);
  const y0 = sy(0);
  const first = corners[0]!;
  let d = `M ${x0.toFixed(2)} ${y0.toFixed(2)} L ${sx(first[0].toNumber()).toFixed(2)} ${y0.toFixed(2)}`;
  let prev = first;
  d += ` L ${sx(prev[0].toNumber()).toFixed(2)} ${sy(prev[1].toNumber()).toFixed(2)}`;
  for (const corner of corners.slice(1)) {
    if (corner[1].cmp(prev[1]) <= 0) continue; // duplicate slab edge
    d += ` L ${sx(corner[0].toNumber()).toFixed(2)} ${sy(prev[1].toNumber()).toFixed(2)}`;
    d += ` L ${sx(corner[0].toNumber()).toFixed(2)} ${sy(corner[1].toNumber()).toFixed(2)}`;
    prev = corner;
  }
  d += ` L ${x0.toFixed(2)} ${sy(prev[1].toNumber()).toFixed(2)} Z`;
  return d;
}

/** Open polyline along the staircase frontier, for the visible outline. */
function staircaseOutline(points: Pair[], sx: Scale, sy: Scale): string {
  const sorted = nondominated2d(points).sort((a, b) => b[0].cmp(a[0]));
  if (sorted.length === 0) return "";
  const first = sorted[0]!;
  let d = `M ${sx(first[0].toNumber()).toFixed(2)} ${sy(first[1].toNumber()).toFixed(2)}`;
  let prev = first;
  for (const corner of sorted.slice(1)) {
    d += ` L ${sx(corner[0].toNumber()).toFixed(2)} ${sy(prev[1].toNumber()).toFixed(2)}`;
    d += ` L ${sx(corner[0].toNumber()).toFixed(2)} ${sy(corner[1].toNumber()).toFixed(2)}`;
    prev = corner;
  }
  return d;
}

function pointMarkers(
  body: SolveBody,
  pairs: Pair[],
  sx: Scale,
  sy: Scale,
  cls: string,
): string {
  const dims = body.dimensions;
  const circles = body.points.map((point, i) => {
    const pair = pairs[i]!;
    const cx = sx(pair[0].toNumber()).toFixed(2);
    const cy = sy(pair[1].toNumber()).toFixed(2);
    const coords = dims.map((d, k) => `${d}=${String(point.values[k])}`).join(", ");
    const title = esc(`${coords}\n${witnessLabel(point)}`);
    return `<circle class="pt ${cls}" cx="${cx}" cy="${cy}" r="4"><title>${title}</title></circle>`;
  });
  return circles.join("");
}

export function renderFrontierChart(
  before: SolveBody,
  after: SolveBody | null,
  options: ChartOptions,
): ChartResult {
  const { xDim, yDim } = options;
  const width = options.width ?? 560;
  const height = options.height ?? 420;
  const margin = { left: 58, right: 16, top: 18, bottom: 46 };
  const xName = before.dimensions[xDim] ?? `dim ${xDim}`;
  const yName = before.dimensions[yDim] ?? `dim ${yDim}`;

  const beforePairs = projectPoints(before, xDim, yDim);
  const afterPairs = after === null ? null : projectPoints(after, xDim, yDim);

  const beforeData = JSON.stringify(before.points.map((p) => p.values));
  const afterData = after === null ? null : JSON.stringify(after.points.map((p) => p.values));

  // domain covers both frontiers plus the origin, with a little headroom
  let xMin = 0;
  let yMin = 0;
  let xMax = 1;
  let yMax = 1;
  for (const [x, y] of [...beforePairs, ...(afterPairs ?? [])]) {
    xMin = Math.min(xMin, x.toNumber());
    yMin = Math.min(yMin, y.toNumber());
    xMax = Math.max(xMax, x.toNumber());
    yMax = Math.max(yMax, y.toNumber());
  }
  xMax += (xMax - xMin) * 0.08 || 1;
  yMax += (yMax - yMin) * 0.08 || 1;

  const sx = makeScale(xMin, xMax, margin.left, width - margin.right);
  const sy = makeScale(yMin, yMax, height - margin.bottom, margin.top);

  const box = idealPoint2d(beforePairs);
  let shadedArea: Rat | null = null;
  let shading = "";
  let badge = "";
  if (afterPairs !== null) {
    shadedArea = staircaseArea(beforePairs, box).sub(staircaseArea(afterPairs, box));
    const beforeRegion = regionSubpath(beforePairs, box, sx, sy);
    const afterRegion = regionSubpath(afterPairs, box, sx, sy);
    if (beforeRegion !== "" || afterRegion !== "") {
      // even-odd over both regions shades exactly where they disagree
      shading = `<path class="shrink" fill-rule="evenodd" d="${(beforeRegion + " " + afterRegion).trim()}"/>`;
    }
    if (after !== null && after.points.length === 0) {
      badge = `<text class="badge" x="${(width / 2).toFixed(2)}" y="${(margin.top + 14).toFixed(2)}">after frontier is empty</text>`;
    }
  }

  const axisParts: string[] = [];
  const x0px = sx(xMin);
  const y0px = sy(yMin);
  axisParts.push(
    `<line class="axis" x1="${x0px.toFixed(2)}" y1="${y0px.toFixed(2)}" x2="${sx(xMax).toFixed(2)}" y2="${y0px.toFixed(2)}"/>`,
    `<line class="axis" x1="${x0px.toFixed(2)}" y1="${y0px.toFixed(2)}" x2="${x0px.toFixed(2)}" y2="${sy(yMax).toFixed(2)}"/>`,
  );
  for (const t of ticks(xMin, xMax)) {
    const px = sx(t).toFixed(2);
    axisParts.push(
      `<line class="tick" x1="${px}" y1="${y0px.toFixed(2)}" x2="${px}" y2="${(y0px + 5).toFixed(2)}"/>`,
      `<text class="tick-label" x="${px}" y="${(y0px + 18).toFixed(2)}" text-anchor="middle">${fmt(t)}</text>`,
    );
  }
  for (const t of ticks(yMin, yMax)) {
    const py = sy(t).toFixed(2);
    axisParts.push(
      `<line class="tick" x1="${(x0px - 5).toFixed(2)}" y1="${py}" x2="${x0px.toFixed(2)}" y2="${py}"/>`,
      `<text class="tick-label" x="${(x0px - 9).toFixed(2)}" y="${py}" text-anchor="end" dominant-baseline="middle">${fmt(t)}</text>`,
    );
  }
  axisParts.push(
    `<text class="axis-name" x="${((margin.left + width - margin.right) / 2).toFixed(2)}" y="${(height - 8).toFixed(2)}" text-anchor="middle">${esc(xName)}</text>`,
    `<text class="axis-name" x="14" y="${((margin.top + height - margin.bottom) / 2).toFixed(2)}" text-anchor="middle" transform="rotate(-90 14 ${((margin.top + height - margin.bottom) / 2).toFixed(2)})">${esc(yName)}</text>`,
  );

  const beforeLayer =
    `<g class="frontier frontier-before" data-points="${esc(beforeData)}">` +
    `<path class="stair stair-before" d="${staircaseOutline(beforePairs, sx, sy)}"/>` +
    pointMarkers(before, beforePairs, sx, sy, "pt-before") +
    `</g>`;
  const afterLayer =
    after === null || afterPairs === null
      ? ""
      : `<g class="frontier frontier-after" data-points="${esc(afterData!)}">` +
        `<path class="stair stair-after" d="${staircaseOutline(afterPairs, sx, sy)}"/>` +
        pointMarkers(after, afterPairs, sx, sy, "pt-after") +
        `</g>`;

  const legendParts = [
    `<circle class="pt pt-before" cx="${(width - margin.right - 150).toFixed(2)}" cy="${(margin.top + 6).toFixed(2)}" r="4"/>`,
    `<text class="legend" x="${(width - margin.right - 140).toFixed(2)}" y="${(margin.top + 10).toFixed(2)}">${esc(options.beforeLabel ?? "before")}</text>`,
  ];
  if (after !== null) {
    legendParts.push(
      `<circle class="pt pt-after" cx="${(width - margin.right - 150).toFixed(2)}" cy="${(margin.top + 24).toFixed(2)}" r="4"/>`,
      `<text class="legend" x="${(width - margin.right - 140).toFixed(2)}" y="${(margin.top + 28).toFixed(2)}">${esc(options.afterLabel ?? "after")}</text>`,
    );
  }

  const emptyNote =
    before.points.length === 0 && (after === null || after.points.length === 0)
      ? `<text class="badge" x="${(width / 2).toFixed(2)}" y="${(height / 2).toFixed(2)}" text-anchor="middle">no feasible doings</text>`
      : "";

  const svg =
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}" role="img">` +
    shading +
    axisParts.join("") +
    beforeLayer +
    afterLayer +
    legendParts.join("") +
    badge +
    emptyNote +
    `</svg>`;

  return { svg, beforeData, afterData, shadedArea };
}
