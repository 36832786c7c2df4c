/**
 * Sweep chart geometry. The server's samples are plotted verbatim:
 * continuous sources draw a line (or right-continuous step curve when the
 * traced root sits on a discrete scale), functional requirements draw two
 * bars (their only two states). Target/threshold guides come from the
 * model, drawn as horizontal lines on the traced root's axis.
 */

import type { ModelJson, SweepJson } from "./types.js";

export interface ChartGeometry {
  kind: "line" | "step" | "bars";
  /** svg path for line/step charts */
  path: string;
  /** bar rectangles for functional sources */
  bars: { x: number; y: number; w: number; h: number; label: string }[];
  targetY: number | null;
  thresholdY: number | null;
  width: number;
  height: number;
  xOf: (level: number) => number;
  yOf: (value: number) => number;
  points: { x: number; y: number; level: number; value: number }[];
}

export const CHART_W = 520;
export const CHART_H = 260;
const PAD = 36;

export function buildChart(model: ModelJson, sweep: SweepJson,
                           root: string): ChartGeometry {
  const samples = sweep.samples;
  const values = samples.map((s) => s.root_achieved[root])
    .filter((v): v is number => v !== null);
  const levels = samples.map((s) => s.level);
  const rootObj = model.objectives[root];
  const guides = rootObj ? [rootObj.target, rootObj.threshold] : [];
  const lo = Math.min(0, ...values, ...guides);
  const hi = Math.max(1e-9, ...values, ...guides);
  const xLo = Math.min(...levels);
  const xHi = Math.max(...levels);
  const xOf = (level: number) =>
    PAD + ((level - xLo) / Math.max(xHi - xLo, 1e-9)) * (CHART_W - 2 * PAD);
  const yOf = (value: number) =>
    CHART_H - PAD - ((value - lo) / (hi - lo)) * (CHART_H - 2 * PAD);

  const sweptIsFunctional =
    model.requirements[sweep.node]?.kind === "functional";
  const rootDiscrete = rootObj?.scale_kind === "discrete";

  const points = samples
    .filter((s) => s.root_achieved[root] !== null)
    .map((s) => {
      const value = s.root_achieved[root] as number;
      return { x: xOf(s.level), y: yOf(value), level: s.level, value };
    });

  const geometry: ChartGeometry = {
    kind: sweptIsFunctional ? "bars" : rootDiscrete ? "step" : "line",
    path: "",
    bars: [],
    targetY: rootObj ? yOf(rootObj.target) : null,
    thresholdY: rootObj ? yOf(rootObj.threshold) : null,
    width: CHART_W,
    height: CHART_H,
    xOf,
    yOf,
    points,
  };

  if (geometry.kind === "bars") {
    // binary domain: one bar per distinct outcome (off / fully satisfied)
    const off = points.find((p) => p.level < 1);
    const on = points.find((p) => p.level >= 1);
    const barW = (CHART_W - 2 * PAD) / 5;
    const floor = yOf(Math.max(lo, 0));
    const bar = (p: { y: number; value: number }, x: number, label: string) => ({
      x, y: Math.min(p.y, floor), w: barW,
      h: Math.abs(floor - p.y), label,
    });
    if (off) geometry.bars.push(bar(off, PAD + barW * 0.8, "unsatisfied"));
    if (on) geometry.bars.push(bar(on, PAD + barW * 3.2, "satisfied"));
    return geometry;
  }

  if (geometry.kind === "step") {
    // right-continuous staircase: hold each value until the next sample
    let path = "";
    points.forEach((p, i) => {
      if (i === 0) {
        path += `M ${p.x} ${p.y}`;
      } else {
        path += ` H ${p.x} V ${p.y}`;
      }
    });
    geometry.path = path;
    return geometry;
  }

  geometry.path = points
    .map((p, i) => `${i === 0 ? "M" : "L"} ${p.x} ${p.y}`)
    .join(" ");
  return geometry;
}

export function renderSweepChart(model: ModelJson, sweep: SweepJson,
                                 root: string): string {
  const g = buildChart(model, sweep, root);
  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" class="sweep-chart" `
    + `viewBox="0 0 ${g.width} ${g.height}" width="${g.width}" `
    + `height="${g.height}">`);
  parts.push(`<rect x="0" y="0" width="${g.width}" height="${g.height}" `
    + `fill="white" stroke="#ccc"/>`);
  if (g.targetY !== null) {
    parts.push(`<line class="guide target" x1="${PAD}" x2="${g.width - PAD}" `
      + `y1="${g.targetY}" y2="${g.targetY}" stroke="green" `
      + `stroke-dasharray="6 3"/>`);
    parts.push(`<text x="${g.width - PAD + 2}" y="${g.targetY + 3}" `
      + `font-size="9" fill="green">target</text>`);
  }
  if (g.thresholdY !== null) {
    parts.push(`<line class="guide threshold" x1="${PAD}" x2="${g.width - PAD}" `
      + `y1="${g.thresholdY}" y2="${g.thresholdY}" stroke="darkorange" `
      + `stroke-dasharray="3 3"/>`);
  }
  if (g.kind === "bars") {
    for (const bar of g.bars) {
      parts.push(`<rect class="bar" x="${bar.x}" y="${bar.y}" width="${bar.w}" `
        + `height="${bar.h}" fill="steelblue"/>`);
      parts.push(`<text x="${bar.x + bar.w / 2}" y="${CHART_H - PAD + 14}" `
        + `font-size="10" text-anchor="middle">${bar.label}</text>`);
    }
  } else {
    parts.push(`<path class="curve ${g.kind}" d="${g.path}" fill="none" `
      + `stroke="steelblue" stroke-width="2"/>`);
  }
  parts.push("</svg>");
  return parts.join("\n");
}
