/**
 * Table-function editor model: knot placement and dragging with x-order
 * preserved by insertion, plus a sketch preview of the knots under the
 * chosen interpolation. The sketch draws the analyst's own inputs (their
 * knots joined as staircase or polyline) — evaluated contribution numbers
 * still come only from the server after the proposal round-trips.
 */

import { validateProposal } from "./schema.js";
import type { TableJson } from "./types.js";

export interface EditorState {
  linkId: string;
  points: [number, number][];
  interpolation: TableJson["interpolation"];
  extrapolation: TableJson["extrapolation"];
}

export function editorFrom(linkId: string, table: TableJson | null): EditorState {
  return {
    linkId,
    points: table ? table.points.map(([x, y]) => [x, y] as [number, number]) : [],
    interpolation: table?.interpolation ?? "linear",
    extrapolation: table?.extrapolation ?? "clamp",
  };
}

/** Insert a knot keeping x strictly increasing (nudges duplicates right). */
export function addKnot(state: EditorState, x: number, y: number): EditorState {
  const points = state.points.map(([px, py]) => [px, py] as [number, number]);
  let nx = x;
  while (points.some(([px]) => px === nx)) nx += Number.EPSILON * Math.max(1, Math.abs(nx)) * 4 || 1e-9;
  points.push([nx, y]);
  points.sort((a, b) => a[0] - b[0]);
  return { ...state, points };
}

/** Drag knot i; x stays strictly between its neighbours. */
export function moveKnot(state: EditorState, index: number, x: number,
                         y: number): EditorState {
  const points = state.points.map(([px, py]) => [px, py] as [number, number]);
  if (index < 0 || index >= points.length) return state;
  const left = index > 0 ? points[index - 1][0] : -Infinity;
  const right = index < points.length - 1 ? points[index + 1][0] : Infinity;
  const eps = 1e-9;
  points[index] = [Math.min(Math.max(x, left + eps), right - eps), y];
  return { ...state, points };
}

export function removeKnot(state: EditorState, index: number): EditorState {
  if (state.points.length <= 2) return state;
  const points = state.points.filter((_, i) => i !== index);
  return { ...state, points };
}

export function proposalOf(state: EditorState): TableJson {
  return {
    points: state.points.map(([x, y]) => [x, y] as [number, number]),
    interpolation: state.interpolation,
    extrapolation: state.extrapolation,
  };
}

export function problemsOf(state: EditorState): string[] {
  return validateProposal(state.points);
}

/** y descends somewhere: mirror of the engine's graph-expansion audit. */
export function looksNonMonotone(state: EditorState): boolean {
  const ys = state.points.map(([, y]) => y);
  let rising = false;
  let falling = false;
  for (let i = 1; i < ys.length; i += 1) {
    if (ys[i] > ys[i - 1]) rising = true;
    if (ys[i] < ys[i - 1]) falling = true;
  }
  return rising && falling;
}

/** Sketch path of the knots (step or straight segments) for the preview. */
export function sketchPath(state: EditorState,
                           xOf: (x: number) => number,
                           yOf: (y: number) => number): string {
  if (state.points.length === 0) return "";
  const pts = state.points;
  const move = `M ${xOf(pts[0][0])} ${yOf(pts[0][1])}`;
  if (state.interpolation === "step_after") {
    let path = move;
    for (let i = 1; i < pts.length; i += 1) {
      path += ` H ${xOf(pts[i][0])} V ${yOf(pts[i][1])}`;
    }
    return path;
  }
  return move + pts.slice(1)
    .map(([x, y]) => ` L ${xOf(x)} ${yOf(y)}`).join("");
}
