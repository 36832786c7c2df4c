/**
 * Layered positions from the model's structure hints: a node's rank is its
 * topological depth over contribution links (requirements at the bottom,
 * roots on top), laid out on a simple grid — no layout engine.
 */

import type { ModelJson } from "./types.js";

export interface NodePosition {
  x: number;
  y: number;
  rank: number;
}

export interface Layout {
  positions: Map<string, NodePosition>;
  width: number;
  height: number;
  ranks: number;
}

export const NODE_W = 170;
export const NODE_H = 54;
const GAP_X = 40;
const GAP_Y = 70;

export function rankNodes(model: ModelJson): Map<string, number> {
  const ranks = new Map<string, number>();
  for (const id of Object.keys(model.requirements)) ranks.set(id, 0);
  for (const id of Object.keys(model.objectives)) ranks.set(id, 1);
  // relax until stable: target rank > every source rank
  const links = Object.values(model.contributions);
  for (let pass = 0; pass < links.length + 2; pass += 1) {
    let changed = false;
    for (const link of links) {
      const from = ranks.get(link.from);
      const to = ranks.get(link.to);
      if (from === undefined || to === undefined) continue;
      if (to <= from) {
        ranks.set(link.to, from + 1);
        changed = true;
      }
    }
    if (!changed) break;
  }
  // soft goals float one layer above the highest objective that traces to them
  const top = Math.max(0, ...ranks.values());
  for (const id of Object.keys(model.softgoals)) ranks.set(id, top + 1);
  return ranks;
}

export function layout(model: ModelJson): Layout {
  const ranks = rankNodes(model);
  const byRank = new Map<number, string[]>();
  for (const [id, rank] of ranks) {
    const row = byRank.get(rank) ?? [];
    row.push(id);
    byRank.set(rank, row);
  }
  const rankCount = byRank.size === 0 ? 0 : Math.max(...byRank.keys()) + 1;
  const widest = Math.max(1, ...[...byRank.values()].map((row) => row.length));
  const width = widest * (NODE_W + GAP_X) + GAP_X;
  const height = Math.max(1, rankCount) * (NODE_H + GAP_Y) + GAP_Y;
  const positions = new Map<string, NodePosition>();
  for (const [rank, row] of byRank) {
    row.sort();
    const rowWidth = row.length * (NODE_W + GAP_X) - GAP_X;
    const left = (width - rowWidth) / 2;
    // rank 0 (requirements) at the bottom
    const y = height - (rank + 1) * (NODE_H + GAP_Y);
    row.forEach((id, i) => {
      positions.set(id, { x: left + i * (NODE_W + GAP_X), y, rank });
    });
  }
  return { positions, width, height, ranks: rankCount };
}
