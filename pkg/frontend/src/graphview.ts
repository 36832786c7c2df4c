/**
 * SVG rendering of the goal graph. Shapes follow the GRL reading (task
 * hexagon, hard-goal rounded box, soft-goal dashed ellipse, belief note)
 * and fills use the engine's four-status palette. Every displayed number
 * (achieved values, raw/adjusted contributions) is copied verbatim from
 * the server's result — the client computes geometry, never contributions.
 */

import { layout, NODE_H, NODE_W } from "./layout.js";
import type { EvaluationJson, ModelJson, NodeStatus } from "./types.js";
import { STATUS_COLORS } from "./types.js";

const NO_RESULT_FILL = "white";

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function trim(value: number | null): string {
  if (value === null) return "?";
  const rounded = Number(value.toPrecision(10));
  return String(rounded);
}

function statusOf(result: EvaluationJson | null, id: string): NodeStatus | null {
  return result?.outcomes[id]?.status ?? null;
}

export function renderGraph(model: ModelJson, result: EvaluationJson | null,
                            selected: string | null = null): string {
  const lay = layout(model);
  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" `
    + `viewBox="0 0 ${lay.width} ${lay.height}" class="graph" `
    + `width="${lay.width}" height="${lay.height}">`);

  for (const [linkId, link] of Object.entries(model.contributions).sort()) {
    const from = lay.positions.get(link.from);
    const to = lay.positions.get(link.to);
    if (!from || !to) continue;
    const x1 = from.x + NODE_W / 2;
    const y1 = from.y;
    const x2 = to.x + NODE_W / 2;
    const y2 = to.y + NODE_H;
    parts.push(`<line class="edge" data-link="${esc(linkId)}" x1="${x1}" `
      + `y1="${y1}" x2="${x2}" y2="${y2}" stroke="#555" `
      + `marker-end="url(#arrow)"/>`);
    const record = result?.outcomes[link.to]?.contributions
      .find((c) => c.link === linkId);
    const label = record
      ? `${linkId}: ${trim(record.raw)} / ${trim(record.adjusted)} @${record.confidence}`
      : `${linkId} @${link.confidence.value}`
        + (link.group ? ` ${link.group.mode}(${link.group.id})` : "");
    parts.push(`<text class="edge-label" data-link="${esc(linkId)}" `
      + `x="${(x1 + x2) / 2}" y="${(y1 + y2) / 2 - 4}" font-size="9" `
      + `text-anchor="middle">${esc(label)}</text>`);
  }

  for (const [id, dl] of Object.entries(model.decompositions).sort()) {
    const child = lay.positions.get(dl.child);
    const parent = lay.positions.get(dl.parent);
    if (!child || !parent) continue;
    parts.push(`<line class="edge decomposition" data-link="${esc(id)}" `
      + `x1="${child.x + NODE_W / 2}" y1="${child.y}" `
      + `x2="${parent.x + NODE_W / 2}" y2="${parent.y + NODE_H}" `
      + `stroke="#999" stroke-dasharray="6 3"/>`);
  }
  for (const [id, tl] of Object.entries(model.traces).sort()) {
    const from = lay.positions.get(tl.from);
    const to = lay.positions.get(tl.to);
    if (!from || !to) continue;
    parts.push(`<line class="edge trace" data-link="${esc(id)}" `
      + `x1="${from.x + NODE_W / 2}" y1="${from.y}" `
      + `x2="${to.x + NODE_W / 2}" y2="${to.y + NODE_H}" `
      + `stroke="#bbb" stroke-dasharray="2 3"/>`);
  }

  const nodeText = (id: string, title: string, pos: { x: number; y: number },
                    sub: string) => {
    const cx = pos.x + NODE_W / 2;
    return `<text x="${cx}" y="${pos.y + 22}" font-size="10" `
      + `text-anchor="middle" pointer-events="none">${esc(title)}</text>`
      + (sub ? `<text x="${cx}" y="${pos.y + 38}" font-size="10" `
        + `text-anchor="middle" pointer-events="none">${esc(sub)}</text>` : "");
  };

  for (const [id, req] of Object.entries(model.requirements).sort()) {
    const pos = lay.positions.get(id)!;
    const status = statusOf(result, id);
    const fill = status ? STATUS_COLORS[status] : NO_RESULT_FILL;
    const w = NODE_W;
    const h = NODE_H;
    const cut = 16;
    const points = [
      [pos.x + cut, pos.y], [pos.x + w - cut, pos.y], [pos.x + w, pos.y + h / 2],
      [pos.x + w - cut, pos.y + h], [pos.x + cut, pos.y + h], [pos.x, pos.y + h / 2],
    ].map((p) => p.join(",")).join(" ");
    const cls = selected === id ? "node requirement selected" : "node requirement";
    parts.push(`<polygon class="${cls}" data-node="${esc(id)}" `
      + `data-status="${status ?? ""}" points="${points}" fill="${fill}" `
      + `stroke="#333"/>`);
    const level = result?.outcomes[id]?.achieved;
    parts.push(nodeText(id, `${id} (${req.kind === "functional" ? "F" : "NF"})`,
                        pos, level === undefined ? req.headline
                          : `${req.headline} = ${trim(level ?? null)}`));
  }

  for (const [id, obj] of Object.entries(model.objectives).sort()) {
    const pos = lay.positions.get(id)!;
    const status = statusOf(result, id);
    const fill = status ? STATUS_COLORS[status] : NO_RESULT_FILL;
    const outcome = result?.outcomes[id];
    const achieved = outcome ? trim(outcome.achieved) : "";
    const sub = outcome
      ? `achieved ${achieved}${obj.unit === "%" ? "%" : " " + obj.unit} (${outcome.status})`
      : `${obj.focus}`;
    const cls = selected === id ? "node objective selected" : "node objective";
    parts.push(`<rect class="${cls}" data-node="${esc(id)}" `
      + `data-status="${status ?? ""}" x="${pos.x}" y="${pos.y}" `
      + `width="${NODE_W}" height="${NODE_H}" rx="14" fill="${fill}" `
      + `stroke="#333"/>`);
    parts.push(nodeText(id, obj.label.length > 34
      ? `${id}: ${obj.activity} ${obj.focus}` : obj.label, pos, sub));
  }

  for (const [id, sg] of Object.entries(model.softgoals).sort()) {
    const pos = lay.positions.get(id)!;
    parts.push(`<ellipse class="node softgoal" data-node="${esc(id)}" `
      + `cx="${pos.x + NODE_W / 2}" cy="${pos.y + NODE_H / 2}" `
      + `rx="${NODE_W / 2}" ry="${NODE_H / 2}" fill="white" stroke="#333" `
      + `stroke-dasharray="5 4"/>`);
    parts.push(nodeText(id, sg.statement, pos, `(${sg.level})`));
  }

  parts.push(`<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" `
    + `markerWidth="7" markerHeight="7" orient="auto-start-reverse">`
    + `<path d="M 0 0 L 10 5 L 0 10 z" fill="#555"/></marker></defs>`);
  parts.push("</svg>");
  return parts.join("\n");
}
