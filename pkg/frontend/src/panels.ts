/**
 * Compare and tracking panels: HTML tables straight from the server's
 * JSON, with delta highlighting and verdict badges. Pure string builders.
 */

import type { ComparisonJson, VarianceJson } from "./types.js";

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function trim(value: number | null): string {
  if (value === null) return "–";
  return String(Number(value.toPrecision(10)));
}

export function renderComparison(table: ComparisonJson): string {
  const parts: string[] = ['<table class="compare">'];
  parts.push("<thead><tr><th>row</th>"
    + table.columns.map((c) => `<th>${esc(c)}${c === table.baseline
      ? " (baseline)" : ""}</th>`).join("")
    + "</tr></thead><tbody>");
  for (const row of table.rows) {
    const cells = table.columns.map((col) => {
      const err = table.column_errors[col];
      const cell = table.cells[row]?.[col];
      if (!cell || cell.achieved === null) {
        return `<td class="missing">${esc(err ?? "–")}</td>`;
      }
      const deltaClass = cell.delta === null || col === table.baseline ? ""
        : cell.delta > 0 ? "delta-up" : cell.delta < 0 ? "delta-down" : "delta-zero";
      const delta = col === table.baseline || cell.delta === null ? ""
        : ` <span class="delta ${deltaClass}">${cell.delta >= 0 ? "+" : ""}${trim(cell.delta)}</span>`;
      const status = cell.status ? ` <span class="status ${cell.status}">${cell.status}</span>` : "";
      return `<td>${trim(cell.achieved)}${status}${delta}</td>`;
    });
    parts.push(`<tr><th>${esc(row)}</th>${cells.join("")}</tr>`);
  }
  parts.push("</tbody></table>");
  return parts.join("");
}

export function renderTracking(report: VarianceJson): string {
  const parts: string[] = ['<table class="tracking">'];
  parts.push("<thead><tr><th>objective</th><th>predicted</th><th>actual</th>"
    + "<th>gap</th><th>verdict</th><th>timeframe</th></tr></thead><tbody>");
  for (const row of report.rows) {
    parts.push(`<tr><th>${esc(row.objective)}</th>`
      + `<td>${trim(row.predicted)}</td>`
      + `<td>${trim(row.actual)}</td>`
      + `<td>${trim(row.gap)}</td>`
      + `<td><span class="verdict ${row.verdict}">${row.verdict}</span></td>`
      + `<td>${esc(row.timeframe || "–")}</td></tr>`);
  }
  parts.push("</tbody></table>");
  return parts.join("");
}
