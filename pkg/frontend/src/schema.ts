/**
 * Client-side scenario validation mirroring the server's schema rules:
 * functional levels are binary, non-functional lie in [0, 1], OR selections
 * point at members of their group, confidence overrides stay in [0, 1].
 * A draft must come back clean before any POST.
 */

import type { ModelJson, ScenarioJson } from "./types.js";

export function validateScenario(draft: ScenarioJson, model: ModelJson): string[] {
  const problems: string[] = [];
  for (const [reqId, level] of Object.entries(draft.requirement_levels)) {
    const req = model.requirements[reqId];
    if (!req) {
      problems.push(`unknown requirement '${reqId}'`);
      continue;
    }
    if (typeof level !== "number" || Number.isNaN(level)) {
      problems.push(`level for '${reqId}' is not a number`);
    } else if (req.kind === "functional" && level !== 0 && level !== 1) {
      problems.push(`functional requirement '${reqId}' takes 0 or 1, got ${level}`);
    } else if (level < 0 || level > 1) {
      problems.push(`level for '${reqId}' outside [0, 1]: ${level}`);
    }
  }
  const orMembers = new Map<string, Set<string>>();
  for (const [linkId, link] of Object.entries(model.contributions)) {
    if (link.group && link.group.mode === "OR") {
      const members = orMembers.get(link.group.id) ?? new Set<string>();
      members.add(linkId);
      orMembers.set(link.group.id, members);
    }
  }
  for (const [groupId, linkId] of Object.entries(draft.or_selections)) {
    const members = orMembers.get(groupId);
    if (!members) {
      problems.push(`unknown OR group '${groupId}'`);
    } else if (!members.has(linkId)) {
      problems.push(`link '${linkId}' is not in OR group '${groupId}'`);
    }
  }
  for (const [linkId, value] of Object.entries(draft.confidence_override)) {
    if (!(linkId in model.contributions)) {
      problems.push(`confidence override for unknown link '${linkId}'`);
    } else if (typeof value !== "number" || value < 0 || value > 1) {
      problems.push(`confidence override for '${linkId}' outside [0, 1]`);
    }
  }
  const policy = draft.options.or_policy;
  if (policy !== "strict" && policy !== "best") {
    problems.push(`or_policy must be strict or best, got '${policy}'`);
  }
  return problems;
}

/** Table-function proposal sanity: x strictly increasing, length >= 2. */
export function validateProposal(points: [number, number][]): string[] {
  const problems: string[] = [];
  if (points.length < 2) {
    problems.push("a table needs at least two points");
  }
  for (let i = 1; i < points.length; i += 1) {
    if (!(points[i - 1][0] < points[i][0])) {
      problems.push(`x values must be strictly increasing (knot ${i + 1})`);
      break;
    }
  }
  for (const [x, y] of points) {
    if (!Number.isFinite(x) || !Number.isFinite(y)) {
      problems.push("knots must be finite numbers");
      break;
    }
  }
  return problems;
}
