/**
 * Scenario-draft state: pure operations the panels dispatch.
 * Every transition keeps the draft schema-valid for its model (validated
 * by schema.ts before any POST).
 */

import type { ModelJson, ScenarioJson } from "./types.js";

export type Panel = "graph" | "compare" | "sweep" | "function-editor" | "tracking";

export interface ViewState {
  draft: ScenarioJson;
  selectedNode: string | null;
  panel: Panel;
}

export function emptyDraft(id = "draft"): ScenarioJson {
  return {
    id,
    requirement_levels: {},
    or_selections: {},
    confidence_override: {},
    options: {
      confidence_adjust: true,
      single_point_proration: false,
      or_policy: "strict",
    },
  };
}

export function initialState(model: ModelJson): ViewState {
  const draft = emptyDraft();
  // start from every requirement fully satisfied: the interesting question
  // is what stops being met as the analyst switches things off
  for (const id of Object.keys(model.requirements).sort()) {
    draft.requirement_levels[id] = 1;
  }
  return { draft, selectedNode: null, panel: "graph" };
}

export function setLevel(draft: ScenarioJson, model: ModelJson, reqId: string,
                         level: number): ScenarioJson {
  const req = model.requirements[reqId];
  if (!req) return draft;
  const clamped = Math.min(1, Math.max(0, level));
  const value = req.kind === "functional" ? (clamped >= 0.5 ? 1 : 0) : clamped;
  return {
    ...draft,
    requirement_levels: { ...draft.requirement_levels, [reqId]: value },
  };
}

export function toggleRequirement(draft: ScenarioJson, model: ModelJson,
                                  reqId: string): ScenarioJson {
  const current = draft.requirement_levels[reqId] ?? 0;
  return setLevel(draft, model, reqId, current >= 1 ? 0 : 1);
}

export function selectOr(draft: ScenarioJson, model: ModelJson, groupId: string,
                         linkId: string): ScenarioJson {
  const member = Object.entries(model.contributions).some(
    ([id, link]) => id === linkId && link.group?.id === groupId
      && link.group.mode === "OR");
  if (!member) return draft;
  return { ...draft, or_selections: { ...draft.or_selections, [groupId]: linkId } };
}

export function clearOr(draft: ScenarioJson, groupId: string): ScenarioJson {
  const selections = { ...draft.or_selections };
  delete selections[groupId];
  return { ...draft, or_selections: selections };
}

export function overrideConfidence(draft: ScenarioJson, model: ModelJson,
                                   linkId: string, value: number): ScenarioJson {
  if (!(linkId in model.contributions)) return draft;
  const clamped = Math.min(1, Math.max(0, value));
  return {
    ...draft,
    confidence_override: { ...draft.confidence_override, [linkId]: clamped },
  };
}

export function clearConfidenceOverride(draft: ScenarioJson,
                                        linkId: string): ScenarioJson {
  const overrides = { ...draft.confidence_override };
  delete overrides[linkId];
  return { ...draft, confidence_override: overrides };
}

export function setConfidenceAdjust(draft: ScenarioJson, on: boolean): ScenarioJson {
  return { ...draft, options: { ...draft.options, confidence_adjust: on } };
}

export function setProration(draft: ScenarioJson, on: boolean): ScenarioJson {
  return { ...draft, options: { ...draft.options, single_point_proration: on } };
}

export function setOrPolicy(draft: ScenarioJson,
                            policy: "strict" | "best"): ScenarioJson {
  return { ...draft, options: { ...draft.options, or_policy: policy } };
}

/** OR groups of the model with their member links, for the sidebar. */
export function orGroups(model: ModelJson): Map<string, string[]> {
  const groups = new Map<string, string[]>();
  for (const [id, link] of Object.entries(model.contributions).sort()) {
    if (link.group && link.group.mode === "OR") {
      const members = groups.get(link.group.id) ?? [];
      members.push(id);
      groups.set(link.group.id, members);
    }
  }
  return groups;
}
