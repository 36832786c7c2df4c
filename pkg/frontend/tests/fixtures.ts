/** Canned wire objects for unit tests (shapes per docs/schema.md). */

import type { EvaluationJson, ModelJson, SweepJson } from "../src/types.js";

export function miniModel(): ModelJson {
  return {
    schema: 1,
    kind: "goal_model",
    requirements: {
      r1: { kind: "functional", headline: "automate the thing",
            fit_criterion: "zero manual steps", label: "F[automate the thing](zero manual steps)" },
      r2: { kind: "non_functional", headline: "be quick",
            fit_criterion: "p95 under a second", label: "NF[be quick](p95 under a second)" },
    },
    objectives: {
      o1: { activity: "Reduced", object: "Ops", focus: "Handling Time",
            target: 30, threshold: 20, as_is: 100, direction: "reduction",
            unit: "%", scale: "", scale_kind: "continuous", timeframe: "",
            scope: "", author: "", label: "Reduced[Ops Handling Time](30%)" },
      o2: { activity: "Reduced", object: "Ops", focus: "Staffing",
            target: 2, threshold: 1, as_is: 9, direction: "reduction",
            unit: "FTE", scale: "", scale_kind: "discrete", timeframe: "",
            scope: "", author: "", label: "Reduced[Ops Staffing](2 FTE)" },
    },
    softgoals: { sg: { statement: "stay lean", level: "goal" } },
    beliefs: {},
    contributions: {
      LA: { from: "r1", to: "o1", effect: "reduction", unit: "%",
            quantification: { type: "single_point", point: 30, halfwidth: null },
            confidence: { value: 0.75, label: "great" }, group: null },
      LB: { from: "r2", to: "o1", effect: "reduction", unit: "%",
            quantification: { type: "single_point", point: 10, halfwidth: null },
            confidence: { value: 1, label: "perfect" },
            group: { id: "g", mode: "OR" } },
      LC: { from: "r1", to: "o1", effect: "reduction", unit: "%",
            quantification: { type: "single_point", point: 5, halfwidth: null },
            confidence: { value: 0.5, label: "average" },
            group: { id: "g", mode: "OR" } },
      LD: { from: "o1", to: "o2", effect: "reduction", unit: "FTE",
            quantification: { type: "table", ref: "f", table: {
              points: [[0, 0], [15, 1], [30, 2]],
              interpolation: "step_after", extrapolation: "clamp" } },
            confidence: { value: 1, label: null }, group: null },
    },
    decompositions: {},
    traces: { t: { from: "o2", to: "sg" } },
    root_weights: { o2: 1 },
    utilities: { o2: { points: [[0, 0], [2, 1]], interpolation: "linear",
                       extrapolation: "clamp" } },
    roots: ["o2"],
  };
}

/** Result whose numbers are deliberately NOT derivable from the model:
 * rendering must copy them verbatim, proving no client-side math. */
export function cannedResult(): EvaluationJson {
  return {
    schema: 1,
    kind: "evaluation_result",
    scenario: "canned",
    confidence_adjusted: true,
    outcomes: {
      r1: { achieved: 1, status: "satisfied", contributions: [] },
      r2: { achieved: 0.4, status: "unsatisfied", contributions: [] },
      o1: { achieved: 12.345, status: "unsatisfied", contributions: [
        { link: "LA", raw: 7.7, adjusted: 6.6, confidence: 0.75 },
        { link: "LB", raw: 5.5, adjusted: 5.745, confidence: 1 },
      ] },
      o2: { achieved: 1, status: "threshold_met", contributions: [
        { link: "LD", raw: 1, adjusted: 1, confidence: 1 },
      ] },
    },
    root_utilities: { o2: 0.5 },
    total_utility: 0.5,
    audit_flags: [{ code: "PARTIAL_UNMODELED", location: "link LA", message: "" }],
    note: "Confidence-adjusted contributions are an indication of the effects "
      + "of confidence, not expected values.",
  };
}

/** Right-continuous staircase a la the bundled fixture's link H. */
export function stepSweep(): SweepJson {
  const samples = [];
  for (let level = 0; level <= 50; level += 1) {
    const value = level >= 50 ? 3 : level >= 33 ? 2 : level >= 10 ? 1 : 0;
    samples.push({
      level,
      root_achieved: { o2: value },
      root_status: { o2: value >= 2 ? "satisfied" as const
        : value >= 1 ? "threshold_met" as const : "unsatisfied" as const },
      total_utility: null,
    });
  }
  return { schema: 1, kind: "sweep", node: "o1", samples };
}
