/**
 * Wire types for the goalgraph JSON API (schema version 1).
 * Mirrors docs/schema.md; the client treats every number as opaque data
 * from the server — no contribution math happens in the browser.
 */

export type NodeStatus = "satisfied" | "threshold_met" | "unsatisfied" | "indeterminate";

export type Direction = "reduction" | "increase";

export interface TableJson {
  points: [number, number][];
  interpolation: "step_after" | "linear" | "monotone_cubic" | "cardinal";
  extrapolation: "clamp" | "extend_slope" | "reject";
  tension?: number;
}

export interface ObjectiveJson {
  activity: string;
  object: string;
  focus: string;
  target: number;
  threshold: number;
  as_is: number | null;
  direction: Direction;
  unit: string;
  scale: string;
  scale_kind: "continuous" | "discrete";
  timeframe: string;
  scope: string;
  author: string;
  label: string;
}

export interface RequirementJson {
  kind: "functional" | "non_functional";
  headline: string;
  fit_criterion: string;
  label: string;
}

export interface QuantificationJson {
  type: "single_point" | "table";
  point?: number;
  halfwidth?: number | null;
  ref?: string | null;
  table?: TableJson;
}

export interface LinkJson {
  from: string;
  to: string;
  quantification: QuantificationJson;
  effect: Direction;
  unit: string;
  confidence: { value: number; label: string | null };
  group: { id: string; mode: "AND" | "OR" } | null;
}

export interface ModelJson {
  schema: number;
  kind: "goal_model";
  objectives: Record<string, ObjectiveJson>;
  requirements: Record<string, RequirementJson>;
  softgoals: Record<string, { statement: string; level: string }>;
  beliefs: Record<string, { statement: string; attached_to: string }>;
  contributions: Record<string, LinkJson>;
  decompositions: Record<string, { parent: string; child: string }>;
  traces: Record<string, { from: string; to: string }>;
  root_weights: Record<string, number>;
  utilities: Record<string, TableJson>;
  roots: string[];
}

export interface ScenarioOptionsJson {
  confidence_adjust: boolean;
  single_point_proration: boolean;
  or_policy: "strict" | "best";
}

export interface ScenarioJson {
  id: string;
  requirement_levels: Record<string, number>;
  or_selections: Record<string, string>;
  confidence_override: Record<string, number>;
  options: ScenarioOptionsJson;
}

export interface ContributionRecordJson {
  link: string;
  raw: number;
  adjusted: number;
  confidence: number;
}

export interface OutcomeJson {
  achieved: number | null;
  status: NodeStatus;
  contributions: ContributionRecordJson[];
}

export interface EvaluationJson {
  schema: number;
  kind: "evaluation_result";
  scenario: string;
  confidence_adjusted: boolean;
  outcomes: Record<string, OutcomeJson>;
  root_utilities: Record<string, number>;
  total_utility: number | null;
  audit_flags: { code: string; location: string; message: string }[];
  intervals?: Record<string, { lo: number; hi: number; status_lo: NodeStatus;
                               status_hi: NodeStatus; exact: boolean }>;
  note: string;
}

export interface SweepSampleJson {
  level: number;
  root_achieved: Record<string, number | null>;
  root_status: Record<string, NodeStatus>;
  total_utility: number | null;
}

export interface SweepJson {
  schema: number;
  kind: "sweep";
  node: string;
  samples: SweepSampleJson[];
}

export interface ComparisonCellJson {
  achieved: number | null;
  status: NodeStatus | null;
  delta: number | null;
}

export interface ComparisonJson {
  schema: number;
  kind: "comparison";
  baseline: string;
  rows: string[];
  columns: string[];
  cells: Record<string, Record<string, ComparisonCellJson>>;
  column_errors: Record<string, string>;
}

export interface VarianceRowJson {
  objective: string;
  predicted: number | null;
  actual: number | null;
  gap: number | null;
  verdict: "on_track" | "behind" | "exceeded" | "no_data";
  as_is: number | null;
  latest: number | null;
  timeframe: string;
}

export interface VarianceJson {
  schema: number;
  kind: "variance_report";
  rows: VarianceRowJson[];
}

export interface ScenarioSetJson {
  schema: number;
  kind?: "scenario_set";
  baseline: string | null;
  scenarios: Partial<ScenarioJson>[];
  function_proposals?: Record<string, TableJson>;
  persisted?: boolean;
}

/** Status fill colors; must match the engine's DOT palette. */
export const STATUS_COLORS: Record<NodeStatus, string> = {
  satisfied: "palegreen",
  threshold_met: "khaki",
  unsatisfied: "lightcoral",
  indeterminate: "lightgray",
};
