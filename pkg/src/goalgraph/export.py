"""DOT diagrams, tabular reports, and the canonical JSON mirror.

All emitters are pure and byte-deterministic: identical inputs produce
identical text. The JSON mirror is schema-versioned ("schema": 1) with
sorted keys; model numbers are written as exact decimal tokens so that
from_json(to_json(m)) reproduces m. docs/schema.md documents every field.
"""

from __future__ import annotations

import json
import math
from decimal import Decimal

from .engine import (
    AuditFlag,
    ChainSummary,
    ContributionRecord,
    EvaluationResult,
    IntervalOutcome,
    NodeOutcome,
    OrPolicy,
    Scenario,
    ScenarioOptions,
    Status,
)
from .errors import SchemaVersionError
from .functions import Extrapolation, Interpolation, TableFunction
from .model import (
    Belief,
    Confidence,
    ContributionLink,
    DecompositionLink,
    Direction,
    Estimate,
    FitCriterion,
    GoalModel,
    GroupMode,
    LinkGroup,
    Magnitude,
    Objective,
    Requirement,
    RequirementKind,
    Scale,
    ScaleKind,
    SoftGoal,
    SoftGoalLevel,
    TraceLink,
    ValidationIssue,
    ValidationReport,
    format_decimal,
    format_label,
    roots,
)
from .tracking import VarianceRow
from .whatif import ComparisonTable, SweepResult

SCHEMA_VERSION = 1

#: GRL-style fill per evaluation status.
STATUS_COLORS = {
    Status.SATISFIED: "palegreen",
    Status.THRESHOLD_MET: "khaki",
    Status.UNSATISFIED: "lightcoral",
    Status.INDETERMINATE: "lightgray",
}


# ---------------------------------------------------------------------------
# DOT

def to_dot(model: GoalModel, result: EvaluationResult | None = None) -> str:
    """GRL-style DOT rendering.

    Tasks are hexagons, hard goals rounded boxes, soft goals dashed
    ellipses, beliefs notes. Contribution edges carry
    "[amount] [activity] @confidence" labels plus AND/OR group tags; with a
    result, node fill encodes the four statuses. Layout is left to DOT:
    only rank hints are emitted (requirements at the bottom, roots on top).
    """
    lines = ["digraph goalgraph {", "  rankdir=BT;",
             '  node [fontname="Helvetica", fontsize=10];',
             '  edge [fontname="Helvetica", fontsize=8];']
    if result is not None and result.confidence_adjusted:
        lines.append(f'  graph [comment={_dot_str(result.note)}];')

    def fill(node_id: str) -> str:
        if result is None or node_id not in result.outcomes:
            return ""
        color = STATUS_COLORS[result.outcomes[node_id].status]
        return f', style="filled", fillcolor="{color}"'

    for req in sorted(model.requirements.values(), key=lambda r: r.id):
        lines.append(f'  {_dot_id(req.id)} [shape=hexagon, '
                     f'label={_dot_str(format_label(req))}{fill(req.id)}];')
    for obj in sorted(model.objectives.values(), key=lambda o: o.id):
        style = 'style="rounded"' if result is None or obj.id not in result.outcomes \
            else f'style="rounded,filled", fillcolor="{STATUS_COLORS[result.outcomes[obj.id].status]}"'
        label = format_label(obj)
        extra = ""
        if result is not None and obj.id in result.outcomes:
            outcome = result.outcomes[obj.id]
            if outcome.achieved is not None:
                if obj.scale.kind is ScaleKind.DISCRETE:
                    # display rounds half-to-even; raw value kept in a tooltip
                    label += f"\nachieved {round(outcome.achieved)}"
                    extra = f', tooltip={_dot_str(f"raw {_disp(outcome.achieved)}")}'
                else:
                    label += f"\nachieved {_disp(outcome.achieved)}"
        lines.append(f'  {_dot_id(obj.id)} [shape=box, {style}, '
                     f'label={_dot_str(label)}{extra}];')
    for sg in sorted(model.softgoals.values(), key=lambda s: s.id):
        lines.append(f'  {_dot_id(sg.id)} [shape=ellipse, style="dashed", '
                     f'label={_dot_str(sg.statement)}];')
    for belief in sorted(model.beliefs.values(), key=lambda b: b.id):
        lines.append(f'  {_dot_id(belief.id)} [shape=note, '
                     f'label={_dot_str(belief.statement)}];')

    for link in sorted(model.contributions.values(), key=lambda l: l.id):
        label = _edge_label(model, link)
        lines.append(f'  {_dot_id(link.source)} -> {_dot_id(link.target)} '
                     f'[label={_dot_str(label)}];')
    for dl in sorted(model.decompositions.values(), key=lambda d: d.id):
        lines.append(f'  {_dot_id(dl.child)} -> {_dot_id(dl.parent)} '
                     f'[style=dashed, arrowhead=onormal, label={_dot_str(dl.id)}];')
    for tl in sorted(model.traces.values(), key=lambda t: t.id):
        lines.append(f'  {_dot_id(tl.source)} -> {_dot_id(tl.target)} '
                     f'[style=dotted, arrowhead=open, label={_dot_str(tl.id)}];')
    for belief in sorted(model.beliefs.values(), key=lambda b: b.id):
        target = belief.attached_to
        anchor = target if target in model.node_ids() else None
        if anchor is None and target in model.contributions:
            anchor = model.contributions[target].target
        if anchor is not None:
            lines.append(f'  {_dot_id(belief.id)} -> {_dot_id(anchor)} '
                         f'[style=dotted, arrowhead=none];')

    req_ids = sorted(model.requirements)
    if req_ids:
        lines.append(f'  {{ rank=min; {"; ".join(_dot_id(r) for r in req_ids)}; }}')
    root_ids = roots(model)
    if root_ids:
        lines.append(f'  {{ rank=max; {"; ".join(_dot_id(r) for r in root_ids)}; }}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _edge_label(model: GoalModel, link: ContributionLink) -> str:
    activity = "Reduction" if link.effect is Direction.REDUCTION else "Increase"
    q = link.quantification
    if isinstance(q, Estimate):
        amount = _amount(format_decimal(q.point), link.unit)
        if q.halfwidth is not None:
            amount = _amount(f"{format_decimal(q.point)} +/- {format_decimal(q.halfwidth)}",
                             link.unit)
    else:
        ys = q.ys()
        amount = _amount(f"{_num(min(ys))}..{_num(max(ys))}", link.unit)
    label = f"{link.id}: [{amount}] {activity} @{float(link.confidence.value):.2f}"
    if link.group is not None:
        label += f" {link.group.mode.value}({link.group.id})"
    return label


def _amount(text: str, unit: str) -> str:
    return f"{text}{unit}" if unit == "%" else f"{text} {unit}"


def _dot_id(raw: str) -> str:
    if raw and raw.replace("_", "").isalnum() and not raw[0].isdigit():
        return raw
    return _dot_str(raw)


def _dot_str(raw: str) -> str:
    escaped = raw.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{escaped}"'


# ---------------------------------------------------------------------------
# link/status report

def report(model: GoalModel, result: EvaluationResult, fmt: str = "markdown") -> str:
    """Contribution table plus per-objective status section.

    One row per link: the contribution that flowed in this evaluation, the
    confidence used, and the adjusted figure exactly as it was summed (so
    the report and the JSON mirror agree number-for-number). Links that did
    not evaluate (indeterminate targets, unselected OR branches) show their
    nominal full-satisfaction contribution with a "-" adjusted column.
    """
    if fmt not in ("markdown", "csv"):
        raise ValueError(f"unknown report format {fmt!r}")
    records = {}
    for outcome in result.outcomes.values():
        for rec in outcome.contributions:
            records[rec.link_id] = rec
    link_rows = []
    for link in sorted(model.contributions.values(), key=lambda l: l.id):
        target = model.objectives.get(link.target)
        unit = link.unit
        activity = "Reduction" if link.effect is Direction.REDUCTION else "Increase"
        focus = target.focus if target is not None else link.target
        rec = records.get(link.id)
        if rec is None:
            amount, conf, adjusted = (_nominal_contribution(model, link),
                                      float(link.confidence.value), "-")
        else:
            amount, conf, adjusted = (abs(rec.raw), rec.confidence,
                                      f"{abs(rec.adjusted):.2f}")
        link_rows.append((
            link.id,
            f"[{_amount(_num(amount), unit)}] {activity} in {focus}",
            f"{conf:.2f}",
            adjusted,
        ))

    status_rows = []
    for obj in sorted(model.objectives.values(), key=lambda o: o.id):
        outcome = result.outcomes.get(obj.id)
        achieved = "-" if outcome is None or outcome.achieved is None \
            else _num(outcome.achieved)
        status = outcome.status.value if outcome is not None else "-"
        status_rows.append((obj.id, achieved, format_decimal(obj.magnitude.target),
                            format_decimal(obj.magnitude.threshold), status))

    utility_rows = [(root, f"{value:.4f}")
                    for root, value in sorted(result.root_utilities.items())]
    total = "-" if result.total_utility is None else f"{result.total_utility:.4f}"

    if fmt == "csv":
        out = ["link,contribution,confidence,adjusted"]
        out += [",".join(_csv(c) for c in row) for row in link_rows]
        out.append("")
        out.append("objective,achieved,target,threshold,status")
        out += [",".join(_csv(c) for c in row) for row in status_rows]
        out.append("")
        out.append("root,utility")
        out += [",".join(_csv(c) for c in row) for row in utility_rows]
        out.append(f"total_utility,{total}")
        out.append(f"note,{_csv(result.note)}")
        return "\n".join(out) + "\n"

    out = ["| Link | [Contribution] [Activity] [Scale] | Confidence | Adjusted |",
           "|------|------------------------------------|------------|----------|"]
    out += [f"| {r[0]} | {r[1]} | {r[2]} | {r[3]} |" for r in link_rows]
    out.append("")
    out.append("| Objective | Achieved | Target | Threshold | Status |")
    out.append("|-----------|----------|--------|-----------|--------|")
    out += [f"| {r[0]} | {r[1]} | {r[2]} | {r[3]} | {r[4]} |" for r in status_rows]
    out.append("")
    out.append("| Root | Utility |")
    out.append("|------|---------|")
    out += [f"| {r[0]} | {r[1]} |" for r in utility_rows]
    out.append(f"| total | {total} |")
    out.append("")
    out.append(f"_{result.note}_")
    return "\n".join(out) + "\n"


def _nominal_contribution(model: GoalModel, link: ContributionLink) -> float:
    from . import functions as fns

    q = link.quantification
    if isinstance(q, Estimate):
        return float(q.point)
    if link.source in model.requirements:
        source_target = 1.0
    else:
        source_target = float(model.objectives[link.source].magnitude.target)
    return fns.evaluate(q, source_target)


def comparison_to_csv(table: ComparisonTable) -> str:
    out = ["row," + ",".join(table.columns)]
    for row in table.rows:
        cells = []
        for col in table.columns:
            cell = table.cells[row, col]
            if cell.achieved is None:
                cells.append(table.column_errors.get(col, "-"))
                continue
            text = _num(cell.achieved)
            if cell.status is not None:
                text += f" ({cell.status.value})"
            if cell.delta is not None and col != table.baseline:
                text += f" [{cell.delta:+g}]"
            cells.append(text)
        out.append(",".join(_csv(c) for c in [row] + cells))
    return "\n".join(out) + "\n"


def _csv(text: str) -> str:
    if any(c in text for c in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def _num(x: float) -> str:
    if x != x:  # NaN
        return "nan"
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _disp(x: float) -> str:
    """Display form: 10 significant digits, float noise trimmed."""
    s = f"{float(x):.10g}"
    return "0" if s == "-0" else s


# ---------------------------------------------------------------------------
# canonical JSON

def _canon(value) -> str:
    """Deterministic JSON text: sorted keys, exact decimal tokens."""
    if isinstance(value, Decimal):
        return format_decimal(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return "null"
        return _num(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        items = sorted(value.items(), key=lambda kv: kv[0])
        return "{" + ", ".join(f"{json.dumps(str(k), ensure_ascii=False)}: {_canon(v)}"
                               for k, v in items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_canon(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(tree) -> str:
    return _canon(tree) + "\n"


def to_json(obj) -> str:
    """Canonical JSON for models, results, comparisons, sweeps, reports,
    scenarios, chains, and variance rows."""
    return dumps(to_tree(obj))


def to_tree(obj):
    if isinstance(obj, GoalModel):
        return _model_tree(obj)
    if isinstance(obj, EvaluationResult):
        return _result_tree(obj)
    if isinstance(obj, ComparisonTable):
        return _comparison_tree(obj)
    if isinstance(obj, SweepResult):
        return _sweep_tree(obj)
    if isinstance(obj, ValidationReport):
        return {"schema": SCHEMA_VERSION, "kind": "validation_report",
                "ok": obj.ok,
                "issues": [{"severity": i.severity.value, "code": i.code,
                            "location": i.location, "message": i.message}
                           for i in obj.issues]}
    if isinstance(obj, Scenario):
        return _scenario_tree(obj)
    if isinstance(obj, list) and all(isinstance(r, VarianceRow) for r in obj):
        return {"schema": SCHEMA_VERSION, "kind": "variance_report",
                "rows": [{"objective": r.objective_id, "predicted": r.predicted,
                          "actual": r.actual, "gap": r.gap, "verdict": r.verdict,
                          "as_is": r.as_is, "latest": r.latest,
                          "timeframe": r.timeframe} for r in obj]}
    if isinstance(obj, list) and all(isinstance(c, ChainSummary) for c in obj):
        return {"schema": SCHEMA_VERSION, "kind": "chain_summaries",
                "note": "path confidence composes multiplicatively along the "
                        "chain (a modeling assumption)",
                "chains": [{"path": list(c.path),
                            "hops": [{"link": h.link_id, "source": h.source,
                                      "target": h.target, "raw": h.raw,
                                      "adjusted": h.adjusted,
                                      "confidence": h.confidence} for h in c.hops],
                            "path_confidence": c.path_confidence} for c in obj]}
    raise TypeError(f"no JSON mirror for {type(obj).__name__}")


def _table_tree(fn: TableFunction) -> dict:
    tree = {"points": [[x, y] for x, y in fn.points],
            "interpolation": fn.interpolation.value,
            "extrapolation": fn.extrapolation.value}
    if fn.interpolation is Interpolation.CARDINAL:
        tree["tension"] = fn.tension
    return tree


def _model_tree(model: GoalModel) -> dict:
    def objective(o: Objective) -> dict:
        return {"activity": o.activity, "object": o.object, "focus": o.focus,
                "target": o.magnitude.target, "threshold": o.magnitude.threshold,
                "as_is": o.magnitude.as_is, "direction": o.magnitude.direction.value,
                "unit": o.scale.unit, "scale": o.scale.description,
                "scale_kind": o.scale.kind.value, "timeframe": o.timeframe,
                "scope": o.scope, "author": o.author, "label": format_label(o)}

    def requirement(r: Requirement) -> dict:
        return {"kind": r.kind.value, "headline": r.headline,
                "fit_criterion": r.fit_criterion.text,
                "fit_metric": r.fit_criterion.metric,
                "fit_unit": r.fit_criterion.unit,
                "fit_target": r.fit_criterion.target,
                "description": r.description, "rationale": r.rationale,
                "label": format_label(r)}

    def link(l: ContributionLink) -> dict:
        if isinstance(l.quantification, Estimate):
            quant = {"type": "single_point", "point": l.quantification.point,
                     "halfwidth": l.quantification.halfwidth}
        else:
            quant = {"type": "table", "ref": l.function_ref,
                     "table": _table_tree(l.quantification)}
        return {"from": l.source, "to": l.target, "quantification": quant,
                "effect": l.effect.value, "unit": l.unit,
                "confidence": {"value": l.confidence.value,
                               "label": l.confidence.label},
                "group": None if l.group is None else
                {"id": l.group.id, "mode": l.group.mode.value}}

    return {
        "schema": SCHEMA_VERSION,
        "kind": "goal_model",
        "objectives": {o.id: objective(o) for o in model.objectives.values()},
        "requirements": {r.id: requirement(r) for r in model.requirements.values()},
        "softgoals": {s.id: {"statement": s.statement, "level": s.level.value}
                      for s in model.softgoals.values()},
        "beliefs": {b.id: {"statement": b.statement, "attached_to": b.attached_to}
                    for b in model.beliefs.values()},
        "functions": {name: _table_tree(fn) for name, fn in model.functions.items()},
        "contributions": {l.id: link(l) for l in model.contributions.values()},
        "decompositions": {d.id: {"parent": d.parent, "child": d.child}
                           for d in model.decompositions.values()},
        "traces": {t.id: {"from": t.source, "to": t.target}
                   for t in model.traces.values()},
        "root_weights": dict(model.root_weights),
        "utilities": {k: _table_tree(v) for k, v in model.utilities.items()},
        "roots": roots(model),
    }


def _result_tree(result: EvaluationResult) -> dict:
    def outcome(o: NodeOutcome) -> dict:
        return {"achieved": o.achieved, "status": o.status.value,
                "contributions": [{"link": c.link_id, "raw": c.raw,
                                   "adjusted": c.adjusted,
                                   "confidence": c.confidence}
                                  for c in o.contributions]}

    tree = {
        "schema": SCHEMA_VERSION,
        "kind": "evaluation_result",
        "scenario": result.scenario_id,
        "confidence_adjusted": result.confidence_adjusted,
        "outcomes": {node_id: outcome(o) for node_id, o in result.outcomes.items()},
        "root_utilities": dict(result.root_utilities),
        "total_utility": result.total_utility,
        "audit_flags": [{"code": f.code, "location": f.location,
                         "message": f.message} for f in result.audit_flags],
        "note": result.note,
    }
    if result.intervals is not None:
        tree["intervals"] = {
            node_id: {"lo": iv.lo, "hi": iv.hi, "status_lo": iv.status_lo.value,
                      "status_hi": iv.status_hi.value, "exact": iv.exact}
            for node_id, iv in result.intervals.items()}
    return tree


def _comparison_tree(table: ComparisonTable) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "comparison",
        "baseline": table.baseline,
        "rows": list(table.rows),
        "columns": list(table.columns),
        "cells": {row: {col: {
            "achieved": table.cells[row, col].achieved,
            "status": None if table.cells[row, col].status is None
            else table.cells[row, col].status.value,
            "delta": table.cells[row, col].delta,
        } for col in table.columns} for row in table.rows},
        "column_errors": dict(table.column_errors),
    }


def _sweep_tree(sweep: SweepResult) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "sweep",
        "node": sweep.node_id,
        "samples": [{"level": s.level,
                     "root_achieved": dict(s.root_achieved),
                     "root_status": {k: v.value for k, v in s.root_status.items()},
                     "total_utility": s.total_utility} for s in sweep.samples],
    }


def _scenario_tree(s: Scenario) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "scenario",
        "id": s.id,
        "requirement_levels": dict(s.requirement_levels),
        "or_selections": dict(s.or_selections),
        "confidence_override": dict(s.confidence_override),
        "options": {"confidence_adjust": s.options.confidence_adjust,
                    "single_point_proration": s.options.single_point_proration,
                    "or_policy": s.options.or_policy.value},
    }


# ---------------------------------------------------------------------------
# JSON -> model / scenario

def _check_schema(tree: dict, expected_kind: str | None = None) -> None:
    version = tree.get("schema")
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(f"unsupported schema version {version!r} "
                                 f"(supported: {SCHEMA_VERSION})")
    if expected_kind is not None and tree.get("kind") not in (None, expected_kind):
        raise SchemaVersionError(f"expected kind {expected_kind!r}, "
                                 f"got {tree.get('kind')!r}")


def from_json(text: str) -> GoalModel:
    """Inverse of to_json for models (exact decimal round-trip)."""
    tree = json.loads(text, parse_float=Decimal, parse_int=Decimal)
    return model_from_tree(tree)


def model_from_tree(tree: dict) -> GoalModel:
    _check_schema(tree, "goal_model")

    def dec(v) -> Decimal:
        return v if isinstance(v, Decimal) else Decimal(str(v))

    def opt_dec(v) -> Decimal | None:
        return None if v is None else dec(v)

    def table(t: dict) -> TableFunction:
        return TableFunction(
            points=tuple((dec(p[0]), dec(p[1])) for p in t["points"]),
            interpolation=Interpolation(t.get("interpolation", "linear")),
            extrapolation=Extrapolation(t.get("extrapolation", "clamp")),
            tension=dec(t.get("tension", "0.5")),
        )

    objectives = {}
    for obj_id, o in tree.get("objectives", {}).items():
        objectives[obj_id] = Objective(
            id=obj_id, activity=o["activity"], object=o["object"], focus=o["focus"],
            magnitude=Magnitude(dec(o["target"]), dec(o["threshold"]),
                                opt_dec(o.get("as_is")), Direction(o["direction"])),
            scale=Scale(o.get("scale", ""), o["unit"],
                        ScaleKind(o.get("scale_kind", "continuous"))),
            timeframe=o.get("timeframe", ""), scope=o.get("scope", ""),
            author=o.get("author", ""))
    requirements = {}
    for req_id, r in tree.get("requirements", {}).items():
        requirements[req_id] = Requirement(
            id=req_id, kind=RequirementKind(r["kind"]), headline=r["headline"],
            fit_criterion=FitCriterion(r["fit_criterion"], r.get("fit_metric"),
                                       r.get("fit_unit"),
                                       opt_dec(r.get("fit_target"))),
            description=r.get("description", ""), rationale=r.get("rationale", ""))
    softgoals = {sg_id: SoftGoal(sg_id, s["statement"], SoftGoalLevel(s["level"]))
                 for sg_id, s in tree.get("softgoals", {}).items()}
    beliefs = {b_id: Belief(b_id, b["statement"], b["attached_to"])
               for b_id, b in tree.get("beliefs", {}).items()}
    functions = {name: table(t) for name, t in tree.get("functions", {}).items()}
    contributions = {}
    for link_id, l in tree.get("contributions", {}).items():
        q = l["quantification"]
        if q["type"] == "single_point":
            quant = Estimate(dec(q["point"]), opt_dec(q.get("halfwidth")))
            ref = None
        else:
            quant = table(q["table"])
            ref = q.get("ref")
        group = None
        if l.get("group"):
            group = LinkGroup(l["group"]["id"], GroupMode(l["group"]["mode"]))
        conf = l["confidence"]
        contributions[link_id] = ContributionLink(
            id=link_id, source=l["from"], target=l["to"], quantification=quant,
            effect=Direction(l["effect"]), unit=l["unit"],
            confidence=Confidence(dec(conf["value"]), conf.get("label")),
            group=group, function_ref=ref)
    decompositions = {d_id: DecompositionLink(d_id, d["parent"], d["child"])
                      for d_id, d in tree.get("decompositions", {}).items()}
    traces = {t_id: TraceLink(t_id, t["from"], t["to"])
              for t_id, t in tree.get("traces", {}).items()}
    weights = {k: dec(v) for k, v in tree.get("root_weights", {}).items()}
    utilities = {k: table(t) for k, t in tree.get("utilities", {}).items()}
    return GoalModel(objectives=objectives, requirements=requirements,
                     softgoals=softgoals, beliefs=beliefs,
                     contributions=contributions, decompositions=decompositions,
                     traces=traces, functions=functions, root_weights=weights,
                     utilities=utilities)


def scenario_from_tree(tree: dict, default_id: str = "adhoc") -> Scenario:
    """Scenario from its JSON form; unknown fields rejected upstream by
    the server's schema check."""
    if "schema" in tree:
        _check_schema(tree, "scenario")
    options = tree.get("options", {})
    policy = options.get("or_policy", "strict")
    return Scenario(
        id=str(tree.get("id", default_id)),
        requirement_levels={k: float(v) for k, v in
                            tree.get("requirement_levels", {}).items()},
        or_selections={k: str(v) for k, v in tree.get("or_selections", {}).items()},
        confidence_override={k: Decimal(str(v)) for k, v in
                             tree.get("confidence_override", {}).items()},
        options=ScenarioOptions(
            confidence_adjust=bool(options.get("confidence_adjust", True)),
            single_point_proration=bool(options.get("single_point_proration", False)),
            or_policy=OrPolicy(policy)),
    )
