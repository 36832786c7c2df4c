"""Domain types of the quantified goal graph and static well-formedness checks.

The graph relates software requirements (tasks) to measurable business
objectives (hard goals) through quantified contribution links. Soft goals
and beliefs hang off the quantified core for traceability and assumptions.
A validated ``GoalModel`` is immutable by convention and safe to share
across concurrent evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from enum import Enum

from .errors import CycleError, LabelSyntaxError
from .functions import MonotoneClass, TableFunction, monotonicity

WEIGHT_TOLERANCE = Decimal("1e-9")

#: Preset confidence levels: credibility of the supporting evidence.
CONFIDENCE_PRESETS = {
    "poor": Decimal("0.25"),
    "average": Decimal("0.5"),
    "great": Decimal("0.75"),
    "perfect": Decimal("1.0"),
}

#: Past-tense activity verbs with a known change direction.
REDUCTION_VERBS = {"reduced", "decreased", "lowered", "cut", "shortened", "minimised", "minimized"}
INCREASE_VERBS = {"increased", "improved", "raised", "extended", "grown", "maximised", "maximized"}


class ScaleKind(str, Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"


class Direction(str, Enum):
    REDUCTION = "reduction"
    INCREASE = "increase"


class RequirementKind(str, Enum):
    FUNCTIONAL = "functional"
    NON_FUNCTIONAL = "non_functional"


class SoftGoalLevel(str, Enum):
    GOAL = "goal"
    VISION = "vision"


class GroupMode(str, Enum):
    AND = "AND"
    OR = "OR"


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


def as_decimal(v) -> Decimal:
    """Coerce ints/floats/strings to Decimal; floats via repr (shortest form)."""
    if isinstance(v, Decimal):
        return v
    if isinstance(v, float):
        return Decimal(repr(v))
    try:
        return Decimal(str(v))
    except InvalidOperation as exc:
        raise ValueError(f"not a number: {v!r}") from exc


def format_decimal(d: Decimal) -> str:
    """Canonical plain decimal text: no exponent, no trailing zeros."""
    d = as_decimal(d)
    text = format(d, "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    if text in ("-0", ""):
        text = "0"
    return text


@dataclass(frozen=True)
class Scale:
    """What is measured and in which unit."""

    description: str
    unit: str
    kind: ScaleKind = ScaleKind.CONTINUOUS


@dataclass(frozen=True)
class Magnitude:
    """Demanded change on the objective's scale.

    ``target`` is the prescribed change, ``threshold`` the weaker acceptable
    change (threshold <= target in achieved-delta terms), ``as_is`` the
    measured baseline level of the focus (mandatory for percent scales).
    """

    target: Decimal
    threshold: Decimal
    as_is: Decimal | None = None
    direction: Direction = Direction.REDUCTION


@dataclass(frozen=True)
class Objective:
    """Quantified hard goal: a time-targeted, measurable business target."""

    id: str
    activity: str
    object: str
    focus: str
    magnitude: Magnitude
    scale: Scale
    timeframe: str = ""
    scope: str = ""
    author: str = ""


@dataclass(frozen=True)
class FitCriterion:
    """Testable satisfaction metric of a requirement (short-hand plus
    optional structured fields)."""

    text: str
    metric: str | None = None
    unit: str | None = None
    target: Decimal | None = None


@dataclass(frozen=True)
class Requirement:
    """Task of implementing one software requirement."""

    id: str
    kind: RequirementKind
    headline: str
    fit_criterion: FitCriterion
    description: str = ""
    rationale: str = ""


@dataclass(frozen=True)
class SoftGoal:
    """Goal or vision without a testable satisfaction criterion; target of
    non-weighted traceability only."""

    id: str
    statement: str
    level: SoftGoalLevel = SoftGoalLevel.GOAL


@dataclass(frozen=True)
class Belief:
    """Assumption attached to a link or node."""

    id: str
    statement: str
    attached_to: str


@dataclass(frozen=True)
class Confidence:
    """Belief in [0, 1] that a stated prediction is correct."""

    value: Decimal
    label: str | None = None

    @classmethod
    def preset(cls, label: str) -> "Confidence":
        return cls(CONFIDENCE_PRESETS[label], label)


@dataclass(frozen=True)
class Estimate:
    """Single-point contribution, optionally an interval ``point ± halfwidth``."""

    point: Decimal
    halfwidth: Decimal | None = None


@dataclass(frozen=True)
class LinkGroup:
    id: str
    mode: GroupMode


@dataclass(frozen=True)
class ContributionLink:
    """Means-end edge predicting how much the source's satisfaction moves
    the target objective's focus, in the target's units."""

    id: str
    source: str
    target: str
    quantification: Estimate | TableFunction
    effect: Direction
    unit: str
    confidence: Confidence
    group: LinkGroup | None = None
    #: Name of the shared `function` block this link's table came from, if
    #: any. Presentation metadata only; excluded from semantic equality.
    function_ref: str | None = field(default=None, compare=False)

    def is_single_point(self) -> bool:
        return isinstance(self.quantification, Estimate)


@dataclass(frozen=True)
class DecompositionLink:
    """Child is necessary (not sufficient) for the parent; forms a forest."""

    id: str
    parent: str
    child: str


@dataclass(frozen=True)
class TraceLink:
    """Non-weighted traceability from an objective to a soft goal."""

    id: str
    source: str
    target: str


@dataclass(frozen=True)
class GoalModel:
    """Validated directed acyclic goal graph.

    Nodes and links are keyed by id; key-order is irrelevant to equality,
    so two models parsed from differently ordered documents compare equal.
    """

    objectives: dict[str, Objective] = field(default_factory=dict)
    requirements: dict[str, Requirement] = field(default_factory=dict)
    softgoals: dict[str, SoftGoal] = field(default_factory=dict)
    beliefs: dict[str, Belief] = field(default_factory=dict)
    contributions: dict[str, ContributionLink] = field(default_factory=dict)
    decompositions: dict[str, DecompositionLink] = field(default_factory=dict)
    traces: dict[str, TraceLink] = field(default_factory=dict)
    #: Named `function` blocks for serialization; links embed their resolved
    #: tables, so the name library is presentation metadata (not compared).
    functions: dict[str, TableFunction] = field(default_factory=dict, compare=False)
    root_weights: dict[str, Decimal] = field(default_factory=dict)
    utilities: dict[str, TableFunction] = field(default_factory=dict)

    def node(self, node_id: str):
        for pool in (self.objectives, self.requirements, self.softgoals, self.beliefs):
            if node_id in pool:
                return pool[node_id]
        return None

    def node_ids(self) -> set[str]:
        return (set(self.objectives) | set(self.requirements)
                | set(self.softgoals) | set(self.beliefs))

    def incoming(self, node_id: str) -> list[ContributionLink]:
        return sorted((l for l in self.contributions.values() if l.target == node_id),
                      key=lambda l: l.id)

    def outgoing(self, node_id: str) -> list[ContributionLink]:
        return sorted((l for l in self.contributions.values() if l.source == node_id),
                      key=lambda l: l.id)


@dataclass(frozen=True)
class ValidationIssue:
    severity: Severity
    code: str
    location: str
    message: str


@dataclass
class ValidationReport:
    issues: list[ValidationIssue] = field(default_factory=list)

    @property
    def errors(self) -> list[ValidationIssue]:
        return [i for i in self.issues if i.severity is Severity.ERROR]

    @property
    def warnings(self) -> list[ValidationIssue]:
        return [i for i in self.issues if i.severity is Severity.WARNING]

    @property
    def ok(self) -> bool:
        return not self.errors

    def codes(self) -> set[str]:
        return {i.code for i in self.issues}


def roots(model: GoalModel) -> list[str]:
    """Objectives with no outgoing contribution link, sorted by id."""
    return sorted(o for o in model.objectives
                  if not any(l.source == o for l in model.contributions.values()))


def contribution_order(model: GoalModel) -> list[str]:
    """Topological order of requirement/objective nodes over contribution
    links (deterministic: ties broken by id). Raises CycleError on cycles."""
    nodes = sorted(set(model.requirements) | set(model.objectives))
    indeg = {n: 0 for n in nodes}
    out: dict[str, list[str]] = {n: [] for n in nodes}
    for link in sorted(model.contributions.values(), key=lambda l: l.id):
        if link.source in indeg and link.target in indeg and link.source != link.target:
            indeg[link.target] += 1
            out[link.source].append(link.target)
    ready = sorted(n for n, d in indeg.items() if d == 0)
    order: list[str] = []
    while ready:
        n = ready.pop(0)
        order.append(n)
        changed = False
        for m in out[n]:
            indeg[m] -= 1
            if indeg[m] == 0:
                ready.append(m)
                changed = True
        if changed:
            ready.sort()
    if len(order) != len(nodes):
        stuck = sorted(n for n in nodes if n not in set(order))
        raise CycleError(f"contribution links form a cycle through {', '.join(stuck)}",
                         location=stuck[0] if stuck else None)
    return order


def format_label(node) -> str:
    """Compact diagram label.

    Objectives render as ``Activity[Object Focus](Magnitude)``; requirements
    as ``{F/NF}[Requirement](Fit Criterion)``. Idempotent and deterministic.
    """
    if isinstance(node, Objective):
        amount = _amount_text(node.magnitude.target, node.scale.unit)
        return f"{node.activity}[{node.object} {node.focus}]({amount})"
    if isinstance(node, Requirement):
        tag = "F" if node.kind is RequirementKind.FUNCTIONAL else "NF"
        return f"{tag}[{node.headline}]({node.fit_criterion.text})"
    raise TypeError(f"no label syntax for {type(node).__name__}")


def _amount_text(value: Decimal, unit: str) -> str:
    sep = "" if unit == "%" else " "
    return f"{format_decimal(value)}{sep}{unit}"


def parse_label(text: str) -> dict:
    """Parse a compact label back into its fields.

    Returns ``{"kind": "requirement", "rf": "F"|"NF", "headline", "fit"}``
    or ``{"kind": "objective", "activity", "subject", "magnitude", "target",
    "unit"}``. Inverse of format_label on canonical output. Raises
    LabelSyntaxError with the 1-based column of the first violation.
    """
    open_b = text.find("[")
    if open_b <= 0:
        raise LabelSyntaxError("expected 'Head[' at start of label", column=1)
    head = text[:open_b]
    close_b = text.find("]", open_b)
    if close_b < 0:
        raise LabelSyntaxError("unterminated '[...]' section", column=open_b + 1)
    body = text[open_b + 1:close_b]
    rest = text[close_b + 1:]
    if not rest.startswith("(") or not rest.endswith(")") or len(rest) < 2:
        raise LabelSyntaxError("expected '(...)' after ']'", column=close_b + 2)
    paren = rest[1:-1]
    if head in ("F", "NF"):
        return {"kind": "requirement", "rf": head, "headline": body, "fit": paren}
    if not head[0].isalpha():
        raise LabelSyntaxError("activity must start with a letter", column=1)
    result = {"kind": "objective", "activity": head, "subject": body,
              "magnitude": paren, "target": None, "unit": None}
    parts = paren.split(None, 1)
    if parts:
        try:
            result["target"] = as_decimal(parts[0].rstrip("%"))
            result["unit"] = "%" if parts[0].endswith("%") else (
                parts[1] if len(parts) > 1 else "")
        except ValueError:
            pass
    return result


def validate(model: GoalModel) -> ValidationReport:
    """Static well-formedness report; never raises.

    Every type invariant maps to one report code; warnings flag analytic
    smells (unweighted roots, single-point links with continuous sources,
    mixed-unit fan-out).
    """
    issues: list[ValidationIssue] = []

    def err(code: str, location: str, message: str) -> None:
        issues.append(ValidationIssue(Severity.ERROR, code, location, message))

    def warn(code: str, location: str, message: str) -> None:
        issues.append(ValidationIssue(Severity.WARNING, code, location, message))

    # id uniqueness across node kinds
    seen: dict[str, str] = {}
    for kind, pool in (("objective", model.objectives), ("requirement", model.requirements),
                       ("softgoal", model.softgoals), ("belief", model.beliefs)):
        for node_id in pool:
            if node_id in seen:
                err("DUPLICATE_ID", f"{kind} {node_id}",
                    f"id {node_id!r} already used by {seen[node_id]}")
            seen[node_id] = kind
    link_ids: dict[str, str] = {}
    for kind, pool in (("link", model.contributions), ("link", model.decompositions),
                       ("link", model.traces)):
        for link_id in pool:
            if link_id in link_ids:
                err("DUPLICATE_ID", f"link {link_id}", f"link id {link_id!r} declared twice")
            link_ids[link_id] = kind

    node_ids = model.node_ids()

    for obj in sorted(model.objectives.values(), key=lambda o: o.id):
        loc = f"objective {obj.id}"
        if not obj.scale.unit:
            err("EMPTY_UNIT", loc, "scale unit token must be non-empty")
        if not obj.activity or not obj.object or not obj.focus:
            err("EMPTY_LABEL_FIELD", loc, "activity, object and focus must be non-empty")
        mag = obj.magnitude
        if mag.threshold > mag.target:
            err("THRESHOLD_EXCEEDS_TARGET", loc,
                f"threshold {format_decimal(mag.threshold)} demands more than "
                f"target {format_decimal(mag.target)} (threshold must be the weaker demand)")
        if obj.scale.unit == "%" and mag.as_is is None:
            err("PERCENT_NEEDS_BASELINE", loc,
                "percent-scaled objective needs an as-is baseline to be verifiable")
        verb = obj.activity.lower()
        implied = (Direction.REDUCTION if verb in REDUCTION_VERBS
                   else Direction.INCREASE if verb in INCREASE_VERBS else None)
        if implied is not None and implied is not mag.direction:
            err("ACTIVITY_DIRECTION_MISMATCH", loc,
                f"activity {obj.activity!r} implies {implied.value}, "
                f"magnitude says {mag.direction.value}")

    for req in sorted(model.requirements.values(), key=lambda r: r.id):
        if not req.headline:
            err("EMPTY_LABEL_FIELD", f"requirement {req.id}", "headline must be non-empty")

    for belief in sorted(model.beliefs.values(), key=lambda b: b.id):
        if belief.attached_to not in node_ids and belief.attached_to not in link_ids \
                and belief.attached_to not in model.contributions:
            err("BELIEF_DANGLING", f"belief {belief.id}",
                f"attached_to {belief.attached_to!r} does not resolve to a node or link")

    groups: dict[str, LinkGroup] = {}
    group_targets: dict[str, str] = {}
    for link in sorted(model.contributions.values(), key=lambda l: l.id):
        loc = f"link {link.id}"
        if link.source == link.target:
            err("SELF_LOOP", loc, "source and target must differ")
        for end, node_id in (("source", link.source), ("target", link.target)):
            if node_id not in node_ids:
                err("UNKNOWN_NODE", loc, f"{end} {node_id!r} does not exist")
        if link.target in model.softgoals or link.source in model.softgoals:
            err("SOFTGOAL_QUANTIFIED", loc,
                "soft goals admit only non-weighted trace links")
        elif link.target in model.objectives:
            target_unit = model.objectives[link.target].scale.unit
            if link.unit != target_unit:
                err("UNIT_MISMATCH", loc,
                    f"link emits {link.unit!r} but target scale is {target_unit!r}")
        elif link.target in node_ids:
            err("BAD_ENDPOINT", loc, "contribution target must be an objective")
        if link.source in model.beliefs:
            err("BAD_ENDPOINT", loc, "contribution source must be a requirement or objective")
        if not link.unit:
            err("EMPTY_UNIT", loc, "output unit token must be non-empty")
        conf = link.confidence
        if not (0 <= conf.value <= 1):
            err("BAD_CONFIDENCE", loc, f"confidence {conf.value} outside [0, 1]")
        if conf.label is not None:
            preset = CONFIDENCE_PRESETS.get(conf.label)
            if preset is None or preset != conf.value:
                err("CONFIDENCE_LABEL_MISMATCH", loc,
                    f"label {conf.label!r} does not match value {conf.value}")
        q = link.quantification
        if isinstance(q, Estimate):
            if q.halfwidth is not None and q.halfwidth < 0:
                err("BAD_HALFWIDTH", loc, "interval halfwidth must be >= 0")
        else:
            issues.extend(_check_table(q, loc))
        if link.group is not None:
            prev = groups.get(link.group.id)
            if prev is not None and prev.mode is not link.group.mode:
                err("GROUP_MODE_CONFLICT", loc,
                    f"group {link.group.id!r} mixes AND and OR links")
            groups.setdefault(link.group.id, link.group)
            prev_target = group_targets.get(link.group.id)
            if prev_target is not None and prev_target != link.target:
                err("GROUP_TARGET_CONFLICT", loc,
                    f"group {link.group.id!r} spans targets {prev_target!r} and {link.target!r}")
            group_targets.setdefault(link.group.id, link.target)

    # decomposition links: endpoints are tasks/objectives, and form a forest
    child_parent: dict[str, str] = {}
    for dl in sorted(model.decompositions.values(), key=lambda d: d.id):
        loc = f"link {dl.id}"
        for end, node_id in (("parent", dl.parent), ("child", dl.child)):
            if node_id not in node_ids:
                err("UNKNOWN_NODE", loc, f"{end} {node_id!r} does not exist")
            elif node_id in model.softgoals or node_id in model.beliefs:
                err("BAD_ENDPOINT", loc, "decomposition relates tasks/objectives only")
        if dl.child in child_parent:
            err("DECOMP_NOT_FOREST", loc,
                f"{dl.child!r} already decomposes {child_parent[dl.child]!r}")
        child_parent.setdefault(dl.child, dl.parent)
    # cycle check over the decomposition forest
    for start in sorted(child_parent):
        hops, cur = 0, start
        while cur in child_parent and hops <= len(child_parent):
            cur = child_parent[cur]
            hops += 1
        if hops > len(child_parent):
            err("DECOMP_NOT_FOREST", f"node {start}", "decomposition links form a cycle")
            break

    for tl in sorted(model.traces.values(), key=lambda t: t.id):
        loc = f"link {tl.id}"
        if tl.source not in model.objectives or tl.target not in model.softgoals:
            err("TRACE_ENDPOINTS", loc, "trace links run objective -> soft goal")

    try:
        contribution_order(model)
    except CycleError as exc:
        err("CYCLE", f"link {_cycle_link(model)}", str(exc))

    root_ids = roots(model)
    if model.objectives and not root_ids:
        warn("NO_ROOTS", "model", "every objective feeds another; no root to attach value to")

    for pool_name, pool in (("weights", model.root_weights), ("utility", model.utilities)):
        for obj_id in sorted(pool):
            if obj_id not in model.objectives:
                err("UNKNOWN_NODE", f"{pool_name} {obj_id}", f"{obj_id!r} is not an objective")
            elif obj_id not in root_ids:
                err("NOT_A_ROOT", f"{pool_name} {obj_id}",
                    f"{obj_id!r} has outgoing contribution links")
    for obj_id, util in sorted(model.utilities.items()):
        loc = f"utility {obj_id}"
        issues.extend(_check_table(util, loc))
        if util.well_formed() and any(not (0 <= float(y) <= 1) for _, y in util.points):
            err("UTILITY_RANGE", loc, "utility values must lie in [0, 1]")
    if model.root_weights:
        total = sum(model.root_weights.values(), Decimal(0))
        if len(model.root_weights) > 1 and abs(total - 1) > WEIGHT_TOLERANCE:
            err("WEIGHTS_SUM", "weights",
                f"root weights sum to {format_decimal(total)}, expected 1")
    elif len(root_ids) > 1:
        warn("UNWEIGHTED_ROOTS", "weights",
             "multiple roots without weights; evaluation assumes uniform weights")
    missing_weights = [r for r in root_ids if model.root_weights and r not in model.root_weights]
    if missing_weights:
        warn("UNWEIGHTED_ROOTS", "weights",
             f"roots without weights contribute nothing to total utility: "
             f"{', '.join(missing_weights)}")

    for name, fn in sorted(model.functions.items()):
        issues.extend(_check_table(fn, f"function {name}"))

    # analytic smells
    by_source: dict[str, set[str]] = {}
    for link in sorted(model.contributions.values(), key=lambda l: l.id):
        by_source.setdefault(link.source, set()).add(link.unit)
        if link.is_single_point() and _continuous_source(model, link.source):
            warn("SINGLE_POINT_SOURCE", f"link {link.id}",
                 "single-point quantification over a continuous source: partial "
                 "satisfaction contributes nothing unless proration is enabled")
    for source, units in sorted(by_source.items()):
        if len(units) > 1:
            warn("MULTI_UNIT_SOURCE", f"node {source}",
                 f"contributes in {len(units)} different units "
                 f"({', '.join(sorted(units))}); review for conflated pathways")

    order = {Severity.ERROR: 0, Severity.WARNING: 1}
    issues.sort(key=lambda i: (order[i.severity], i.location, i.code, i.message))
    return ValidationReport(issues)


def _continuous_source(model: GoalModel, source_id: str) -> bool:
    if source_id in model.objectives:
        return True
    req = model.requirements.get(source_id)
    return req is not None and req.kind is RequirementKind.NON_FUNCTIONAL


def _check_table(fn: TableFunction, loc: str) -> list[ValidationIssue]:
    found = []
    if len(fn.points) < 2:
        found.append(ValidationIssue(
            Severity.ERROR, "FUNC_TOO_SHORT", loc,
            "table functions need at least two points (one pair is a single-point estimate)"))
        return found
    xs = [p[0] for p in fn.points]
    if any(a >= b for a, b in zip(xs, xs[1:])):
        found.append(ValidationIssue(
            Severity.ERROR, "FUNC_X_ORDER", loc, "x values must be strictly increasing"))
    return found


def _cycle_link(model: GoalModel) -> str:
    """Pick the last-sorted link that closes a cycle, for error location."""
    for link in sorted(model.contributions.values(), key=lambda l: l.id, reverse=True):
        remaining = {k: v for k, v in model.contributions.items() if k != link.id}
        trimmed = GoalModel(
            objectives=model.objectives, requirements=model.requirements,
            softgoals=model.softgoals, beliefs=model.beliefs,
            contributions=remaining, decompositions=model.decompositions,
            traces=model.traces, functions=model.functions,
            root_weights=model.root_weights, utilities=model.utilities)
        try:
            contribution_order(trimmed)
            return link.id
        except CycleError:
            continue
    return "?"


def non_monotone_links(model: GoalModel) -> list[str]:
    """Ids of multi-point links whose table is not monotone."""
    bad = []
    for link in sorted(model.contributions.values(), key=lambda l: l.id):
        if not link.is_single_point() and link.quantification.well_formed():
            if monotonicity(link.quantification).direction is MonotoneClass.NON_MONOTONE:
                bad.append(link.id)
    return bad
