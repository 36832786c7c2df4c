"""Satisfaction propagation through the goal graph under a scenario.

Nodes are processed in topological order of the contribution links.
A link's source value is the source node's achieved value (a requirement's
satisfaction level, an objective's achieved delta). Multi-point links
evaluate their table function at the source value; single-point links
contribute their full estimate only when the source is satisfied (the
single-point score is defined only at full satisfaction — anything else is
flagged PARTIAL_UNMODELED, or prorated linearly when the scenario opts in).
Confidence adjustment multiplies each contribution by its confidence; the
result is an indication of the effects of confidence, not an expected value.
AND-grouped and ungrouped links sum additively; each OR group contributes
only its selected link. Contributions whose effect direction opposes the
target's demanded direction subtract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from decimal import Decimal
from enum import Enum

from . import functions as fns
from .errors import ScenarioError
from .model import (
    ContributionLink,
    Direction,
    Estimate,
    GoalModel,
    GroupMode,
    RequirementKind,
    contribution_order,
    non_monotone_links,
)

CONFIDENCE_NOTE = ("Confidence-adjusted contributions are an indication of "
                   "the effects of confidence, not expected values.")


class Status(str, Enum):
    SATISFIED = "satisfied"
    THRESHOLD_MET = "threshold_met"
    UNSATISFIED = "unsatisfied"
    INDETERMINATE = "indeterminate"


class OrPolicy(str, Enum):
    #: unselected OR groups make their target indeterminate
    STRICT = "strict"
    #: unselected OR groups take the link with the largest adjusted effect
    BEST = "best"


@dataclass(frozen=True)
class ScenarioOptions:
    confidence_adjust: bool = True
    single_point_proration: bool = False
    or_policy: OrPolicy = OrPolicy.STRICT


@dataclass(frozen=True)
class Scenario:
    """An analyst's choice set: requirement levels, OR selections, overrides."""

    id: str = "adhoc"
    requirement_levels: dict[str, float] = field(default_factory=dict)
    or_selections: dict[str, str] = field(default_factory=dict)
    confidence_override: dict[str, Decimal] = field(default_factory=dict)
    options: ScenarioOptions = field(default_factory=ScenarioOptions)


@dataclass(frozen=True)
class ContributionRecord:
    link_id: str
    raw: float
    adjusted: float
    confidence: float


@dataclass(frozen=True)
class NodeOutcome:
    node_id: str
    achieved: float | None
    status: Status
    contributions: tuple[ContributionRecord, ...] = ()


@dataclass(frozen=True)
class IntervalOutcome:
    lo: float
    hi: float
    status_lo: Status
    status_hi: Status
    exact: bool = True


@dataclass(frozen=True)
class AuditFlag:
    code: str
    location: str
    message: str = ""


@dataclass(frozen=True)
class ChainHop:
    link_id: str
    source: str
    target: str
    raw: float | None
    adjusted: float | None
    confidence: float


@dataclass(frozen=True)
class ChainSummary:
    path: tuple[str, ...]
    hops: tuple[ChainHop, ...]
    path_confidence: float


@dataclass(frozen=True)
class EvaluationResult:
    scenario_id: str
    confidence_adjusted: bool
    outcomes: dict[str, NodeOutcome]
    root_utilities: dict[str, float]
    total_utility: float | None
    audit_flags: tuple[AuditFlag, ...]
    intervals: dict[str, IntervalOutcome] | None = None
    note: str = CONFIDENCE_NOTE

    def outcome(self, node_id: str) -> NodeOutcome:
        return self.outcomes[node_id]


def check_scenario(model: GoalModel, scenario: Scenario) -> list[str]:
    """Scenario domain problems as human-readable strings; empty when valid."""
    problems = []
    for req_id, level in sorted(scenario.requirement_levels.items()):
        req = model.requirements.get(req_id)
        if req is None:
            problems.append(f"unknown requirement {req_id!r}")
            continue
        lv = float(level)
        if req.kind is RequirementKind.FUNCTIONAL and lv not in (0.0, 1.0):
            problems.append(f"functional requirement {req_id!r} takes levels 0 or 1, got {level}")
        elif not 0.0 <= lv <= 1.0:
            problems.append(f"level for {req_id!r} outside [0, 1]: {level}")
    group_links: dict[str, set[str]] = {}
    for link in model.contributions.values():
        if link.group is not None and link.group.mode is GroupMode.OR:
            group_links.setdefault(link.group.id, set()).add(link.id)
    for group_id, link_id in sorted(scenario.or_selections.items()):
        if group_id not in group_links:
            problems.append(f"unknown OR group {group_id!r}")
        elif link_id not in group_links[group_id]:
            problems.append(f"link {link_id!r} is not a member of OR group {group_id!r}")
    for link_id, value in sorted(scenario.confidence_override.items()):
        if link_id not in model.contributions:
            problems.append(f"confidence override for unknown link {link_id!r}")
        elif not 0 <= float(value) <= 1:
            problems.append(f"confidence override for {link_id!r} outside [0, 1]")
    return problems


def evaluate(model: GoalModel, scenario: Scenario,
             forced: dict[str, float] | None = None) -> EvaluationResult:
    """Propagate the scenario through the graph; pure and deterministic.

    ``forced`` pins nodes to given achieved values (used by sweeps); forced
    nodes ignore their inputs and scenario levels.
    """
    problems = check_scenario(model, scenario)
    if problems:
        raise ScenarioError("; ".join(problems))
    state = _Propagation(model, scenario, forced or {})
    for node_id in contribution_order(model):
        state.visit(node_id)
    return state.result()


def evaluate_interval(model: GoalModel, scenario: Scenario) -> EvaluationResult:
    """Point evaluation plus per-node [lo, hi] bounds from interval estimates.

    Interval estimates widen single-point contributions by their halfwidth;
    table functions map source intervals through propagate_interval. Sums add
    endpoints; point values are degenerate intervals. Statuses are graded
    pessimistically (lo) and optimistically (hi).
    """
    point = evaluate(model, scenario)
    state = _IntervalPropagation(model, scenario, point)
    for node_id in contribution_order(model):
        state.visit(node_id)
    return replace(point,
                   intervals=state.intervals,
                   audit_flags=point.audit_flags + tuple(state.extra_flags))


class _Propagation:
    def __init__(self, model: GoalModel, scenario: Scenario, forced: dict[str, float]):
        self.model = model
        self.scenario = scenario
        self.forced = forced
        self.outcomes: dict[str, NodeOutcome] = {}
        self.flags: list[AuditFlag] = []

    def confidence_of(self, link: ContributionLink) -> float:
        override = self.scenario.confidence_override.get(link.id)
        return float(override) if override is not None else float(link.confidence.value)

    def visit(self, node_id: str) -> None:
        if node_id in self.forced:
            value = float(self.forced[node_id])
            self.outcomes[node_id] = NodeOutcome(node_id, value,
                                                 self._grade(node_id, value))
            return
        if node_id in self.model.requirements:
            level = float(self.scenario.requirement_levels.get(node_id, 0.0))
            status = Status.SATISFIED if level >= 1.0 else Status.UNSATISFIED
            self.outcomes[node_id] = NodeOutcome(node_id, level, status)
            return
        self._visit_objective(node_id)

    def _visit_objective(self, node_id: str) -> None:
        records: list[ContributionRecord] = []
        total = 0.0
        indeterminate = False
        adjust = self.scenario.options.confidence_adjust
        incoming = self.model.incoming(node_id)
        or_groups = _group_by_or(incoming)

        active: list[ContributionLink] = [l for l in incoming
                                          if l.group is None or l.group.mode is GroupMode.AND]
        for group_id, members in sorted(or_groups.items()):
            chosen = self.scenario.or_selections.get(group_id)
            if chosen is not None:
                active.extend(l for l in members if l.id == chosen)
            elif self.scenario.options.or_policy is OrPolicy.BEST:
                best = max(members,
                           key=lambda l: (self._contribution(l, record_flags=False)[1], l.id))
                self.flags.append(AuditFlag("OR_BEST_PICK", f"group {group_id}",
                                            f"auto-selected link {best.id}"))
                active.append(best)
            else:
                indeterminate = True
                self.flags.append(AuditFlag(
                    "UNSELECTED_OR", f"group {group_id}",
                    f"no selection for OR group feeding {node_id}; a decision has to be made"))

        for link in sorted(active, key=lambda l: l.id):
            source = self.outcomes[link.source]
            if source.status is Status.INDETERMINATE:
                indeterminate = True
                continue
            raw, adjusted = self._contribution(link)
            sign = 1.0 if link.effect is self.model.objectives[node_id].magnitude.direction else -1.0
            records.append(ContributionRecord(link.id, sign * raw,
                                              sign * (adjusted if adjust else raw),
                                              self.confidence_of(link)))
            total += records[-1].adjusted

        if indeterminate:
            self.outcomes[node_id] = NodeOutcome(node_id, None, Status.INDETERMINATE,
                                                 tuple(records))
            return
        self.outcomes[node_id] = NodeOutcome(node_id, total, self._grade(node_id, total),
                                             tuple(records))

    def _contribution(self, link: ContributionLink,
                      record_flags: bool = True) -> tuple[float, float]:
        """(raw, confidence-adjusted) magnitude of one link, unsigned."""
        source = self.outcomes[link.source]
        value = source.achieved if source.achieved is not None else 0.0
        conf = self.confidence_of(link)
        q = link.quantification
        if isinstance(q, Estimate):
            if self.scenario.options.single_point_proration:
                target = self._source_target(link.source)
                raw = fns.evaluate(fns.table([(0, 0), (target, q.point)]), value)
            elif source.status is Status.SATISFIED:
                raw = float(q.point)
            else:
                raw = 0.0
                if value != 0.0 and record_flags:
                    self.flags.append(AuditFlag(
                        "PARTIAL_UNMODELED", f"link {link.id}",
                        f"source {link.source} partially satisfied; single-point "
                        f"contribution is defined only at full satisfaction"))
        else:
            raw = fns.evaluate(q, value)
            dlo, dhi = q.domain()
            if (value < dlo or value > dhi) and q.extrapolation is fns.Extrapolation.CLAMP \
                    and record_flags:
                self.flags.append(AuditFlag(
                    "STALE_DOMAIN", f"link {link.id}",
                    f"source value {_fmt(value)} clamped to table domain "
                    f"[{_fmt(dlo)}, {_fmt(dhi)}]; the table no longer spans "
                    f"the worst-to-best range"))
        return raw, raw * conf

    def _source_target(self, source_id: str) -> float:
        if source_id in self.model.requirements:
            return 1.0
        return float(self.model.objectives[source_id].magnitude.target)

    def _grade(self, node_id: str, achieved: float) -> Status:
        if node_id in self.model.requirements:
            return Status.SATISFIED if achieved >= 1.0 else Status.UNSATISFIED
        mag = self.model.objectives[node_id].magnitude
        if achieved >= float(mag.target):
            return Status.SATISFIED
        if achieved >= float(mag.threshold):
            return Status.THRESHOLD_MET
        return Status.UNSATISFIED

    def result(self) -> EvaluationResult:
        root_utilities, total_utility = self._utilities()
        flags = list(static_audit(self.model)) + self.flags
        ordered = tuple(sorted(set(flags), key=lambda f: (f.code, f.location, f.message)))
        return EvaluationResult(
            scenario_id=self.scenario.id,
            confidence_adjusted=self.scenario.options.confidence_adjust,
            outcomes=self.outcomes,
            root_utilities=root_utilities,
            total_utility=total_utility,
            audit_flags=ordered,
        )

    def _utilities(self) -> tuple[dict[str, float], float | None]:
        from .model import roots as model_roots

        root_ids = model_roots(self.model)
        utilities: dict[str, float] = {}
        for root in root_ids:
            util = self.model.utilities.get(root)
            outcome = self.outcomes.get(root)
            if util is None or outcome is None:
                continue
            if outcome.status is Status.INDETERMINATE:
                self.flags.append(AuditFlag("INDETERMINATE_ROOT", f"objective {root}",
                                            "utility undefined without an OR decision"))
                continue
            utilities[root] = fns.evaluate(util, outcome.achieved)

        weights = _effective_weights(self.model, root_ids)
        usable = {r: w for r, w in weights.items() if r in utilities and w > 0}
        undecided = False
        for root, w in sorted(weights.items()):
            if w <= 0 or root in utilities:
                continue
            if self.model.utilities.get(root) is None:
                self.flags.append(AuditFlag("MISSING_UTILITY", f"objective {root}",
                                            "weighted root has no utility function"))
            else:
                # utility function exists but the root is indeterminate
                undecided = True
        if not usable or undecided:
            return utilities, None
        scale = sum(usable.values())
        total = sum(utilities[r] * (w / scale) for r, w in usable.items())
        return utilities, total


def _effective_weights(model: GoalModel, root_ids: list[str]) -> dict[str, float]:
    if model.root_weights:
        return {r: float(model.root_weights.get(r, 0)) for r in root_ids}
    if not root_ids:
        return {}
    return {r: 1.0 / len(root_ids) for r in root_ids}


def _group_by_or(links) -> dict[str, list[ContributionLink]]:
    groups: dict[str, list[ContributionLink]] = {}
    for link in links:
        if link.group is not None and link.group.mode is GroupMode.OR:
            groups.setdefault(link.group.id, []).append(link)
    return groups


class _IntervalPropagation:
    def __init__(self, model: GoalModel, scenario: Scenario, point: EvaluationResult):
        self.model = model
        self.scenario = scenario
        self.point = point
        self.intervals: dict[str, IntervalOutcome] = {}
        self.extra_flags: list[AuditFlag] = []

    def visit(self, node_id: str) -> None:
        if node_id in self.model.requirements:
            level = float(self.scenario.requirement_levels.get(node_id, 0.0))
            self.intervals[node_id] = IntervalOutcome(
                level, level, self._grade(node_id, level), self._grade(node_id, level))
            return
        outcome = self.point.outcomes[node_id]
        if outcome.status is Status.INDETERMINATE:
            self.intervals[node_id] = IntervalOutcome(
                math.nan, math.nan, Status.INDETERMINATE, Status.INDETERMINATE)
            return
        lo = hi = 0.0
        exact = True
        adjust = self.scenario.options.confidence_adjust
        contributing = {rec.link_id for rec in outcome.contributions}
        gated_singles = self._gated_singles(node_id, outcome)
        for link_id in sorted(contributing | set(gated_singles)):
            link = self.model.contributions[link_id]
            c_lo, c_hi, c_exact = self._link_interval(link, adjust)
            sign = 1.0 if link.effect is self.model.objectives[node_id].magnitude.direction else -1.0
            if sign < 0:
                c_lo, c_hi = -c_hi, -c_lo
            lo += c_lo
            hi += c_hi
            exact = exact and c_exact
        self.intervals[node_id] = IntervalOutcome(
            lo, hi, self._grade(node_id, lo), self._grade(node_id, hi), exact)

    def _gated_singles(self, node_id: str, outcome: NodeOutcome) -> set[str]:
        """Single-point links gated to zero in the point pass but whose
        source interval reaches satisfaction; they widen the upper bound."""
        present = {rec.link_id for rec in outcome.contributions}
        out = set()
        for link in self.model.incoming(node_id):
            if link.id in present or not link.is_single_point():
                continue
            if link.group is not None and link.group.mode is GroupMode.OR:
                if self.scenario.or_selections.get(link.group.id) != link.id:
                    continue
            src = self.intervals.get(link.source)
            if src is not None and src.status_hi is Status.SATISFIED:
                out.add(link.id)
        return out

    def _link_interval(self, link: ContributionLink, adjust: bool) -> tuple[float, float, bool]:
        src = self.intervals[link.source]
        conf = self._confidence_of(link) if adjust else 1.0
        q = link.quantification
        if isinstance(q, Estimate):
            if self.scenario.options.single_point_proration:
                target = 1.0 if link.source in self.model.requirements else \
                    float(self.model.objectives[link.source].magnitude.target)
                bound = fns.propagate_interval(fns.table([(0, 0), (target, q.point)]),
                                               src.lo, src.hi)
                return bound.lo * conf, bound.hi * conf, True
            hw = float(q.halfwidth or 0)
            centre = float(q.point) * conf
            c_lo, c_hi = centre - hw, centre + hw
            if src.status_lo is not Status.SATISFIED:
                # part of the source interval fails the gate: zero is attainable
                c_lo, c_hi = min(c_lo, 0.0), max(c_hi, 0.0)
            if src.status_hi is not Status.SATISFIED:
                return 0.0, 0.0, True
            return c_lo, c_hi, True
        bound = fns.propagate_interval(q, src.lo, src.hi)
        if not bound.exact:
            self.extra_flags.append(AuditFlag(
                "NON_MONOTONE_INTERVAL", f"link {link.id}",
                "cardinal spline bound obtained by sampling; approximate"))
        b_lo, b_hi = bound.lo * conf, bound.hi * conf
        if b_lo > b_hi:
            b_lo, b_hi = b_hi, b_lo
        return b_lo, b_hi, bound.exact

    def _confidence_of(self, link: ContributionLink) -> float:
        override = self.scenario.confidence_override.get(link.id)
        return float(override) if override is not None else float(link.confidence.value)

    def _grade(self, node_id: str, value: float) -> Status:
        if node_id in self.model.requirements:
            return Status.SATISFIED if value >= 1.0 else Status.UNSATISFIED
        mag = self.model.objectives[node_id].magnitude
        if value >= float(mag.target):
            return Status.SATISFIED
        if value >= float(mag.threshold):
            return Status.THRESHOLD_MET
        return Status.UNSATISFIED


def static_audit(model: GoalModel) -> tuple[AuditFlag, ...]:
    """Model-level audit: graph-expansion hints and stale table domains."""
    flags: list[AuditFlag] = []
    for link_id in non_monotone_links(model):
        flags.append(AuditFlag(
            "EXPAND_GRAPH", f"link {link_id}",
            "table function is not monotonic (hump or U-shaped); the causal "
            "pathway is more complex than modelled — expand the graph"))
    for link in sorted(model.contributions.values(), key=lambda l: l.id):
        if link.is_single_point() or not link.quantification.well_formed():
            continue
        fn = link.quantification
        ys = fn.ys()
        if any(y > 0 for y in ys) and any(y < 0 for y in ys):
            flags.append(AuditFlag(
                "MIXED_POLARITY", f"link {link.id}",
                "contribution changes sign across the range; helpful and harmful "
                "effects are conflated in one link"))
        src_lo, src_hi = _declared_range(model, link.source)
        dlo, dhi = fn.domain()
        if dlo > src_lo or dhi < src_hi:
            flags.append(AuditFlag(
                "STALE_DOMAIN", f"link {link.id}",
                f"table domain [{_fmt(dlo)}, {_fmt(dhi)}] does not cover the source's "
                f"worst-to-best range [{_fmt(src_lo)}, {_fmt(src_hi)}]"))
    return tuple(flags)


def audit(model: GoalModel) -> list[AuditFlag]:
    return list(static_audit(model))


def _declared_range(model: GoalModel, node_id: str) -> tuple[float, float]:
    if node_id in model.requirements:
        return 0.0, 1.0
    mag = model.objectives[node_id].magnitude
    return 0.0, max(float(mag.target), float(mag.threshold))


def _fmt(x: float) -> str:
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def summarize_chain(model: GoalModel, result: EvaluationResult,
                    from_id: str) -> list[ChainSummary]:
    """All contribution paths from a requirement out to sink objectives,
    with per-hop effects read from the result and multiplicative path
    confidence (an assumption: the paper leaves composition open)."""
    summaries: list[ChainSummary] = []

    def hop_for(link: ContributionLink) -> ChainHop:
        outcome = result.outcomes.get(link.target)
        record = None
        if outcome is not None:
            record = next((r for r in outcome.contributions if r.link_id == link.id), None)
        conf = record.confidence if record is not None else float(link.confidence.value)
        return ChainHop(link.id, link.source, link.target,
                        record.raw if record else None,
                        record.adjusted if record else None, conf)

    def walk(node_id: str, path: list[str], hops: list[ChainHop]) -> None:
        outgoing = model.outgoing(node_id)
        if not outgoing:
            if hops:
                conf = 1.0
                for hop in hops:
                    conf *= hop.confidence
                summaries.append(ChainSummary(tuple(path), tuple(hops), conf))
            return
        for link in outgoing:
            if link.target in path:
                continue
            walk(link.target, path + [link.target], hops + [hop_for(link)])

    if from_id in model.requirements or from_id in model.objectives:
        walk(from_id, [from_id], [])
    summaries.sort(key=lambda s: s.path)
    return summaries
