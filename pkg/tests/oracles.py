"""Independent oracles and generators used by the test suite.

Nothing here imports the engine's propagation or interpolation internals:
the goal is a second, dumber route to the same numbers.

* fc_tangents / fc_eval: the published Fritsch–Carlson monotone-cubic
  construction written as a throwaway script would write it (plain loops,
  expanded polynomial coefficients instead of the Hermite basis).
* table_eval: scan-based step/linear table lookup with clamp/extend/reject.
* spreadsheet_eval: hop-by-hop substitution over a goal model, no
  topological sort — repeat until no cell changes, like a spreadsheet.
* random_model: small valid models for property suites.
* check_dot: a standalone grammar checker for the DOT subset we emit.
"""

from __future__ import annotations

import random
from decimal import Decimal

from goalgraph.engine import Scenario, ScenarioOptions
from goalgraph.functions import Extrapolation, Interpolation, TableFunction
from goalgraph.model import (
    Confidence,
    ContributionLink,
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
)

# ---------------------------------------------------------------------------
# Fritsch–Carlson oracle


def fc_tangents(xs, ys):
    n = len(xs)
    d = []
    for k in range(n - 1):
        d.append((ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]))
    m = [0.0] * n
    m[0] = d[0]
    m[-1] = d[-1]
    for k in range(1, n - 1):
        if d[k - 1] * d[k] <= 0:
            m[k] = 0.0
        else:
            m[k] = (d[k - 1] + d[k]) / 2.0
    for k in range(n - 1):
        if d[k] == 0:
            m[k] = 0.0
            m[k + 1] = 0.0
            continue
        a = m[k] / d[k]
        b = m[k + 1] / d[k]
        if a < 0:
            m[k] = 0.0
            a = 0.0
        if b < 0:
            m[k + 1] = 0.0
            b = 0.0
        s = a * a + b * b
        if s > 9.0:
            t = 3.0 / (s ** 0.5)
            m[k] = t * a * d[k]
            m[k + 1] = t * b * d[k]
    return m


def fc_eval(points, x):
    """Monotone-cubic value via expanded per-segment polynomial coefficients."""
    xs = [float(p[0]) for p in points]
    ys = [float(p[1]) for p in points]
    if x <= xs[0]:
        return ys[0]
    if x >= xs[-1]:
        return ys[-1]
    m = fc_tangents(xs, ys)
    i = 0
    while not (xs[i] <= x < xs[i + 1]):
        i += 1
    h = xs[i + 1] - xs[i]
    d = (ys[i + 1] - ys[i]) / h
    c0 = ys[i]
    c1 = m[i]
    c2 = (3.0 * d - 2.0 * m[i] - m[i + 1]) / h
    c3 = (m[i] - 2.0 * d + m[i + 1]) / (h * h)
    s = x - xs[i]
    return c0 + c1 * s + c2 * s * s + c3 * s * s * s


# ---------------------------------------------------------------------------
# scan-based table lookup (step_after / linear only)


def table_eval(fn: TableFunction, x: float) -> float:
    xs = [float(p[0]) for p in fn.points]
    ys = [float(p[1]) for p in fn.points]
    if x < xs[0]:
        if fn.extrapolation is Extrapolation.REJECT:
            raise AssertionError("domain violation")
        if fn.extrapolation is Extrapolation.CLAMP:
            return ys[0]
        slope = (ys[1] - ys[0]) / (xs[1] - xs[0])
        return ys[0] + (x - xs[0]) * slope
    if x > xs[-1]:
        if fn.extrapolation is Extrapolation.REJECT:
            raise AssertionError("domain violation")
        if fn.extrapolation is Extrapolation.CLAMP:
            return ys[-1]
        slope = (ys[-1] - ys[-2]) / (xs[-1] - xs[-2])
        return ys[-1] + (x - xs[-1]) * slope
    if fn.interpolation is Interpolation.STEP_AFTER:
        value = ys[0]
        for k in range(len(xs)):
            if xs[k] <= x:
                value = ys[k]
        return value
    for k in range(len(xs) - 1):
        if xs[k] <= x <= xs[k + 1]:
            if x == xs[k]:
                return ys[k]
            frac = (x - xs[k]) / (xs[k + 1] - xs[k])
            return ys[k] + frac * (ys[k + 1] - ys[k])
    return ys[-1]


def table_interval(fn: TableFunction, lo: float, hi: float) -> tuple[float, float]:
    """Image bounds by brute-force breakpoint enumeration plus a fine grid."""
    probes = [lo, hi]
    for p in fn.points:
        x = float(p[0])
        if lo <= x <= hi:
            probes.append(x)
    steps = 2000
    probes.extend(lo + (hi - lo) * k / steps for k in range(steps + 1))
    # approach each probe from the left as well (step functions)
    eps = (hi - lo) * 1e-9 + 1e-12
    probes.extend(max(lo, p - eps) for p in list(probes))
    values = [table_eval(fn, p) for p in probes]
    return min(values), max(values)


# ---------------------------------------------------------------------------
# spreadsheet-style evaluation (no topological sort)


def spreadsheet_eval(model: GoalModel, scenario: Scenario):
    """Hop-by-hop substitution until stable.

    Returns {node: (achieved or None, status string)} using the same
    propagation rules the engine implements, recomputed independently.
    """
    achieved: dict[str, float | None] = {}
    status: dict[str, str] = {}

    for req_id, req in model.requirements.items():
        level = float(scenario.requirement_levels.get(req_id, 0.0))
        achieved[req_id] = level
        status[req_id] = "satisfied" if level >= 1.0 else "unsatisfied"

    def grade(obj: Objective, value: float) -> str:
        if value >= float(obj.magnitude.target):
            return "satisfied"
        if value >= float(obj.magnitude.threshold):
            return "threshold_met"
        return "unsatisfied"

    remaining = set(model.objectives)
    while remaining:
        progressed = False
        for obj_id in sorted(remaining):
            obj = model.objectives[obj_id]
            incoming = [l for l in model.contributions.values() if l.target == obj_id]
            # pick active links: ungrouped + AND + selected OR member
            active = []
            undecided_or = False
            for link in incoming:
                if link.group is None or link.group.mode is GroupMode.AND:
                    active.append(link)
            or_ids = {l.group.id for l in incoming
                      if l.group is not None and l.group.mode is GroupMode.OR}
            for gid in or_ids:
                chosen = scenario.or_selections.get(gid)
                members = [l for l in incoming if l.group and l.group.id == gid]
                picked = [l for l in members if l.id == chosen]
                if picked:
                    active.extend(picked)
                else:
                    undecided_or = True
            if any(l.source not in achieved for l in active):
                continue
            progressed = True
            remaining.discard(obj_id)
            if undecided_or or any(status[l.source] == "indeterminate" for l in active):
                achieved[obj_id] = None
                status[obj_id] = "indeterminate"
                break
            total = 0.0
            # same deterministic summation order the additivity rule fixes
            for link in sorted(active, key=lambda l: l.id):
                src_val = achieved[link.source]
                if isinstance(link.quantification, Estimate):
                    value = (float(link.quantification.point)
                             if status[link.source] == "satisfied" else 0.0)
                else:
                    value = table_eval(link.quantification, src_val)
                conf = scenario.confidence_override.get(link.id)
                conf = float(conf) if conf is not None else float(link.confidence.value)
                if scenario.options.confidence_adjust:
                    value *= conf
                if link.effect is not obj.magnitude.direction:
                    value = -value
                total += value
            achieved[obj_id] = total
            status[obj_id] = grade(obj, total)
            break
        if not progressed:
            raise AssertionError("cycle or dangling source in generated model")
    return {n: (achieved[n], status[n]) for n in achieved}


# ---------------------------------------------------------------------------
# random model generator


def random_model(rng: random.Random, monotone_aligned: bool = False,
                 with_groups: bool = True) -> tuple[GoalModel, Scenario]:
    """Small valid model (<= 6 nodes) plus a matching scenario.

    monotone_aligned restricts to increasing-monotone tables, non-negative
    estimates, and effect directions aligned with every target (for the
    monotone-response property).
    """
    n_req = rng.randint(1, 2)
    n_obj = rng.randint(1, 4)
    requirements = {}
    for i in range(n_req):
        kind = RequirementKind.FUNCTIONAL if rng.random() < 0.5 \
            else RequirementKind.NON_FUNCTIONAL
        requirements[f"r{i}"] = Requirement(
            id=f"r{i}", kind=kind, headline=f"req {i}",
            fit_criterion=FitCriterion(f"criterion {i}"))
    objectives = {}
    for j in range(n_obj):
        direction = Direction.REDUCTION if rng.random() < 0.5 else Direction.INCREASE
        target = Decimal(rng.randint(2, 12))
        threshold = Decimal(rng.randint(1, int(target)))
        objectives[f"o{j}"] = Objective(
            id=f"o{j}",
            activity="Reduced" if direction is Direction.REDUCTION else "Increased",
            object=f"asset {j}", focus=f"metric {j}",
            magnitude=Magnitude(target, threshold, Decimal(100), direction),
            scale=Scale("", "u", ScaleKind.CONTINUOUS))

    def make_table(source_hi: float) -> TableFunction:
        n_pts = rng.randint(2, 4)
        xs = sorted(rng.sample(range(0, 20), n_pts))
        base = rng.uniform(0, 3)
        ys = []
        y = base
        for _ in range(n_pts):
            step = rng.uniform(0, 4) if monotone_aligned else rng.uniform(-4, 4)
            ys.append(round(y, 3))
            y += step
        interpolation = Interpolation.STEP_AFTER if rng.random() < 0.5 \
            else Interpolation.LINEAR
        # extend_slope can leave the non-negative range below the domain,
        # breaking the uniform-sign premise of the damping property
        extrapolation = Extrapolation.CLAMP if monotone_aligned \
            else (Extrapolation.CLAMP if rng.random() < 0.7
                  else Extrapolation.EXTEND_SLOPE)
        return TableFunction(
            tuple((Decimal(x), Decimal(str(v))) for x, v in zip(xs, ys)),
            interpolation, extrapolation)

    contributions = {}
    link_n = 0
    node_order = list(requirements) + list(objectives)
    or_groups: dict[str, list[str]] = {}
    for target_idx, obj_id in enumerate(objectives):
        obj = objectives[obj_id]
        sources = list(requirements) + [f"o{k}" for k in range(target_idx)]
        rng.shuffle(sources)
        for source in sources[:rng.randint(0, min(2, len(sources)))]:
            link_id = f"L{link_n}"
            link_n += 1
            if monotone_aligned:
                effect = obj.magnitude.direction
            else:
                effect = Direction.REDUCTION if rng.random() < 0.5 else Direction.INCREASE
            if rng.random() < 0.5:
                point = Decimal(rng.randint(0 if monotone_aligned else -5, 10))
                quant = Estimate(point)
            else:
                quant = make_table(10.0)
            conf = rng.choice([Decimal("0.25"), Decimal("0.5"),
                               Decimal("0.75"), Decimal("1")])
            group = None
            if with_groups and rng.random() < 0.3:
                mode = GroupMode.AND if rng.random() < 0.5 else GroupMode.OR
                gid = f"g_{obj_id}_{mode.value}"
                group = LinkGroup(gid, mode)
                if mode is GroupMode.OR:
                    or_groups.setdefault(gid, []).append(link_id)
            contributions[link_id] = ContributionLink(
                id=link_id, source=source, target=obj_id, quantification=quant,
                effect=effect, unit="u", confidence=Confidence(conf), group=group)

    levels = {}
    for req_id, req in requirements.items():
        if req.kind is RequirementKind.FUNCTIONAL:
            levels[req_id] = float(rng.randint(0, 1))
        else:
            levels[req_id] = round(rng.random(), 3)
    selections = {gid: rng.choice(members) for gid, members in or_groups.items()}
    scenario = Scenario(
        id="generated", requirement_levels=levels, or_selections=selections,
        options=ScenarioOptions(confidence_adjust=rng.random() < 0.7))
    model = GoalModel(objectives=objectives, requirements=requirements,
                      contributions=contributions)
    return model, scenario


# ---------------------------------------------------------------------------
# DOT grammar checker


class DotSyntaxError(AssertionError):
    pass


def check_dot(text: str) -> None:
    """Validate the emitted DOT subset: digraph ID { stmt* } where stmt is
    an attribute default, node, edge, or rank group. Raises on violation."""
    tokens = _dot_lex(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else ("EOF", "")

    def take(kind, value=None):
        nonlocal pos
        tok = peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            raise DotSyntaxError(f"expected {kind} {value or ''}, got {tok}")
        pos += 1
        return tok

    take("WORD", "digraph")
    if peek()[0] in ("WORD", "STRING"):
        pos += 1
    take("PUNCT", "{")
    while True:
        tok = peek()
        if tok == ("PUNCT", "}"):
            pos += 1
            break
        if tok[0] == "EOF":
            raise DotSyntaxError("unterminated digraph")
        if tok == ("PUNCT", "{"):  # rank group
            pos += 1
            take("WORD", "rank")
            take("PUNCT", "=")
            take("WORD")
            take("PUNCT", ";")
            while peek() != ("PUNCT", "}"):
                if peek()[0] not in ("WORD", "STRING"):
                    raise DotSyntaxError(f"bad rank member {peek()}")
                pos += 1
                take("PUNCT", ";")
            take("PUNCT", "}")
            continue
        if tok[0] not in ("WORD", "STRING"):
            raise DotSyntaxError(f"unexpected token {tok}")
        pos += 1  # node id / 'node' / 'edge' / 'rankdir'
        tok = peek()
        if tok == ("PUNCT", "="):  # rankdir=BT;
            pos += 1
            take("WORD")
            take("PUNCT", ";")
            continue
        if tok == ("PUNCT", "->"):
            pos += 1
            if peek()[0] not in ("WORD", "STRING"):
                raise DotSyntaxError(f"edge target missing, got {peek()}")
            pos += 1
        if peek() == ("PUNCT", "["):
            _dot_attr_list(take, peek)
        take("PUNCT", ";")
    if peek()[0] != "EOF":
        raise DotSyntaxError(f"trailing tokens: {peek()}")


def _dot_attr_list(take, peek):
    take("PUNCT", "[")
    while True:
        if peek() == ("PUNCT", "]"):
            take("PUNCT", "]")
            return
        take("WORD")
        take("PUNCT", "=")
        if peek()[0] not in ("WORD", "STRING"):
            raise DotSyntaxError(f"attribute value missing, got {peek()}")
        take(peek()[0])
        if peek() == ("PUNCT", ","):
            take("PUNCT", ",")


def _dot_lex(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if text.startswith("->", i):
            tokens.append(("PUNCT", "->"))
            i += 2
            continue
        if ch in "{}[];,=":
            tokens.append(("PUNCT", ch))
            i += 1
            continue
        if ch == '"':
            i += 1
            buf = []
            while i < n and text[i] != '"':
                if text[i] == "\\" and i + 1 < n:
                    buf.append(text[i + 1])
                    i += 2
                    continue
                buf.append(text[i])
                i += 1
            if i >= n:
                raise DotSyntaxError("unterminated string")
            i += 1
            tokens.append(("STRING", "".join(buf)))
            continue
        j = i
        while j < n and (text[j].isalnum() or text[j] in "_.%+-"):
            j += 1
        if j == i:
            raise DotSyntaxError(f"bad character {ch!r}")
        tokens.append(("WORD", text[i:j]))
        i = j
    return tokens
