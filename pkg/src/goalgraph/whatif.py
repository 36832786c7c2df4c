"""Scenario comparison, sensitivity sweeps, and diminishing-returns analysis.

Everything here is a thin, deterministic layer over the evaluation engine:
compare runs one evaluation per scenario and tabulates root objectives
against a baseline; sweep varies exactly one node across a range; the knee
finder locates where secant slopes of a monotone table collapse.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import EvaluationResult, Scenario, Status, evaluate
from .errors import GoalGraphError, NonMonotoneError
from .functions import MonotoneClass, TableFunction, monotonicity
from .model import GoalModel, roots


@dataclass(frozen=True)
class ScenarioSet:
    scenarios: dict[str, Scenario]
    baseline: str

    def __post_init__(self):
        if self.baseline not in self.scenarios:
            raise ValueError(f"baseline {self.baseline!r} is not in the set")


@dataclass(frozen=True)
class ComparisonCell:
    achieved: float | None
    status: Status | None
    delta: float | None


@dataclass(frozen=True)
class ComparisonTable:
    #: root objective ids, plus the pseudo-row "total_utility"
    rows: tuple[str, ...]
    #: scenario names, baseline first, then declaration order
    columns: tuple[str, ...]
    baseline: str
    cells: dict[tuple[str, str], ComparisonCell]
    column_errors: dict[str, str] = field(default_factory=dict)


def compare(model: GoalModel, scenario_set: ScenarioSet) -> ComparisonTable:
    """Evaluate every scenario and tabulate roots (and total utility)
    against the baseline. Evaluation failures annotate their column."""
    root_ids = roots(model)
    columns = [scenario_set.baseline] + [n for n in scenario_set.scenarios
                                         if n != scenario_set.baseline]
    results: dict[str, EvaluationResult] = {}
    column_errors: dict[str, str] = {}
    for name in columns:
        try:
            results[name] = evaluate(model, scenario_set.scenarios[name])
        except GoalGraphError as exc:
            column_errors[name] = f"{exc.code}: {exc}"

    cells: dict[tuple[str, str], ComparisonCell] = {}
    base = results.get(scenario_set.baseline)
    for name in columns:
        result = results.get(name)
        for root in root_ids:
            cells[root, name] = _cell(
                result.outcomes[root].achieved if result else None,
                result.outcomes[root].status if result else None,
                base.outcomes[root].achieved if base else None)
        cells["total_utility", name] = _cell(
            result.total_utility if result else None, None,
            base.total_utility if base else None)
    return ComparisonTable(tuple(root_ids) + ("total_utility",), tuple(columns),
                           scenario_set.baseline, cells, column_errors)


def _cell(achieved, status, base_achieved) -> ComparisonCell:
    delta = None
    if achieved is not None and base_achieved is not None:
        delta = achieved - base_achieved
    return ComparisonCell(achieved, status, delta)


@dataclass(frozen=True)
class SweepSample:
    level: float
    root_achieved: dict[str, float | None]
    root_status: dict[str, Status]
    total_utility: float | None


@dataclass(frozen=True)
class SweepResult:
    node_id: str
    samples: tuple[SweepSample, ...]


def sweep(model: GoalModel, scenario: Scenario, node_id: str,
          start: float, stop: float, steps: int) -> SweepResult:
    """Evaluate with node_id pinned to each of ``steps`` levels in
    [start, stop], holding everything else fixed."""
    if node_id not in model.requirements and node_id not in model.objectives:
        raise ValueError(f"{node_id!r} is not a requirement or objective")
    if not start < stop:
        raise ValueError("sweep needs start < stop")
    if steps < 2:
        raise ValueError("sweep needs at least 2 steps")
    root_ids = roots(model)
    levels = np.linspace(float(start), float(stop), int(steps))
    samples = []
    for level in levels:
        result = evaluate(model, scenario, forced={node_id: float(level)})
        samples.append(SweepSample(
            level=float(level),
            root_achieved={r: result.outcomes[r].achieved for r in root_ids},
            root_status={r: result.outcomes[r].status for r in root_ids},
            total_utility=result.total_utility,
        ))
    return SweepResult(node_id, tuple(samples))


def diminishing_returns(fn: TableFunction, drop_fraction: float = 0.2):
    """First knot after which every forward secant slope falls below
    drop_fraction of the maximum secant slope; None when slopes never
    collapse (e.g. a perfectly linear table)."""
    if not 0 < drop_fraction <= 1:
        raise ValueError("drop_fraction must be in (0, 1]")
    shape = monotonicity(fn)
    if shape.direction is not MonotoneClass.INCREASING:
        raise NonMonotoneError(
            "diminishing-returns analysis needs an increasing-monotone table")
    xs, ys = fn.xs(), fn.ys()
    slopes = [(ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]) for i in range(len(xs) - 1)]
    cutoff = drop_fraction * max(slopes)
    for k in range(len(xs) - 1):
        if all(s < cutoff for s in slopes[k:]):
            return xs[k], ys[k]
    return None
