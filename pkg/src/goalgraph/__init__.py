"""Quantified goal graphs for strategic-alignment analysis.

Model software requirements and business objectives as a typed goal graph,
quantify contribution links (single-point estimates or table functions with
confidence), propagate satisfaction under what-if scenarios, and compare
outcomes. See README.md for the tour; the `.goal` grammar is in docs/dsl.md.
"""

from __future__ import annotations

from pathlib import Path

from .engine import (
    EvaluationResult,
    NodeOutcome,
    OrPolicy,
    Scenario,
    ScenarioOptions,
    Status,
    audit,
    evaluate,
    evaluate_interval,
    summarize_chain,
)
from .errors import (
    DomainViolation,
    GoalGraphError,
    LabelSyntaxError,
    NonMonotoneError,
    ScenarioError,
    SchemaVersionError,
)
from .functions import (
    Extrapolation,
    Interpolation,
    TableFunction,
    evaluate as evaluate_function,
    monotonicity,
    propagate_interval,
    table,
)
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
    ValidationReport,
    format_label,
    parse_label,
    roots,
    validate,
)
from .tracking import Measurement, MeasurementStore, measurement, variance_report
from .whatif import ScenarioSet, compare, diminishing_returns, sweep

__version__ = "0.1.0"

_FIXTURE_DIR = Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> Path:
    """Path of a bundled example model (e.g. ``alignment.goal``)."""
    path = _FIXTURE_DIR / name
    if not path.exists():
        available = ", ".join(sorted(p.name for p in _FIXTURE_DIR.glob("*.goal")))
        raise FileNotFoundError(f"no bundled fixture {name!r} (have: {available})")
    return path
