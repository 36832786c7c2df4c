"""Exception types shared across the package.

Every raisable error carries a stable ``code`` string; CLI and server map
these codes onto exit statuses / HTTP statuses without string matching.
"""

from __future__ import annotations


class GoalGraphError(Exception):
    """Base class for all domain errors."""

    code = "ERROR"

    def __init__(self, message: str, location: str | None = None):
        super().__init__(message)
        self.location = location

    def detail(self) -> dict:
        return {
            "code": self.code,
            "location": self.location,
            "message": str(self),
        }


class DomainViolation(GoalGraphError):
    """Input outside a table function's domain under the reject policy."""

    code = "DOMAIN_VIOLATION"


class NonMonotoneError(GoalGraphError):
    """Operation requires a monotone table function."""

    code = "NON_MONOTONE"


class LabelSyntaxError(GoalGraphError):
    """Compact node label does not match either label syntax."""

    code = "LABEL_SYNTAX"

    def __init__(self, message: str, column: int):
        super().__init__(message)
        self.column = column


class ScenarioError(GoalGraphError):
    """Scenario violates its declared domain (levels, selections, overrides)."""

    code = "BAD_SCENARIO"


class SchemaVersionError(GoalGraphError):
    """JSON document carries an unsupported schema version."""

    code = "SCHEMA_VERSION"


class UnknownObjectiveError(GoalGraphError):
    code = "UNKNOWN_OBJECTIVE"


class DuplicateTimestampError(GoalGraphError):
    code = "DUPLICATE_TIMESTAMP"


class CycleError(GoalGraphError):
    """Contribution links form a cycle; propagation order undefined."""

    code = "CYCLE"
