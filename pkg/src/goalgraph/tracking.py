"""As-is measurement recording and predicted-vs-actual variance reporting.

Measurements are absolute levels of an objective's focus (not deltas),
stored append-only as newline-delimited JSON records — one object per line:
``{"objective": id, "timestamp": ISO-8601 UTC seconds, "value": decimal}``.
The file format is documented bit-exactly in docs/tracking.md.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from decimal import Decimal
from pathlib import Path

from .engine import EvaluationResult
from .errors import DuplicateTimestampError, UnknownObjectiveError
from .model import Direction, GoalModel, as_decimal, format_decimal


@dataclass(frozen=True)
class Measurement:
    objective_id: str
    timestamp: datetime  # UTC, second resolution
    value: Decimal


def _normalize_ts(ts: datetime) -> datetime:
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).replace(microsecond=0)


def measurement(objective_id: str, timestamp, value) -> Measurement:
    """Build a measurement from loose inputs (ISO text or datetime)."""
    if isinstance(timestamp, str):
        ts = datetime.fromisoformat(timestamp.replace("Z", "+00:00"))
    else:
        ts = timestamp
    dec = as_decimal(value)
    if not dec.is_finite():
        raise ValueError(f"measurement value must be finite, got {value!r}")
    return Measurement(objective_id, _normalize_ts(ts), dec)


class MeasurementStore:
    """Append-only measurement series, optionally bound to an ndjson file."""

    def __init__(self, path: Path | str | None = None):
        self.path = Path(path) if path is not None else None
        self._series: dict[str, dict[datetime, Decimal]] = {}
        if self.path is not None and self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                line = line.strip()
                if not line:
                    continue
                raw = json.loads(line, parse_float=Decimal)
                m = measurement(raw["objective"], raw["timestamp"],
                                as_decimal(raw["value"]))
                self._series.setdefault(m.objective_id, {})[m.timestamp] = m.value

    def __len__(self) -> int:
        return sum(len(s) for s in self._series.values())

    def series(self, objective_id: str) -> list[Measurement]:
        points = self._series.get(objective_id, {})
        return [Measurement(objective_id, ts, points[ts]) for ts in sorted(points)]

    def latest(self, objective_id: str) -> Measurement | None:
        series = self.series(objective_id)
        return series[-1] if series else None

    def record(self, model: GoalModel, m: Measurement) -> None:
        """Append one measurement; re-recording a timestamp is an error."""
        if m.objective_id not in model.objectives:
            raise UnknownObjectiveError(
                f"no objective {m.objective_id!r} in the model", m.objective_id)
        ts = _normalize_ts(m.timestamp)
        bucket = self._series.setdefault(m.objective_id, {})
        if ts in bucket:
            raise DuplicateTimestampError(
                f"{m.objective_id} already measured at {_iso(ts)}", m.objective_id)
        bucket[ts] = m.value
        if self.path is not None:
            # hand-built so the decimal value is written exactly, as a number
            line = (f'{{"objective": {json.dumps(m.objective_id)}, '
                    f'"timestamp": {json.dumps(_iso(ts))}, '
                    f'"value": {format_decimal(m.value)}}}')
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line + "\n")


def _iso(ts: datetime) -> str:
    return ts.strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class VarianceRow:
    objective_id: str
    predicted: float | None
    actual: float | None
    gap: float | None
    verdict: str  # on_track | behind | exceeded | no_data
    as_is: float | None = None
    latest: float | None = None
    timeframe: str = ""


def variance_report(model: GoalModel, store: MeasurementStore,
                    result: EvaluationResult) -> list[VarianceRow]:
    """Per-objective predicted vs. actual deltas.

    The actual delta is oriented by the objective's direction (a reduction
    from 6 to 4 months is +2 achieved); percent-scaled objectives convert
    the absolute measurement to percentage points of the as-is baseline.
    Verdicts compare the final predicted delta only: behind (actual below
    prediction), on_track (equal), exceeded (above); timeframes are shown
    alongside for human judgment, not prorated.
    """
    rows = []
    for obj_id in sorted(model.objectives):
        obj = model.objectives[obj_id]
        outcome = result.outcomes.get(obj_id)
        predicted = outcome.achieved if outcome is not None else None
        last = store.latest(obj_id)
        if last is None:
            rows.append(VarianceRow(obj_id, predicted, None, None, "no_data",
                                    _maybe_float(obj.magnitude.as_is), None,
                                    obj.timeframe))
            continue
        as_is = obj.magnitude.as_is
        if as_is is None:
            rows.append(VarianceRow(obj_id, predicted, None, None, "no_data",
                                    None, float(last.value), obj.timeframe))
            continue
        raw_delta = float(last.value) - float(as_is)
        if obj.magnitude.direction is Direction.REDUCTION:
            raw_delta = -raw_delta
        if obj.scale.unit == "%":
            actual = raw_delta / float(as_is) * 100.0
        else:
            actual = raw_delta
        if predicted is None:
            rows.append(VarianceRow(obj_id, None, actual, None, "no_data",
                                    float(as_is), float(last.value), obj.timeframe))
            continue
        gap = actual - predicted
        verdict = "on_track" if gap == 0 else ("behind" if gap < 0 else "exceeded")
        rows.append(VarianceRow(obj_id, predicted, actual, gap, verdict,
                                float(as_is), float(last.value), obj.timeframe))
    return rows


def _maybe_float(value) -> float | None:
    return float(value) if value is not None else None
