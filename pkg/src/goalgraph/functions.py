"""Multi-point contribution relationships as numeric table functions.

A table function is an ordered list of (x, y) knots plus an interpolation
method and an out-of-domain policy. Knots are stored as exact decimals
(they come from the DSL); evaluation happens in binary floats.

Interpolation methods:

* ``step_after`` — right-continuous staircase: y_i holds on [x_i, x_{i+1}).
* ``linear`` — piecewise linear between knots.
* ``monotone_cubic`` — Fritsch–Carlson monotone piecewise cubic Hermite:
  tangents start as arithmetic means of adjacent secants, are zeroed where
  the data direction flips or a secant is flat, and are projected onto the
  radius-3 circle (alpha^2 + beta^2 <= 9) that guarantees per-segment
  monotonicity. Never overshoots the knot envelope.
* ``cardinal`` — tension-parameterized cubic Hermite (tension 1 = flattest,
  0 = Catmull–Rom). May overshoot between knots, so monotonicity and
  interval bounds are derived by dense sampling and flagged approximate.

Out-of-domain policies: ``clamp`` maps to the nearer endpoint's y,
``extend_slope`` continues the secant of the two outermost knots, and
``reject`` raises DOMAIN_VIOLATION.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum

import numpy as np

from .errors import DomainViolation

# Fraction of the domain width between dense samples when a method
# (cardinal) admits inter-knot extrema that cannot be found analytically.
SAMPLE_RESOLUTION = 1e-3


class Interpolation(str, Enum):
    STEP_AFTER = "step_after"
    LINEAR = "linear"
    MONOTONE_CUBIC = "monotone_cubic"
    CARDINAL = "cardinal"


class Extrapolation(str, Enum):
    CLAMP = "clamp"
    EXTEND_SLOPE = "extend_slope"
    REJECT = "reject"


class MonotoneClass(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    NON_MONOTONE = "non_monotone"


@dataclass(frozen=True)
class Monotonicity:
    direction: MonotoneClass
    #: 1-based indices of segments running against the dominant direction.
    offending_segments: tuple[int, ...] = ()


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    #: False when the bound came from grid sampling (cardinal splines).
    exact: bool = True


@dataclass(frozen=True)
class TableFunction:
    """Ordered (x, y) pairs with an interpolation method and domain policy."""

    points: tuple[tuple[Decimal, Decimal], ...]
    interpolation: Interpolation = Interpolation.LINEAR
    extrapolation: Extrapolation = Extrapolation.CLAMP
    tension: Decimal = Decimal("0.5")

    def xs(self) -> tuple[float, ...]:
        return tuple(float(p[0]) for p in self.points)

    def ys(self) -> tuple[float, ...]:
        return tuple(float(p[1]) for p in self.points)

    def domain(self) -> tuple[float, float]:
        return float(self.points[0][0]), float(self.points[-1][0])

    def well_formed(self) -> bool:
        if len(self.points) < 2:
            return False
        xs = self.xs()
        return all(a < b for a, b in zip(xs, xs[1:]))


def table(points, interpolation=Interpolation.LINEAR,
          extrapolation=Extrapolation.CLAMP, tension="0.5") -> TableFunction:
    """Convenience constructor accepting plain numbers for knots."""
    pts = tuple((_dec(x), _dec(y)) for x, y in points)
    return TableFunction(pts, Interpolation(interpolation),
                         Extrapolation(extrapolation), _dec(tension))


def _dec(v) -> Decimal:
    if isinstance(v, Decimal):
        return v
    if isinstance(v, float):
        return Decimal(repr(v))
    return Decimal(str(v))


def evaluate(f: TableFunction, x: float) -> float:
    """Value of the table function at x, honoring the out-of-domain policy."""
    xs, ys = f.xs(), f.ys()
    x = float(x)
    lo, hi = xs[0], xs[-1]
    if x < lo or x > hi:
        if f.extrapolation is Extrapolation.REJECT:
            raise DomainViolation(
                f"input {x!r} outside table domain [{lo}, {hi}]")
        if f.extrapolation is Extrapolation.CLAMP:
            return ys[0] if x < lo else ys[-1]
        # extend_slope: secant of the two outermost knots on the crossed side
        if x < lo:
            slope = (ys[1] - ys[0]) / (xs[1] - xs[0])
            return ys[0] + (x - lo) * slope
        slope = (ys[-1] - ys[-2]) / (xs[-1] - xs[-2])
        return ys[-1] + (x - hi) * slope

    if x == hi:
        return ys[-1]
    i = bisect_right(xs, x) - 1  # x_i <= x < x_{i+1}

    if f.interpolation is Interpolation.STEP_AFTER:
        return ys[i]
    if f.interpolation is Interpolation.LINEAR:
        if x == xs[i]:
            return ys[i]
        t = (x - xs[i]) / (xs[i + 1] - xs[i])
        return ys[i] + t * (ys[i + 1] - ys[i])

    if f.interpolation is Interpolation.MONOTONE_CUBIC:
        m = _fritsch_carlson_tangents(xs, ys)
    else:
        m = _cardinal_tangents(xs, ys, float(f.tension))
    return _hermite(xs, ys, m, i, x)


def _hermite(xs, ys, m, i, x) -> float:
    """Cubic Hermite on segment i at x, given knot tangents m."""
    h = xs[i + 1] - xs[i]
    t = (x - xs[i]) / h
    t2 = t * t
    t3 = t2 * t
    h00 = 2.0 * t3 - 3.0 * t2 + 1.0
    h10 = t3 - 2.0 * t2 + t
    h01 = -2.0 * t3 + 3.0 * t2
    h11 = t3 - t2
    return (h00 * ys[i] + h10 * h * m[i]
            + h01 * ys[i + 1] + h11 * h * m[i + 1])


def _fritsch_carlson_tangents(xs, ys) -> list[float]:
    """Knot tangents per the Fritsch–Carlson monotone scheme.

    Arithmetic-mean initialization, zeroing at direction changes and flat
    secants, then a left-to-right sweep projecting (alpha, beta) onto the
    radius-3 circle. Tangents only ever shrink, so earlier segments stay
    inside the monotone region.
    """
    n = len(xs)
    d = [(ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]) for k in range(n - 1)]
    m = [0.0] * n
    m[0] = d[0]
    m[n - 1] = d[n - 2]
    for k in range(1, n - 1):
        if d[k - 1] * d[k] <= 0.0:
            m[k] = 0.0
        else:
            m[k] = (d[k - 1] + d[k]) / 2.0
    for k in range(n - 1):
        if d[k] == 0.0:
            m[k] = 0.0
            m[k + 1] = 0.0
            continue
        alpha = m[k] / d[k]
        beta = m[k + 1] / d[k]
        if alpha < 0.0:
            m[k] = 0.0
            alpha = 0.0
        if beta < 0.0:
            m[k + 1] = 0.0
            beta = 0.0
        s = alpha * alpha + beta * beta
        if s > 9.0:
            tau = 3.0 / s ** 0.5
            m[k] = tau * alpha * d[k]
            m[k + 1] = tau * beta * d[k]
    return m


def _cardinal_tangents(xs, ys, tension: float) -> list[float]:
    """Cardinal-spline tangents: scaled three-point slopes, (1 - c) factor."""
    n = len(xs)
    c = 1.0 - tension
    m = [0.0] * n
    m[0] = c * (ys[1] - ys[0]) / (xs[1] - xs[0])
    m[n - 1] = c * (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2])
    for k in range(1, n - 1):
        m[k] = c * (ys[k + 1] - ys[k - 1]) / (xs[k + 1] - xs[k - 1])
    return m


def _dense_grid(f: TableFunction, lo: float, hi: float) -> np.ndarray:
    width = f.domain()[1] - f.domain()[0]
    step = max(width * SAMPLE_RESOLUTION, 1e-12)
    count = max(int(round((hi - lo) / step)) + 1, 2)
    return np.linspace(lo, hi, count)


def monotonicity(f: TableFunction) -> Monotonicity:
    """Classify the function as increasing, decreasing, or non-monotone.

    Knot ys decide for step_after/linear/monotone_cubic (those methods never
    cross the knot envelope); cardinal splines are densely sampled because
    they may overshoot between knots.
    """
    if f.interpolation is Interpolation.CARDINAL:
        lo, hi = f.domain()
        grid = _dense_grid(f, lo, hi)
        values = [evaluate(f, float(g)) for g in grid]
        diffs = np.diff(values)
        rising = bool(np.any(diffs > 0))
        falling = bool(np.any(diffs < 0))
        if rising and falling:
            xs = f.xs()
            bad = sorted({
                max(1, min(bisect_right(xs, float(grid[j])) , len(xs) - 1))
                for j in range(len(diffs))
                if (diffs[j] < 0) == (values[-1] >= values[0])
                and diffs[j] != 0
            })
            return Monotonicity(MonotoneClass.NON_MONOTONE, tuple(bad))
        return Monotonicity(
            MonotoneClass.DECREASING if falling else MonotoneClass.INCREASING)

    ys = f.ys()
    diffs = [ys[k + 1] - ys[k] for k in range(len(ys) - 1)]
    rising = any(dv > 0 for dv in diffs)
    falling = any(dv < 0 for dv in diffs)
    if rising and falling:
        net = ys[-1] - ys[0]
        dominant = net if net != 0 else next(dv for dv in diffs if dv != 0)
        offending = tuple(k + 1 for k, dv in enumerate(diffs)
                          if dv != 0 and (dv > 0) != (dominant > 0))
        return Monotonicity(MonotoneClass.NON_MONOTONE, offending)
    if falling:
        return Monotonicity(MonotoneClass.DECREASING)
    return Monotonicity(MonotoneClass.INCREASING)


def propagate_interval(f: TableFunction, lo: float, hi: float) -> Interval:
    """Image bounds of [lo, hi] under the function.

    Exact for step_after and linear (breakpoints plus endpoints plus one
    probe inside each plateau) and for monotone_cubic (monotone between
    knots, so extremes sit at knots or interval endpoints). Cardinal bounds
    come from the dense grid and are flagged approximate.
    """
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    dlo, dhi = f.domain()
    if f.extrapolation is Extrapolation.REJECT and (lo < dlo or hi > dhi):
        raise DomainViolation(
            f"interval [{lo}, {hi}] outside table domain [{dlo}, {dhi}]")

    if f.interpolation is Interpolation.CARDINAL:
        grid = _dense_grid(f, lo, hi)
        values = [evaluate(f, float(g)) for g in grid]
        return Interval(min(values), max(values), exact=False)

    candidates = [lo, hi]
    candidates.extend(x for x in f.xs() if lo < x < hi)
    if f.interpolation is Interpolation.STEP_AFTER:
        # plateau values are attained strictly between breakpoints
        marks = sorted(set(candidates))
        candidates.extend((a + b) / 2.0 for a, b in zip(marks, marks[1:]))
    values = [evaluate(f, x) for x in candidates]
    return Interval(min(values), max(values), exact=True)
