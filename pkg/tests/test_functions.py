"""Table-function unit tests: knot exactness, interpolation methods against
independent oracles, extrapolation policies, monotonicity, and interval
propagation."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from goalgraph.errors import DomainViolation
from goalgraph.functions import (
    Extrapolation,
    Interpolation,
    MonotoneClass,
    evaluate,
    monotonicity,
    propagate_interval,
    table,
)

from oracles import fc_eval, table_eval, table_interval

STEP_FIXTURE = table([(0, 0), (10, 1), (33, 2), (50, 3)],
                     interpolation="step_after", extrapolation="clamp")
LINEAR_SIMPLE = table([(0, 0), (10, 5)])


def monotone_points(rng, n=None):
    n = n or rng.randint(2, 6)
    xs = sorted(rng.sample(range(-50, 120), n))
    y = rng.uniform(-5, 5)
    pts = []
    for _ in range(n):
        pts.append((None, round(y, 4)))
        y += rng.uniform(0, 7) * rng.choice([1, 1, 1, 0])  # allow flats
    return [(x, py) for x, (_, py) in zip(xs, pts)]


class TestStepAfter:
    def test_knot_anchor(self):
        assert evaluate(STEP_FIXTURE, 33) == 2

    def test_clamp_both_sides(self):
        assert evaluate(STEP_FIXTURE, -5) == 0
        assert evaluate(STEP_FIXTURE, 1000) == 3

    def test_right_continuity(self):
        assert evaluate(STEP_FIXTURE, 10) == 1
        assert evaluate(STEP_FIXTURE, 10 - 1e-9) == 0
        assert evaluate(STEP_FIXTURE, 33 - 1e-9) == 1

    def test_plateaus(self):
        assert evaluate(STEP_FIXTURE, 5) == 0
        assert evaluate(STEP_FIXTURE, 20) == 1
        assert evaluate(STEP_FIXTURE, 49.999) == 2
        assert evaluate(STEP_FIXTURE, 50) == 3


class TestLinear:
    def test_simple(self):
        assert evaluate(LINEAR_SIMPLE, 4) == pytest.approx(2, abs=1e-12)

    def test_extend_slope(self):
        f = table([(0, 0), (10, 5)], extrapolation="extend_slope")
        assert evaluate(f, 12) == pytest.approx(6, abs=1e-12)
        assert evaluate(f, -2) == pytest.approx(-1, abs=1e-12)

    def test_reject(self):
        f = table([(0, 0), (10, 5)], extrapolation="reject")
        with pytest.raises(DomainViolation):
            evaluate(f, 10.5)
        with pytest.raises(DomainViolation):
            evaluate(f, -0.1)
        assert evaluate(f, 10) == 5  # boundary is inside


class TestKnotExactness:
    def test_every_method_hits_knots(self):
        rng = random.Random(7)
        for case in range(300):
            pts = monotone_points(rng)
            for method in Interpolation:
                f = table(pts, interpolation=method)
                for x, y in pts:
                    assert evaluate(f, float(x)) == pytest.approx(float(y), abs=1e-9), \
                        (method, pts, x)


class TestMonotoneCubic:
    def test_matches_independent_oracle(self):
        rng = random.Random(11)
        for case in range(300):
            pts = monotone_points(rng)
            f = table(pts, interpolation="monotone_cubic")
            lo, hi = float(pts[0][0]), float(pts[-1][0])
            for k in range(25):
                x = lo + (hi - lo) * k / 24
                assert evaluate(f, x) == pytest.approx(fc_eval(pts, x), abs=1e-9), \
                    (pts, x)

    def test_no_overshoot_within_segment_envelopes(self):
        rng = random.Random(13)
        for case in range(300):
            pts = monotone_points(rng)
            f = table(pts, interpolation="monotone_cubic")
            xs = [float(p[0]) for p in pts]
            ys = [float(p[1]) for p in pts]
            for i in range(len(pts) - 1):
                lo, hi = sorted((ys[i], ys[i + 1]))
                for k in range(40):
                    x = xs[i] + (xs[i + 1] - xs[i]) * k / 39
                    v = evaluate(f, x)
                    assert lo - 1e-9 <= v <= hi + 1e-9, (pts, i, x, v)

    def test_hump_data_stays_defined(self):
        f = table([(0, 0), (4, 10), (8, 3)], interpolation="monotone_cubic")
        assert evaluate(f, 4) == 10
        assert evaluate(f, 2) <= 10 + 1e-9


class TestCardinal:
    def test_interpolates_and_varies_with_tension(self):
        pts = [(0, 0), (1, 1), (2, 8), (3, 9)]
        soft = table(pts, interpolation="cardinal", tension="1")
        mid = table(pts, interpolation="cardinal", tension="0.5")
        for x, y in pts:
            assert evaluate(soft, float(x)) == pytest.approx(float(y), abs=1e-12)
            assert evaluate(mid, float(x)) == pytest.approx(float(y), abs=1e-12)
        # probe off-center: the segment midpoint is tension-invariant here
        assert evaluate(soft, 1.25) != evaluate(mid, 1.25)

    def test_monotonicity_by_sampling_catches_overshoot(self):
        # Catmull-Rom (tension 0) overshoots on step-like data
        f = table([(0, 0), (1, 0), (2, 1), (3, 1)],
                  interpolation="cardinal", tension="0")
        assert monotonicity(f).direction is MonotoneClass.NON_MONOTONE


class TestMonotonicity:
    def test_increasing(self):
        assert monotonicity(STEP_FIXTURE).direction is MonotoneClass.INCREASING

    def test_descent_flags_segment(self):
        shape = monotonicity(table([(0, 0), (5, 4), (10, 1)]))
        assert shape.direction is MonotoneClass.NON_MONOTONE
        assert shape.offending_segments == (2,)

    def test_hump(self):
        shape = monotonicity(table([(0, 0), (0.4, 12), (0.7, 15), (1, 9)]))
        assert shape.direction is MonotoneClass.NON_MONOTONE

    def test_decreasing(self):
        assert monotonicity(table([(0, 9), (5, 3), (9, 1)])).direction \
            is MonotoneClass.DECREASING

    def test_flat_counts_as_increasing(self):
        assert monotonicity(table([(0, 1), (5, 1)])).direction \
            is MonotoneClass.INCREASING


class TestPropagateInterval:
    def test_step_breakpoints(self):
        bound = propagate_interval(STEP_FIXTURE, 10, 33)
        assert (bound.lo, bound.hi) == (1, 2)
        assert bound.exact

    def test_degenerate(self):
        for f in (STEP_FIXTURE, LINEAR_SIMPLE):
            for x in (0, 7.3, 33):
                bound = propagate_interval(f, x, x)
                assert bound.lo == bound.hi == evaluate(f, x)

    def test_linear_endpoints(self):
        bound = propagate_interval(LINEAR_SIMPLE, 0, 10)
        assert (bound.lo, bound.hi) == (0, 5)

    def test_exactness_against_brute_force(self):
        rng = random.Random(17)
        for case in range(150):
            pts = monotone_points(rng)
            method = rng.choice(["step_after", "linear"])
            extrap = rng.choice(["clamp", "extend_slope"])
            f = table(pts, interpolation=method, extrapolation=extrap)
            dlo, dhi = f.domain()
            a = rng.uniform(dlo - 10, dhi + 10)
            b = rng.uniform(a, dhi + 10)
            bound = propagate_interval(f, a, b)
            ref_lo, ref_hi = table_interval(f, a, b)
            assert bound.lo <= ref_lo + 1e-9, (pts, method, a, b)
            assert bound.hi >= ref_hi - 1e-9
            # and tight: brute force grid comes within a knot value
            assert bound.lo == pytest.approx(ref_lo, abs=1e-6)
            assert bound.hi == pytest.approx(ref_hi, abs=1e-6)

    def test_reject_policy(self):
        f = table([(0, 0), (10, 5)], extrapolation="reject")
        with pytest.raises(DomainViolation):
            propagate_interval(f, -1, 5)

    def test_cardinal_flagged_approximate(self):
        f = table([(0, 0), (1, 0), (2, 1), (3, 1)],
                  interpolation="cardinal", tension="0")
        bound = propagate_interval(f, 0, 3)
        assert not bound.exact
        assert bound.lo < 0 or bound.hi > 1  # the overshoot is visible


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=-100, max_value=200, allow_nan=False))
def test_clamp_always_lands_on_endpoint_values_outside_domain(x):
    f = STEP_FIXTURE
    lo, hi = f.domain()
    v = evaluate(f, x)
    if x < lo:
        assert v == f.ys()[0]
    elif x > hi:
        assert v == f.ys()[-1]
    else:
        assert min(f.ys()) - 1e-9 <= v <= max(f.ys()) + 1e-9


def test_scan_oracle_agrees_on_step_and_linear():
    rng = random.Random(23)
    for case in range(200):
        pts = monotone_points(rng)
        method = rng.choice(["step_after", "linear"])
        extrap = rng.choice(["clamp", "extend_slope"])
        f = table(pts, interpolation=method, extrapolation=extrap)
        dlo, dhi = f.domain()
        for k in range(20):
            x = rng.uniform(dlo - 5, dhi + 5)
            assert evaluate(f, x) == pytest.approx(table_eval(f, x), abs=1e-9)
