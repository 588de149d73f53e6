"""Property-based checks with hypothesis."""
import math

import numpy as np
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from planarfix.errors import PlanarFixError, PointOnCurve
from planarfix.geometry import (
    OrientedSegment,
    Point2,
    angle_between,
    build_closed_curve,
    convex_hull,
    point_in_hull,
)
from planarfix.untangle import decompose
from planarfix.winding import winding_number, winding_number_oracle

coord = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
point = st.tuples(coord, coord)


@st.composite
def polygons(draw, min_size=3, max_size=12):
    pts = draw(st.lists(point, min_size=min_size, max_size=max_size))
    for a, b in zip(pts, pts[1:] + pts[:1]):
        assume(math.dist(a, b) > 1e-6)
    return build_closed_curve(pts)


@st.composite
def star_curves(draw):
    """Closed curves that wind around the origin a few times."""
    laps = draw(st.integers(1, 3))
    n = draw(st.integers(5, 12)) * laps
    jitter = draw(st.lists(st.floats(-0.15, 0.15), min_size=n, max_size=n))
    radii = draw(st.lists(st.floats(0.8, 1.2), min_size=n, max_size=n))
    t = [2 * math.pi * laps * (k + 0.5 * jitter[k]) / n for k in range(n)]
    return build_closed_curve([(r * math.cos(a), r * math.sin(a)) for r, a in zip(radii, t)])


@settings(max_examples=200, deadline=None)
@given(polygons(), point)
def test_winding_matches_oracle(curve, q):
    try:
        a = winding_number(curve, q).value
    except PointOnCurve:
        return
    assert winding_number_oracle(curve, q).value == a


@settings(max_examples=100, deadline=None)
@given(polygons(), point)
def test_reversal_negates(curve, q):
    try:
        a = winding_number(curve, q).value
    except PointOnCurve:
        return
    assert winding_number(curve.reversed(), q).value == -a


@settings(max_examples=100, deadline=None)
@given(polygons(), point)
def test_index_locally_constant(curve, q):
    try:
        res = winding_number(curve, q)
    except PointOnCurve:
        return
    shift = 0.4 * res.distance_to_curve
    assume(shift > 1e-6)
    assert winding_number(curve, (q[0] + shift, q[1] - shift * 0.5)).value == res.value


@settings(max_examples=100, deadline=None)
@given(polygons(), point)
def test_nonzero_index_inside_hull(curve, q):
    try:
        v = winding_number(curve, q).value
    except PointOnCurve:
        return
    if v != 0:
        assert point_in_hull(convex_hull(curve.vertices), q) != "outside"


@settings(max_examples=100, deadline=None)
@given(st.lists(point, min_size=1, max_size=40))
def test_hull_is_convex_and_contains_points(pts):
    hull = convex_hull([Point2(*p) for p in pts])
    c = hull.coords
    if not hull.degenerate:
        e = np.roll(c, -1, axis=0) - c
        f = np.roll(e, -1, axis=0)
        assert np.all(e[:, 0] * f[:, 1] - e[:, 1] * f[:, 0] > 0)
    for p in pts:
        assert point_in_hull(hull, p, 1e-7) != "outside"


@settings(max_examples=100, deadline=None)
@given(point, point, point, point)
def test_angle_symmetric_in_range(a, b, c, d):
    assume(math.dist(a, b) > 1e-6 and math.dist(c, d) > 1e-6)
    s1, s2 = OrientedSegment(Point2(*a), Point2(*b)), OrientedSegment(Point2(*c), Point2(*d))
    ang = angle_between(s1, s2)
    assert 0.0 <= ang <= math.pi
    assert ang == angle_between(s2, s1)


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(star_curves())
def test_decomposition_certifies(curve):
    try:
        rep = decompose(curve)
    except PlanarFixError as exc:
        # only the angle hypothesis may refuse a curve
        assert type(exc).__name__ == "AngleHypothesisViolated"
        return
    assert all(c.passed for c in rep.properties.values())
    total = sum(winding_number(lp.curve, (0.0, 0.0)).value for lp in rep.loops)
    assert total == winding_number(curve, (0.0, 0.0)).value
