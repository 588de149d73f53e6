import math

import numpy as np
import pytest

from planarfix.dynamics.degree import displacement_degree, fixed_point_in_disk, search_fixed_point
from planarfix.dynamics.maps import affine, bump_rotation, rotation, scaling, translation
from planarfix.errors import BoundaryFixedPoint, ZeroDegree
from planarfix.geometry import build_closed_curve

UNIT_SQUARE = np.array([[-1, -1], [1, -1], [1, 1], [-1, 1]], dtype=float)


def circle(c, r, n=40):
    t = 2 * math.pi * np.arange(n) / n
    return np.asarray(c) + r * np.column_stack([np.cos(t), np.sin(t)])


class TestDegree:
    def test_contraction(self):
        assert displacement_degree(scaling(0.5), UNIT_SQUARE)[0] == 1

    def test_saddle(self):
        assert displacement_degree(affine([[2, 0], [0, 0.5]]), UNIT_SQUARE)[0] == -1

    def test_translation(self):
        assert displacement_degree(translation((0.3, 0.1)), UNIT_SQUARE)[0] == 0

    def test_fixed_point_on_loop(self):
        with pytest.raises(BoundaryFixedPoint):
            displacement_degree(rotation(0.3, (1, 0)), UNIT_SQUARE)


class TestFixedPoint:
    def test_half_map(self):
        res = fixed_point_in_disk(scaling(0.5), UNIT_SQUARE, tol=1e-9)
        assert np.hypot(*res.point.as_tuple()) < 1e-9
        assert res.degree == 1 and res.inside

    @pytest.mark.parametrize("c, loop", [
        ((0.3, 0.2), UNIT_SQUARE),
        ((0.3, 0.2), circle((0.5, 0.5), 0.6)),
        ((-0.7, 0.4), circle((-0.5, 0.5), 0.3, 7)),
    ])
    def test_rotation_centre(self, c, loop):
        res = fixed_point_in_disk(rotation(0.2, c), loop, tol=1e-9)
        assert np.hypot(*(np.array(res.point.as_tuple()) - c)) < 1e-9
        assert res.residual < 1e-9

    def test_accepts_simple_loop_objects(self, triangle):
        res = fixed_point_in_disk(rotation(0.1, (0, 0.5)), triangle)
        assert res.point.as_tuple() == pytest.approx((0, 0.5), abs=1e-9)

    def test_translation_zero_degree(self):
        with pytest.raises(ZeroDegree):
            fixed_point_in_disk(translation((0.1, 0.0)), UNIT_SQUARE)

    def test_bump_rotation_origin(self):
        res = fixed_point_in_disk(bump_rotation(12), circle((0.1, 0), 0.5))
        assert np.hypot(*res.point.as_tuple()) < 1e-9

    def test_search_nonconvex_loop(self):
        # L-shaped loop around an off-centre fixed point
        loop = np.array([[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]], dtype=float)
        res = search_fixed_point(rotation(0.4, (0.5, 1.5)), loop, tol=1e-9)
        assert res.point.as_tuple() == pytest.approx((0.5, 1.5), abs=1e-9)
