import math

import numpy as np
import pytest

from planarfix.dynamics.maps import bump_rotation, fold_shear, identity, rotation, translation
from planarfix.dynamics.orbits import (
    UNIT_BOX,
    Box,
    Disk,
    check_B1,
    check_B2,
    check_segment_estimate,
    estimate_c1_distance,
    orbit,
    orbit_curve,
    record_returns,
    return_times,
)
from planarfix.errors import FixedSeed, NonFiniteIterate
from planarfix.dynamics.maps import DiffeoMap, affine
from planarfix.geometry import Point2
from planarfix.winding import winding_number

PENTA = 2 * math.pi / 5


class TestOrbit:
    def test_pentagon_returns(self):
        pts = orbit(rotation(PENTA), (1, 0), 5)
        assert pts[-1].x == pytest.approx(1.0) and pts[-1].y == pytest.approx(0.0, abs=1e-15)
        assert pts[0].as_tuple() == pytest.approx((math.cos(PENTA), math.sin(PENTA)))

    def test_identity(self):
        assert orbit(identity(), (2, 3), 3) == [Point2(2, 3)] * 3

    def test_translation(self):
        assert [p.as_tuple() for p in orbit(translation((1, 0)), (0, 0), 3)] == [(1, 0), (2, 0), (3, 0)]

    def test_non_finite(self):
        blow = DiffeoMap(lambda x: x * 1e200, label="blow")
        with np.errstate(over="ignore"), pytest.raises(NonFiniteIterate):
            orbit(blow, (1, 1), 5)


class TestOrbitCurve:
    def test_pentagon(self):
        oc = orbit_curve(rotation(PENTA), (1, 0), 5)
        assert winding_number(oc.curve, (0, 0)).value == 1

    def test_pentagram(self):
        oc = orbit_curve(rotation(2 * PENTA), (1, 0), 5)
        assert winding_number(oc.curve, (0, 0)).value == 2

    def test_fixed_seed(self):
        with pytest.raises(FixedSeed):
            orbit_curve(identity(), (1, 0), 5)

    def test_closing_segment(self):
        oc = orbit_curve(rotation(0.3), (1, 0), 4)
        assert oc.curve.vertices[0].as_tuple() == pytest.approx((math.cos(0.3), math.sin(0.3)))
        assert len(oc.curve.segments()) == 4


class TestReturns:
    def test_periodic(self):
        assert return_times(rotation(PENTA), (1, 0), 1e-9, 20) == [5, 10, 15, 20]

    def test_translation(self):
        assert return_times(translation((0.1, 0)), (0, 0), 1e-3, 100) == []

    def test_golden_rotation(self):
        golden = math.pi * (3 - math.sqrt(5))
        times = return_times(rotation(golden), (1, 0), 0.05, 500)
        # Fibonacci denominators: 89 * 0.381966... is 0.005 turns off an integer
        assert times[:2] == [89, 144]

    def test_record_returns(self):
        d = np.array([1.0, 0.4, 0.6, 0.3, 0.35, 0.1])
        assert record_returns(d, 0.5) == [2, 4, 6]

    def test_non_positive_tolerance(self):
        with pytest.raises(ValueError):
            return_times(rotation(0.1), (1, 0), 0.0, 10)


class TestC1:
    def test_identity_exact(self):
        est = estimate_c1_distance(identity(), UNIT_BOX)
        assert (est.sup_displacement, est.sup_derivative_deviation) == (0.0, 0.0)

    def test_rotation_closed_form(self):
        theta, r = 0.1, 1.0
        est = estimate_c1_distance(rotation(theta), Disk((0, 0), r), grid_step=0.05)
        assert est.sup_displacement == pytest.approx(2 * r * math.sin(theta / 2), rel=1e-9)
        assert est.sup_derivative_deviation == pytest.approx(2 * math.sin(theta / 2), rel=1e-9)

    def test_translation(self):
        est = estimate_c1_distance(translation((0.01, 0)), UNIT_BOX)
        assert est.sup_displacement == pytest.approx(0.01)
        assert est.sup_derivative_deviation == pytest.approx(0.0, abs=1e-12)

    def test_refinement_does_not_decrease(self):
        f = bump_rotation(20)
        box = Box(-2, -2, 2, 2)
        coarse = estimate_c1_distance(f, box, 0.2)
        fine = estimate_c1_distance(f, box, 0.1)
        assert fine.sup_derivative_deviation >= coarse.sup_derivative_deviation - 1e-12

    def test_bad_step(self):
        with pytest.raises(ValueError):
            estimate_c1_distance(identity(), UNIT_BOX, 0.0)


class TestB1:
    def test_small_rotation_passes(self):
        assert check_B1(rotation(0.05), (1, 0)).passed

    def test_translation_passes(self):
        assert check_B1(translation((0.1, 0.0)), (0, 0)).passed

    def test_bump_violation_has_witness(self):
        res = check_B1(bump_rotation(8), (0.3, 0.0))
        assert not res.passed
        assert np.hypot(*res.witness) < 1e-6


class TestB2:
    def test_fine_polygon(self):
        res = check_B2(rotation(2 * math.pi / 100), (1, 0), 100)
        assert res.passed and res.value == pytest.approx(2 * math.pi / 100)

    def test_triangle_fails(self):
        res = check_B2(rotation(2 * math.pi / 3), (1, 0), 3)
        assert not res.passed and res.value == pytest.approx(2 * math.pi / 3)

    def test_translation_vacuous(self):
        assert check_B2(translation((0.1, 0)), (0, 0), 50).passed


class TestSegmentEstimate:
    def test_identity(self):
        res = check_segment_estimate(identity(), UNIT_BOX, K=1.01, pairs=2000)
        assert res.passed and res.value == pytest.approx(1.0)

    def test_near_identity_affine(self):
        f = affine([[1.02, 0.01], [-0.01, 0.98]], (0.1, 0))
        assert check_segment_estimate(f, UNIT_BOX, K=3, pairs=5000).passed

    def test_shear_violation(self):
        res = check_segment_estimate(fold_shear(), Box(-2, -2, 2, 2), K=3, pairs=10000,
                                     max_length=2.5)
        assert not res.passed and res.value > 3
        assert res.witness is not None

    def test_k_must_exceed_one(self):
        with pytest.raises(ValueError):
            check_segment_estimate(identity(), UNIT_BOX, K=1.0)
