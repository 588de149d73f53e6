import numpy as np
import pytest

from planarfix.errors import AngleHypothesisViolated, NestingViolated, NonTermination
from planarfix.geometry import Point2, build_closed_curve, subdivide_at_intersections
from planarfix.untangle import (
    DecomposeConfig,
    SimpleLoop,
    build_vertex_star,
    decompose,
    nested_disk_chains,
    representative_point,
    resolve_vertex,
    select_kappa,
    signed_area,
    verify_decomposition,
)
from planarfix.winding import winding_number

from conftest import EXAMPLE_B, TRIANGLE

A = {f"a{i + 1}": p for i, p in enumerate(EXAMPLE_B)}
B1 = (0.0, 0.0)
B2 = (2.812977, 1.647061)
B3 = (1.0, 1.73)


def rounded(curve, digits=6):
    return [tuple(round(c, digits) + 0.0 for c in v.as_tuple()) for v in curve.vertices]


def cyclic_equal(a, b):
    if len(a) != len(b):
        return False
    return any(a[k:] + a[:k] == b for k in range(len(a)))


def strip_pass_through(pts):
    """Drop vertices where the polygon runs straight on."""
    out = list(pts)
    changed = True
    while changed:
        changed = False
        for i in range(len(out)):
            a, b, c = np.array(out[i - 1]), np.array(out[i]), np.array(out[(i + 1) % len(out)])
            u, v = b - a, c - b
            if abs(u[0] * v[1] - u[1] * v[0]) < 1e-9 * np.hypot(*u) * np.hypot(*v) and u @ v > 0:
                del out[i]
                changed = True
                break
    return out


def loop_of(points, orientation="CCW"):
    curve = build_closed_curve(points)
    return SimpleLoop(curve, orientation, tuple(range(len(points))))


def names(*keys):
    lookup = {"b1": B1, "b2": B2, "b3": B3}
    return [tuple(round(c, 6) + 0.0 for c in (A[k] if k in A else lookup[k])) for k in keys]


class TestVertexStar:
    def x_crossing(self):
        return build_closed_curve([(-1, -1), (0, 0), (1, 1), (2, 0), (1, -1), (0, 0), (-1, 1), (-2, 0)])

    def test_x_crossing_ordering(self):
        star = build_vertex_star(self.x_crossing(), Point2(0, 0))
        assert star.k == 2
        assert [s.start.as_tuple() for s in star.incoming] == [(1, -1), (-1, -1)]
        assert [s.end.as_tuple() for s in star.outgoing] == [(1, 1), (-1, 1)]
        (bx, by), (rx, ry) = star.separating_line
        assert (bx, by) == (0, 0)
        assert ry == pytest.approx(0.0, abs=1e-15) and rx > 0

    def test_x_crossing_resolution_pairs_ranks(self):
        curve = self.x_crossing()
        out = resolve_vertex(curve, build_vertex_star(curve, Point2(0, 0)))
        got = sorted(rounded(c) for c in out)
        assert cyclic_equal(got[0], [(-1, -1), (0, 0), (-1, 1), (-2, 0)])
        assert cyclic_equal(got[1], [(1, 1), (2, 0), (1, -1), (0, 0)])

    def test_single_pass_star(self, triangle):
        star = build_vertex_star(triangle, Point2(1, 0))
        assert star.k == 1
        out = resolve_vertex(triangle, star)
        assert len(out) == 1 and out[0].vertices == triangle.vertices

    def test_example_b_crossing(self, example_b):
        sub = subdivide_at_intersections(example_b)
        star = build_vertex_star(sub, Point2(*B1))
        assert star.k == 2

    def test_example_b_resolved_at_first_crossing(self, example_b):
        sub = subdivide_at_intersections(example_b)
        out = resolve_vertex(sub, build_vertex_star(sub, Point2(*B1)))
        got = [[tuple(round(c, 6) + 0.0 for c in p)
                for p in strip_pass_through([v.as_tuple() for v in curve.vertices])]
               for curve in out]
        want = [names("a6", "b1", "a10", "a1", "a2", "a3", "a4", "a5"),
                names("a9", "b1", "a7", "a8")]
        assert len(got) == 2
        for w in want:
            assert any(cyclic_equal(g, w) for g in got)

    def test_bowtie_splits_into_triangles(self, bowtie):
        sub = subdivide_at_intersections(bowtie)
        out = resolve_vertex(sub, build_vertex_star(sub, Point2(1, 1)))
        got = sorted(rounded(c) for c in out)
        assert cyclic_equal(got[0], [(0, 0), (1, 1), (0, 2)])
        assert cyclic_equal(got[1], [(1, 1), (2, 2), (2, 0)])


class TestDecompose:
    def test_triangle_twice(self, triangle_twice):
        rep = decompose(triangle_twice)
        assert len(rep.loops) == 2
        for lp in rep.loops:
            assert cyclic_equal(rounded(lp.curve), TRIANGLE)
            assert lp.orientation == "CCW"
        assert sorted(lp.parent_segment_map for lp in rep.loops) == [(0, 1, 2), (3, 4, 5)]
        assert rep.kappa in (0, 1)
        assert all(c.passed for c in rep.properties.values())

    def test_square_is_its_own_loop(self, square):
        rep = decompose(square)
        assert len(rep.loops) == 1 and rep.kappa == 0
        assert rep.loops[0].curve.vertices == square.vertices

    def test_example_b(self, example_b):
        rep = decompose(example_b)
        got = [rounded(lp.curve) for lp in rep.loops]
        want = [names("a6", "b1", "a10", "a1", "a2", "a3", "b2", "a9", "b3", "a5"),
                names("b1", "a7", "a8", "b2", "a4", "b3")]
        assert len(got) == 2
        for w in want:
            assert any(cyclic_equal(g, w) for g in got)
        assert sorted(lp.orientation for lp in rep.loops) == ["CCW", "CW"]
        assert rep.properties["additivity"].checked == 200
        assert all(c.passed for c in rep.properties.values())

    def test_bowtie_rejected(self, bowtie):
        with pytest.raises(AngleHypothesisViolated) as info:
            decompose(bowtie)
        assert len(info.value.violations) == 1

    def test_budget_exhaustion(self, example_b):
        with pytest.raises(NonTermination):
            decompose(example_b, DecomposeConfig(budget=1))

    def test_reversal(self, example_b):
        fwd = decompose(example_b)
        back = decompose(example_b.reversed())
        flip = {"CCW": "CW", "CW": "CCW"}
        supports_f = sorted((sorted(rounded(lp.curve)), lp.orientation) for lp in fwd.loops)
        supports_b = sorted((sorted(rounded(lp.curve)), flip[lp.orientation]) for lp in back.loops)
        assert supports_f == supports_b

    def test_report_json_shape(self, triangle_twice):
        data = decompose(triangle_twice).to_dict()
        assert set(data) >= {"loops", "kappa", "nesting_relation", "properties",
                             "multiplicity_checks", "index_additivity_samples"}
        assert data["loops"][0]["orientation"] == "CCW"

    def test_deterministic(self, example_b):
        assert decompose(example_b).to_dict() == decompose(example_b).to_dict()

    def test_multiplicity_three(self):
        curve = build_closed_curve([(0, 0), (1, 0), (0.5, 1), (0, 0), (1, 0), (0.5, 1.2),
                                    (0, 0), (1, 0), (0.5, 1.4)])
        rep = decompose(curve)
        assert len(rep.loops) == 3
        assert winding_number(curve, (0.5, 0.5)).value == 3


class TestVerify:
    def test_all_pass(self, triangle_twice):
        rep = decompose(triangle_twice)
        ver = verify_decomposition(triangle_twice, rep.loops, samples=200)
        assert ver.passed
        q = (0.0, 0.5)
        assert winding_number(triangle_twice, q).value == sum(
            winding_number(lp.curve, q).value for lp in rep.loops) == 2

    def test_missing_loop_fails(self, triangle_twice):
        rep = decompose(triangle_twice)
        ver = verify_decomposition(triangle_twice, rep.loops[:1], samples=200)
        assert {"multiplicity", "additivity"} <= set(ver.failed())

    def test_wrong_orientation_fails_containment(self, triangle_twice):
        rep = decompose(triangle_twice)
        bad = SimpleLoop(rep.loops[0].curve.reversed(), "CW", rep.loops[0].parent_segment_map)
        ver = verify_decomposition(triangle_twice, [bad, rep.loops[1]], samples=50)
        assert "containment" in ver.failed()

    def test_example_b(self, example_b):
        rep = decompose(example_b)
        assert verify_decomposition(example_b, rep.loops, samples=200, seed=5).passed


class TestChains:
    def test_disjoint(self):
        loops = [loop_of([(0, 0), (1, 0), (0, 1)]), loop_of([(3, 0), (4, 0), (3, 1)])]
        assert nested_disk_chains(loops) == [[0], [1]]

    def test_nested(self):
        loops = [loop_of([(-2, -2), (2, -2), (2, 2), (-2, 2)]), loop_of([(0, 0), (1, 0), (0, 1)])]
        assert nested_disk_chains(loops) == [[1, 0]]

    def test_nested_plus_disjoint(self):
        loops = [loop_of([(-2, -2), (2, -2), (2, 2), (-2, 2)]), loop_of([(0, 0), (1, 0), (0, 1)]),
                 loop_of([(5, 0), (6, 0), (5, 1)])]
        assert nested_disk_chains(loops) == [[1, 0], [2]]

    def test_crossing_loops_rejected(self):
        loops = [loop_of([(0, 0), (2, 0), (2, 2), (0, 2)]), loop_of([(1, 1), (3, 1), (3, 3), (1, 3)])]
        with pytest.raises(NestingViolated):
            nested_disk_chains(loops)


class TestKappa:
    def test_square(self, square):
        rep = decompose(square)
        assert select_kappa(square, rep.loops) == 0

    def test_cancelling_touch_rejected(self):
        # an inner clockwise loop touching the outer square at a corner would
        # leave no loop with nonzero interior index; the star check refuses it
        curve = build_closed_curve([(-2, -2), (2, -2), (2, 2), (-2, 2), (-2, -2),
                                    (-1.5, 1.5), (1.5, -1.5)])
        with pytest.raises(AngleHypothesisViolated) as info:
            decompose(curve)
        assert info.value.violations[0].kind == "star"

    def test_example_b_interior_samples(self, example_b):
        rep = decompose(example_b)
        lp = rep.loops[rep.kappa]
        rng = np.random.default_rng(11)
        from planarfix.untangle import interior_samples
        pts = interior_samples(lp.coords, 50, rng, 1e-9)
        assert len(pts) == 50
        for q in pts:
            assert winding_number(example_b, tuple(q)).value != 0


def test_signed_area_and_representative(triangle):
    assert signed_area(triangle.coords) == pytest.approx(2.0)
    rep = representative_point(triangle.coords, 1e-9)
    assert winding_number(triangle, tuple(rep)).value == 1
