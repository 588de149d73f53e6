"""Near-identity map whose only fixed point avoids the hull of an orbit.

``f_n`` rotates the unit disk rigidly by ``2 pi / n`` and tapers to the
identity outside radius 2, so the origin is its only fixed point in the unit
disk and any orbit there is a regular ``n``-gon. Conjugating by a flow that
drags the origin to a point ``q`` on the same circle, along a thin tube that
misses the orbit, moves the fixed point to ``q`` without touching the orbit.
Since ``q`` lies on the circle through the orbit but not on the orbit, it is
outside the orbit's hull. Without commuting partners, hull localization fails.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from planarfix import kernels
from planarfix.dynamics.maps import bump_rotation, conjugate, tube_flow
from planarfix.dynamics.orbits import Disk, orbit_array
from planarfix.errors import GeometryConstraintViolated
from planarfix.geometry import as_point, convex_hull, hull_signed_distance

TUBE_REACH = 1.5  # tube support stays within this many widths of the axis
RADIUS_TOL = 1e-9


@dataclass
class CounterexampleReport:
    n: int
    p: tuple
    q: tuple
    support_radius: float
    orbit: list
    orbit_deviation: float
    fixed_grid_points: list
    grid_step: float
    hull_vertices: list
    hull_margin: float
    c0_distances: dict
    checks: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(self.checks.values())

    def to_dict(self):
        return {
            "n": self.n,
            "p": list(self.p),
            "q": list(self.q),
            "support_radius": self.support_radius,
            "orbit": [list(v) for v in self.orbit],
            "orbit_deviation": self.orbit_deviation,
            "fixed_grid_points": [list(v) for v in self.fixed_grid_points],
            "grid_step": self.grid_step,
            "hull_vertices": [list(v) for v in self.hull_vertices],
            "hull_margin": self.hull_margin,
            "c0_distances": {str(k): v for k, v in sorted(self.c0_distances.items())},
            "checks": dict(self.checks),
            "passed": self.passed,
        }


def c0_distance(n, radius=2.0, samples=4001):
    """Sup of ``|f_n(x) - x|`` over the disk of the given radius.

    The map is rotation invariant, so a radial sweep is exact up to the
    sampling of the radius.
    """
    f = bump_rotation(n)
    r = np.linspace(0.0, radius, samples)
    pts = np.column_stack([r, np.zeros_like(r)])
    return float(np.hypot(*(f(pts) - pts).T).max())


def _segment_distance(points, end):
    seg = np.array([[0.0, 0.0], end], dtype=float)
    return float(kernels.min_distance(seg, np.asarray(points, dtype=float)).min())


def counterexample_family(n, p, q, support_radius=None, grid_step=1e-2, tol=1e-9,
                          trend=(2, 4)):
    """Build ``f_n`` and its conjugate with fixed point moved to ``q``.

    ``support_radius`` is the tube half-width; by default it is chosen as
    large as the orbit and the unit circle allow. The report records the
    four checks: equal orbits, a unique fixed grid point, ``q`` outside the
    orbit hull, and a C0 distance that shrinks for the multiples ``trend``
    of ``n``.
    """
    n = int(n)
    if n < 2:
        raise GeometryConstraintViolated("n must be at least 2")
    p0 = np.asarray(tuple(as_point(p)), dtype=float)
    q0 = np.asarray(tuple(as_point(q)), dtype=float)
    rp, rq = float(np.hypot(*p0)), float(np.hypot(*q0))
    if not 0.0 < rp < 1.0:
        raise GeometryConstraintViolated(f"|p| = {rp:.6g} must lie in (0, 1)")
    if abs(rp - rq) > RADIUS_TOL:
        raise GeometryConstraintViolated(f"|p| = {rp:.12g} and |q| = {rq:.12g} differ")
    f = bump_rotation(n)
    orb = orbit_array(f, p0, n)
    if float(np.hypot(*(orb - q0).T).min()) <= tol:
        raise GeometryConstraintViolated("q lies on the orbit of p")
    gap = _segment_distance(orb, q0)
    room = 1.0 - rq
    if support_radius is None:
        support_radius = 0.9 * min(gap, room) / TUBE_REACH
    w = float(support_radius)
    if not w > 0:
        raise GeometryConstraintViolated("support radius must be positive")
    if gap <= TUBE_REACH * w:
        raise GeometryConstraintViolated(
            f"tube of half-width {w:.4g} meets the orbit (clearance {gap:.4g})")
    if rq + TUBE_REACH * w >= 1.0:
        raise GeometryConstraintViolated("tube leaves the unit disk")

    psi = tube_flow(q0, w)
    g = conjugate(f, psi)

    # (a) orbits agree
    g_orb = orbit_array(g, p0, 2 * n)
    f_orb = orbit_array(f, p0, 2 * n)
    deviation = float(np.hypot(*(g_orb - f_orb).T).max())

    # (b) q is the only fixed grid point of the conjugate on the unit disk
    grid = np.vstack([Disk((0.0, 0.0), 1.0).grid(grid_step), q0[None, :]])
    disp = np.hypot(*(g(grid) - grid).T)
    hits = grid[disp < tol]
    unique = len(hits) > 0 and bool(np.all(np.hypot(*(hits - q0).T) <= tol))
    fixed = sorted({(float(x), float(y)) for x, y in hits})

    # (c) q is strictly outside the hull of the conjugate orbit
    hull = convex_hull(g_orb[:n])
    margin = -hull_signed_distance(hull, q0)

    # (d) C0 distance to the identity on the disk of radius 2
    ns = [n] + [n * m for m in trend]
    c0 = {k: c0_distance(k) for k in ns}
    vals = [c0[k] for k in ns]
    shrinking = all(b < a for a, b in zip(vals, vals[1:]))

    checks = {
        "orbits_agree": deviation <= tol,
        "unique_fixed_point": unique,
        "outside_hull": margin > 0,
        "c0_shrinks": shrinking,
    }
    report = CounterexampleReport(
        n, (float(p0[0]), float(p0[1])), (float(q0[0]), float(q0[1])), w,
        [(float(x), float(y)) for x, y in orb], deviation, fixed, float(grid_step),
        [(float(x), float(y)) for x, y in hull.coords], float(margin), c0, checks)
    return f, g, report


def default_points(n, radius=0.5):
    """A seed on the positive axis and a target halfway between two orbit points."""
    p = (radius, 0.0)
    a = math.pi / n
    return p, (radius * math.cos(a), radius * math.sin(a))
