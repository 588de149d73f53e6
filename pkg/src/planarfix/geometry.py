"""Plane geometry: points, oriented segments, closed polygonal curves.

All coincidence predicates share one absolute tolerance (``1e-9`` unless the
caller says otherwise). Besides the public types this module hosts the
arrangement machinery used by the untangling code: splitting a curve at every
crossing and pushing repeated passes over a segment apart into small detours.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from planarfix import kernels
from planarfix.errors import (
    ConsecutiveDuplicate,
    EmptyInput,
    NonFiniteCoordinate,
    OverlapPresent,
    SeparationTooLarge,
)

DEFAULT_TOLERANCE = 1e-9
RIGHT_ANGLE = 0.5 * math.pi
_ANGLE_SLACK = 1e-12


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        x, y = float(self.x) + 0.0, float(self.y) + 0.0  # also folds -0.0 into 0.0
        if not (math.isfinite(x) and math.isfinite(y)):
            raise NonFiniteCoordinate(f"non-finite coordinate ({x}, {y})")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __iter__(self):
        yield self.x
        yield self.y

    def as_tuple(self):
        return (self.x, self.y)

    def distance(self, other):
        other = as_point(other)
        return math.hypot(self.x - other.x, self.y - other.y)


def as_point(obj):
    """Coerce a ``Point2``, a pair or a length-2 array to ``Point2``."""
    if isinstance(obj, Point2):
        return obj
    x, y = obj
    return Point2(x, y)


@dataclass(frozen=True)
class OrientedSegment:
    start: Point2
    end: Point2
    tolerance: float = field(default=DEFAULT_TOLERANCE, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "start", as_point(self.start))
        object.__setattr__(self, "end", as_point(self.end))
        if self.start.distance(self.end) <= self.tolerance:
            raise ConsecutiveDuplicate(0)

    @property
    def direction(self):
        return np.array([self.end.x - self.start.x, self.end.y - self.start.y])

    @property
    def length(self):
        return self.start.distance(self.end)

    def point_at(self, t):
        return Point2(self.start.x + t * (self.end.x - self.start.x),
                      self.start.y + t * (self.end.y - self.start.y))


@dataclass(frozen=True)
class ClosedPolyCurve:
    """The closed oriented polygon through ``vertices`` in cyclic order."""

    vertices: Tuple[Point2, ...]
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        verts = tuple(as_point(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 2:
            raise EmptyInput("a closed curve needs at least two vertices")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        n = len(verts)
        for i in range(n):
            if verts[i].distance(verts[(i + 1) % n]) <= self.tolerance:
                raise ConsecutiveDuplicate(i)

    def __len__(self):
        return len(self.vertices)

    @cached_property
    def coords(self):
        arr = np.array([[v.x, v.y] for v in self.vertices], dtype=np.float64)
        arr.setflags(write=False)
        return arr

    def segment(self, i):
        n = len(self.vertices)
        return OrientedSegment(self.vertices[i % n], self.vertices[(i + 1) % n], self.tolerance)

    def segments(self):
        return [self.segment(i) for i in range(len(self.vertices))]

    def segment_array(self):
        """``(n, 4)`` rows ``x0, y0, x1, y1``."""
        return np.hstack([self.coords, np.roll(self.coords, -1, axis=0)])

    def reversed(self):
        return ClosedPolyCurve(tuple(reversed(self.vertices)), self.tolerance)

    def to_dict(self):
        return {"vertices": [[v.x, v.y] for v in self.vertices], "tolerance": self.tolerance}


def build_closed_curve(vertices, tolerance=DEFAULT_TOLERANCE):
    """Validate ``vertices`` and return the closed polygon through them."""
    pts = [as_point(v) for v in vertices]
    return ClosedPolyCurve(tuple(pts), float(tolerance))


@dataclass(frozen=True)
class IntersectionResult:
    kind: str  # "none" | "point" | "overlap"
    at: Optional[Point2] = None
    overlap: Optional[OrientedSegment] = None
    parameters: tuple = ()
    same_direction: Optional[bool] = None


# -- scalar predicates --------------------------------------------------------

def _project(px, py, ax, ay, bx, by):
    dx, dy = bx - ax, by - ay
    dd = dx * dx + dy * dy
    t = ((px - ax) * dx + (py - ay) * dy) / dd
    tc = min(1.0, max(0.0, t))
    return math.hypot(px - ax - tc * dx, py - ay - tc * dy), t


def _snap(px, py, ends, tol):
    for ex, ey in ends:
        if math.hypot(px - ex, py - ey) <= tol:
            return ex, ey
    return px, py


def _raw_intersection(a1, b1, a2, b2, tol):
    """Classify two segments given as coordinate pairs.

    Returns ``("none",)``, ``("point", (x, y), t1, t2)`` or
    ``("overlap", (x0, y0), (x1, y1), (t1lo, t1hi), (t2lo, t2hi), same_dir)``.
    The overlap is reported with the orientation of the first segment.
    """
    ax1, ay1 = a1
    bx1, by1 = b1
    ax2, ay2 = a2
    bx2, by2 = b2
    d1x, d1y = bx1 - ax1, by1 - ay1
    d2x, d2y = bx2 - ax2, by2 - ay2
    len1 = math.hypot(d1x, d1y)
    len2 = math.hypot(d2x, d2y)
    ends = (a1, b1, a2, b2)
    wx, wy = ax2 - ax1, ay2 - ay1
    ha = abs(d1x * wy - d1y * wx) / len1
    hb = abs(d1x * (by2 - ay1) - d1y * (bx2 - ax1)) / len1
    if ha <= tol and hb <= tol:
        l2 = len1 * len1
        ta = (wx * d1x + wy * d1y) / l2
        tb = ((bx2 - ax1) * d1x + (by2 - ay1) * d1y) / l2
        lo, hi = max(0.0, min(ta, tb)), min(1.0, max(ta, tb))
        if (hi - lo) * len1 > tol:
            p0 = _snap(ax1 + lo * d1x, ay1 + lo * d1y, ends, tol)
            p1 = _snap(ax1 + hi * d1x, ay1 + hi * d1y, ends, tol)
            s0 = _project(p0[0], p0[1], ax2, ay2, bx2, by2)[1]
            s1 = _project(p1[0], p1[1], ax2, ay2, bx2, by2)[1]
            same = d1x * d2x + d1y * d2y > 0
            return ("overlap", p0, p1, (lo, hi), (s0, s1), same)
        if (hi - lo) * len1 < -tol:
            return ("none",)
    else:
        den = d1x * d2y - d1y * d2x
        if den != 0.0:
            t = (wx * d2y - wy * d2x) / den
            s = (wx * d1y - wy * d1x) / den
            et, es = tol / len1, tol / len2
            if -et <= t <= 1.0 + et and -es <= s <= 1.0 + es:
                t = min(1.0, max(0.0, t))
                px, py = _snap(ax1 + t * d1x, ay1 + t * d1y, ends, tol)
                t1 = _project(px, py, ax1, ay1, bx1, by1)[1]
                t2 = _project(px, py, ax2, ay2, bx2, by2)[1]
                return ("point", (px, py), t1, t2)
    # near misses at endpoints (T-junctions, touching tips)
    for p, (sa, sb) in ((a1, (a2, b2)), (b1, (a2, b2)), (a2, (a1, b1)), (b2, (a1, b1))):
        dist, _ = _project(p[0], p[1], sa[0], sa[1], sb[0], sb[1])
        if dist <= tol:
            t1 = _project(p[0], p[1], ax1, ay1, bx1, by1)[1]
            t2 = _project(p[0], p[1], ax2, ay2, bx2, by2)[1]
            return ("point", p, t1, t2)
    return ("none",)


def segment_intersection(s1, s2, tolerance=DEFAULT_TOLERANCE):
    """Classify the intersection of two oriented segments."""
    res = _raw_intersection(tuple(s1.start), tuple(s1.end), tuple(s2.start), tuple(s2.end), tolerance)
    if res[0] == "none":
        return IntersectionResult("none")
    if res[0] == "point":
        return IntersectionResult("point", at=Point2(*res[1]), parameters=(res[2], res[3]))
    _, p0, p1, t1, t2, same = res
    ov = OrientedSegment(Point2(*p0), Point2(*p1), tolerance)
    return IntersectionResult("overlap", overlap=ov, parameters=(t1, t2), same_direction=same)


def _vector_angle(u, v):
    return math.atan2(abs(u[0] * v[1] - u[1] * v[0]), u[0] * v[0] + u[1] * v[1])


def angle_between(s1, s2):
    """Angle in ``[0, pi]`` between the direction vectors of two segments."""
    return _vector_angle(s1.direction, s2.direction)


def separating_normal(incoming, outgoing, margin=1e-12):
    """Unit normal ``n`` with every outgoing vector on its positive side.

    ``incoming`` holds vectors from the vertex back to the predecessors and
    must end up on the negative side. Returns ``None`` when no such line
    through the vertex exists.
    """
    inc = np.asarray(incoming, dtype=float).reshape(-1, 2)
    out = np.asarray(outgoing, dtype=float).reshape(-1, 2)
    travel = np.vstack([-inc, out])
    travel = travel / np.linalg.norm(travel, axis=1)[:, None]
    guess = travel[: len(inc)].sum(axis=0)
    norm = np.hypot(*guess)
    if norm > 0:
        guess = guess / norm
        if (travel @ guess).min() > margin:
            return guess
    ang = np.sort(np.arctan2(travel[:, 1], travel[:, 0]))
    gaps = np.diff(np.append(ang, ang[0] + 2 * math.pi))
    g = int(np.argmax(gaps))
    if gaps[g] <= math.pi:
        return None
    mid = ang[g] + 0.5 * gaps[g]
    n = -np.array([math.cos(mid), math.sin(mid)])
    if (travel @ n).min() > margin:
        return n
    return None


@dataclass(frozen=True)
class AngleViolation:
    first: int
    second: int
    angle: float
    at: Optional[Point2] = None
    kind: str = "pair"

    def to_dict(self):
        return {
            "first": self.first,
            "second": self.second,
            "angle": self.angle,
            "at": None if self.at is None else [self.at.x, self.at.y],
            "kind": self.kind,
        }


def _segment_pairs(seg, tol):
    return kernels.candidate_pairs(seg, tol)


def validate_angle_hypothesis(curve):
    """Segment pairs that meet at an angle of at least a right angle.

    Consecutive-style junctions, where one segment ends exactly where the
    other begins and nothing else is shared, are not crossings and are not
    checked pairwise. Where several passes share a vertex the incoming and
    outgoing directions must still be separable by a line; otherwise a
    ``"star"`` violation is reported.
    """
    tol = curve.tolerance
    seg = curve.segment_array()
    violations = []
    for i, j in _segment_pairs(seg, tol):
        a1, b1 = (seg[i, 0], seg[i, 1]), (seg[i, 2], seg[i, 3])
        a2, b2 = (seg[j, 0], seg[j, 1]), (seg[j, 2], seg[j, 3])
        res = _raw_intersection(a1, b1, a2, b2, tol)
        if res[0] == "none":
            continue
        at = None
        if res[0] == "point":
            px, py = res[1]
            if _head_to_tail(px, py, a1, b1, a2, b2, tol):
                continue
            at = Point2(px, py)
        ang = _vector_angle((b1[0] - a1[0], b1[1] - a1[1]), (b2[0] - a2[0], b2[1] - a2[1]))
        if ang >= RIGHT_ANGLE - _ANGLE_SLACK:
            violations.append(AngleViolation(int(i), int(j), ang, at))
    if violations:
        return violations
    arr = _arrange(curve)
    for b, visits in _visits(arr.seq).items():
        if len(visits) < 2:
            continue
        inc, out = _star_vectors(arr, b, visits)
        if separating_normal(inc, out) is None:
            travel = np.vstack([-inc, out])
            worst = max(_vector_angle(u, v) for u in travel for v in travel)
            first, second = arr.parent[visits[0]], arr.parent[visits[1]]
            violations.append(AngleViolation(int(first), int(second), worst,
                                             Point2(*arr.points[b]), "star"))
    return violations


def _head_to_tail(px, py, a1, b1, a2, b2, tol):
    def near(q):
        return math.hypot(px - q[0], py - q[1]) <= tol
    return (near(b1) and near(a2)) or (near(b2) and near(a1))


# -- arrangement --------------------------------------------------------------

@dataclass
class Arrangement:
    """A curve rewritten over clustered points.

    ``seq`` lists point ids in travel order (cyclic); working segment ``k``
    runs from ``seq[k]`` to ``seq[k+1]`` and lies on original segment
    ``parent[k]``. ``apex`` marks points that are detour tips.
    """

    points: np.ndarray
    seq: List[int]
    parent: List[int]
    tolerance: float
    overlap: bool = False
    apex: frozenset = frozenset()

    def segment_array(self):
        idx = np.asarray(self.seq)
        nxt = np.roll(idx, -1)
        return np.hstack([self.points[idx], self.points[nxt]])

    def curve(self):
        return ClosedPolyCurve(tuple(Point2(*self.points[i]) for i in self.seq), self.tolerance)


def _visits(seq):
    out = defaultdict(list)
    for k, b in enumerate(seq):
        out[b].append(k)
    return out


def _star_vectors(arr, b, visits):
    m = len(arr.seq)
    pb = arr.points[b]
    inc = np.array([arr.points[arr.seq[k - 1]] - pb for k in visits])
    out = np.array([arr.points[arr.seq[(k + 1) % m]] - pb for k in visits])
    return inc, out


def _arrange(curve):
    """Split every segment at all crossings, touches and overlap endpoints."""
    tol = curve.tolerance
    coords = np.asarray(curve.coords)
    n = len(coords)
    seg = curve.segment_array()
    extra = []
    on_seg = [[] for _ in range(n)]
    overlap = False

    def add(p, ks):
        pid = None
        for k in ks:
            if (p[0], p[1]) in ((seg[k, 0], seg[k, 1]), (seg[k, 2], seg[k, 3])):
                continue
            if pid is None:
                extra.append(p)
                pid = n + len(extra) - 1
            on_seg[k].append(pid)

    for i, j in _segment_pairs(seg, tol):
        res = _raw_intersection((seg[i, 0], seg[i, 1]), (seg[i, 2], seg[i, 3]),
                                (seg[j, 0], seg[j, 1]), (seg[j, 2], seg[j, 3]), tol)
        if res[0] == "point":
            add(res[1], (i, j))
        elif res[0] == "overlap":
            overlap = True
            add(res[1], (i, j))
            add(res[2], (i, j))

    allpts = np.vstack([coords, np.asarray(extra, dtype=float).reshape(-1, 2)])
    labels = _cluster(allpts, tol)

    entries = []  # (cluster label, original segment starting there)
    for i in range(n):
        ids = [i] + on_seg[i]
        a = coords[i]
        d = seg[i, 2:] - a
        t = ((allpts[ids] - a) @ d) / (d @ d)
        for pid in (ids[o] for o in np.lexsort((ids, t))):
            lab = labels[pid]
            if entries and entries[-1][0] == lab:
                entries[-1] = (lab, i)
            else:
                entries.append((lab, i))
    if len(entries) > 1 and entries[-1][0] == entries[0][0]:
        entries.pop()

    # renumber clusters by first appearance; representative = lowest point id
    reps = {}
    for pid in range(len(allpts)):
        reps.setdefault(labels[pid], pid)
    order = {}
    for lab, _ in entries:
        order.setdefault(lab, len(order))
    points = np.empty((len(order), 2))
    for lab, k in order.items():
        points[k] = allpts[reps[lab]]
    seq = [order[lab] for lab, _ in entries]
    parent = [i for _, i in entries]
    return Arrangement(points, seq, parent, tol, overlap)


def _cluster(pts, tol):
    tree = cKDTree(pts)
    pairs = tree.query_pairs(tol, output_type="ndarray")
    n = len(pts)
    if len(pairs) == 0:
        return np.arange(n)
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    _, labels = connected_components(graph, directed=False)
    return labels


def _detour_groups(arr):
    m = len(arr.seq)
    groups = defaultdict(list)
    for k in range(m):
        groups[(arr.seq[k], arr.seq[(k + 1) % m])].append(k)
    for (u, v) in groups:
        if (v, u) in groups:
            raise OverlapPresent(f"segment between points {u} and {v} is traversed in both directions")
    return {key: ks for key, ks in groups.items() if len(ks) > 1}


def default_separation(arr):
    """One percent of the shortest segment that carries several passes."""
    groups = _detour_groups(arr)
    if not groups:
        return 0.0
    lengths = [np.hypot(*(arr.points[v] - arr.points[u])) for (u, v) in groups]
    return 0.01 * min(lengths)


def _separate(arr, separation):
    """Replace each repeated pass ``u -> v`` by a detour ``u -> apex -> v``.

    The ``l``-th pass (in travel order) of a ``k``-fold segment gets its apex
    on the perpendicular bisector, ``(k + 1 - l) * separation`` to the left,
    so earlier passes lie to the left of later ones.
    """
    groups = _detour_groups(arr)
    if not groups:
        return arr
    if not separation > 0:
        raise SeparationTooLarge("separation must be positive")
    pts = [p for p in arr.points]
    m = len(arr.seq)
    seq, parent, apex = [], [], set()
    outer = {}
    for k in range(m):
        u, v = arr.seq[k], arr.seq[(k + 1) % m]
        seq.append(u)
        parent.append(arr.parent[k])
        ks = groups.get((u, v))
        if ks is None:
            continue
        ell = ks.index(k) + 1
        pu, pv = arr.points[u], arr.points[v]
        d = pv - pu
        left = np.array([-d[1], d[0]]) / np.hypot(*d)
        lam = 0.5 * (pu + pv) + (len(ks) + 1 - ell) * separation * left
        pts.append(lam)
        lid = len(pts) - 1
        apex.add(lid)
        if ell == 1:
            outer[(u, v)] = lid
        seq.append(lid)
        parent.append(arr.parent[k])
    out = Arrangement(np.array(pts), seq, parent, arr.tolerance, False, frozenset(apex))
    _check_detours(out, outer)
    return out


def _check_detours(arr, outer):
    tol = arr.tolerance
    m = len(arr.seq)
    seg = arr.segment_array()
    ends = [(arr.seq[k], arr.seq[(k + 1) % m]) for k in range(m)]
    is_detour = [ends[k][0] in arr.apex or ends[k][1] in arr.apex for k in range(m)]
    for i, j in _segment_pairs(seg, tol):
        if not (is_detour[i] or is_detour[j]):
            continue
        res = _raw_intersection((seg[i, 0], seg[i, 1]), (seg[i, 2], seg[i, 3]),
                                (seg[j, 0], seg[j, 1]), (seg[j, 2], seg[j, 3]), tol)
        if res[0] == "none":
            continue
        shared = set(ends[i]) & set(ends[j])
        if res[0] == "point" and any(
                math.hypot(res[1][0] - arr.points[s][0], res[1][1] - arr.points[s][1]) <= tol
                for s in shared):
            continue
        raise SeparationTooLarge(f"detour segment {i} meets segment {j} away from shared endpoints")
    # nothing may sit inside the sliver between a segment and its outermost detour
    for (u, v), lid in outer.items():
        tri = arr.points[[u, lid, v]]
        inside = _strictly_inside_triangle(tri, arr.points, tol)
        inside[[u, v]] = False
        inside[list(arr.apex)] = False
        if inside.any():
            raise SeparationTooLarge(f"a vertex lies between points {u}, {v} and their detour")


def _strictly_inside_triangle(tri, pts, tol):
    a, b, c = tri
    sign = np.sign((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
    ok = np.ones(len(pts), dtype=bool)
    for p, q in ((a, b), (b, c), (c, a)):
        e = q - p
        dist = (e[0] * (pts[:, 1] - p[1]) - e[1] * (pts[:, 0] - p[0])) / np.hypot(*e)
        ok &= sign * dist > tol
    return ok


def subdivide_at_intersections(curve):
    """Same point set and travel order, with every crossing made a vertex."""
    arr = _arrange(curve)
    if arr.overlap:
        raise OverlapPresent("collinear overlapping segments present; separate them first")
    return arr.curve()


def separate_overlaps(curve, separation=None):
    """Push repeated passes over a segment apart into disjoint detours.

    ``separation`` defaults to one percent of the shortest multiply covered
    segment. A curve without overlaps is returned unchanged.
    """
    arr = _arrange(curve)
    if not arr.overlap:
        return curve
    if separation is None:
        separation = default_separation(arr)
    return _separate(arr, float(separation)).curve()


# -- convex hulls -------------------------------------------------------------

@dataclass(frozen=True)
class ConvexPolygon:
    hull_vertices: Tuple[Point2, ...]
    degenerate: bool = False

    @cached_property
    def coords(self):
        arr = np.array([[v.x, v.y] for v in self.hull_vertices], dtype=np.float64).reshape(-1, 2)
        arr.setflags(write=False)
        return arr

    def to_dict(self):
        return {"vertices": [[v.x, v.y] for v in self.hull_vertices], "degenerate": self.degenerate}


def _hull_indices(pts, tol):
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                o, a = out[-2], out[-1]
                span = math.hypot(p[0] - o[0], p[1] - o[1])
                cross = (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0])
                if span == 0 or cross <= tol * span:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(pts[::-1])
    return lower[:-1] + upper[:-1]


def convex_hull(points, tolerance=DEFAULT_TOLERANCE):
    """Counter-clockwise hull; collinear or single-point input is flagged degenerate."""
    pts = np.asarray([tuple(as_point(p)) for p in points], dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise EmptyInput("convex hull of an empty set")
    pts = np.unique(pts, axis=0)
    if len(pts) == 1:
        return ConvexPolygon((Point2(*pts[0]),), True)
    hull = _hull_indices(pts, tolerance)
    if len(hull) < 3:
        # all points within tolerance of a line: keep the two extremes
        centre = pts.mean(axis=0)
        _, _, vt = np.linalg.svd(pts - centre)
        proj = (pts - centre) @ vt[0]
        ends = (pts[int(np.argmin(proj))], pts[int(np.argmax(proj))])
        if math.hypot(*(ends[1] - ends[0])) <= tolerance:
            return ConvexPolygon((Point2(*ends[0]),), True)
        return ConvexPolygon(tuple(Point2(*e) for e in ends), True)
    return ConvexPolygon(tuple(Point2(*p) for p in hull), False)


def hull_signed_distance(hull, q):
    """Distance from ``q`` to the hull boundary, positive inside, negative outside."""
    q = np.asarray(tuple(as_point(q)), dtype=float)
    v = hull.coords
    if len(v) == 1:
        return -float(np.hypot(*(q - v[0])))
    if len(v) == 2:
        return -float(kernels.min_distance(v, q[None, :])[0])
    nxt = np.roll(v, -1, axis=0)
    e = nxt - v
    lens = np.hypot(e[:, 0], e[:, 1])
    side = (e[:, 0] * (q[1] - v[:, 1]) - e[:, 1] * (q[0] - v[:, 0])) / lens
    if side.min() >= 0:
        return float(side.min())
    return -float(kernels.min_distance(v, q[None, :])[0])


def point_in_hull(hull, q, tolerance=DEFAULT_TOLERANCE):
    """``"inside"``, ``"boundary"`` or ``"outside"`` with a tolerance band."""
    d = hull_signed_distance(hull, q)
    if d > tolerance:
        return "inside"
    if d >= -tolerance:
        return "boundary"
    return "outside"
