"""Decomposition of a closed polygon into simple loops.

The curve is split at its crossings, repeated passes over a segment are
pushed apart into thin detours, and then every multiply visited vertex is
rewired so that no two strands cross there any more. What remains is a set of
simple loops that together cover the curve exactly as often as it covers
itself and whose indices add up to the index of the curve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from planarfix import kernels
from planarfix.errors import (
    AngleHypothesisViolated,
    ConeSeparationFailure,
    DecompositionFailed,
    NestingViolated,
    NonTermination,
    NoPositiveLoop,
    RankMismatch,
    SeparationTooLarge,
)
from planarfix.geometry import (
    Arrangement,
    ClosedPolyCurve,
    OrientedSegment,
    Point2,
    _arrange,
    _cluster,
    _raw_intersection,
    _separate,
    _visits,
    as_point,
    default_separation,
    separating_normal,
    validate_angle_hypothesis,
)
from planarfix.winding import covering_counts, winding_numbers


@dataclass(frozen=True)
class SimpleLoop:
    curve: ClosedPolyCurve
    orientation: str  # "CCW" or "CW"
    parent_segment_map: Tuple[int, ...]

    @property
    def coords(self):
        return self.curve.coords

    @property
    def sign(self):
        return 1 if self.orientation == "CCW" else -1

    def to_dict(self):
        return {
            "vertices": [[v.x, v.y] for v in self.curve.vertices],
            "orientation": self.orientation,
            "parent_segment_map": list(self.parent_segment_map),
        }


@dataclass(frozen=True)
class VertexStar:
    vertex: Point2
    incoming: Tuple[OrientedSegment, ...]
    outgoing: Tuple[OrientedSegment, ...]
    separating_line: Tuple[Tuple[float, float], Tuple[float, float]]  # (point, direction)
    incoming_positions: Tuple[int, ...] = ()
    outgoing_positions: Tuple[int, ...] = ()

    @property
    def k(self):
        return len(self.incoming)


@dataclass
class PropertyCheck:
    passed: bool
    checked: int
    failures: list = field(default_factory=list)

    def to_dict(self):
        return {"passed": self.passed, "checked": self.checked, "failures": self.failures}


@dataclass
class VerificationReport:
    checks: Dict[str, PropertyCheck]
    multiplicity_samples: list
    index_samples: list
    nesting: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks.values())

    def failed(self):
        return [name for name, c in self.checks.items() if not c.passed]

    def to_dict(self):
        return {name: c.to_dict() for name, c in self.checks.items()}


@dataclass
class DecompositionReport:
    loops: List[SimpleLoop]
    multiplicity_checks: list
    nesting_relation: list
    index_additivity_samples: list
    kappa: int
    chains: list
    properties: Dict[str, PropertyCheck]
    separation: float = 0.0
    resolutions: int = 0
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "loops": [lp.to_dict() for lp in self.loops],
            "kappa": self.kappa,
            "chains": self.chains,
            "nesting_relation": self.nesting_relation,
            "properties": {k: v.to_dict() for k, v in self.properties.items()},
            "multiplicity_checks": self.multiplicity_checks,
            "index_additivity_samples": self.index_additivity_samples,
            "separation": self.separation,
            "resolutions": self.resolutions,
            "notes": self.notes,
        }


@dataclass(frozen=True)
class DecomposeConfig:
    separation: Optional[float] = None  # None: one percent of the shortest doubled segment
    separation_retries: int = 20
    budget: Optional[int] = None
    samples: int = 200
    kappa_samples: int = 50
    seed: int = 0
    verify: bool = True


# -- successor bookkeeping ----------------------------------------------------

class _Tracer:
    """Successor permutation over the positions of a working curve."""

    def __init__(self, points, seq):
        m = len(seq)
        self.points = points
        self.seq = list(seq)
        self.succ = [(k + 1) % m for k in range(m)]
        self.pred = [(k - 1) % m for k in range(m)]
        self.out = list(range(m))  # working segment leaving each position

    def star(self, positions):
        pb = self.points[self.seq[positions[0]]]
        inc = np.array([self.points[self.seq[self.pred[p]]] - pb for p in positions])
        out = np.array([self.points[self.seq[self.succ[p]]] - pb for p in positions])
        return inc, out

    def ranks(self, positions):
        """Positions ordered by incoming rank and by outgoing rank."""
        inc, out = self.star(positions)
        n = separating_normal(inc, out)
        if n is None:
            b = self.points[self.seq[positions[0]]]
            raise ConeSeparationFailure(f"no line through ({b[0]:.6g}, {b[1]:.6g}) separates the strands")
        r = np.array([n[1], -n[0]])
        key_in = np.arctan2(-(inc @ n), inc @ r)
        key_out = np.arctan2(out @ n, out @ r)
        by_in = [positions[i] for i in np.argsort(key_in, kind="stable")]
        by_out = [positions[i] for i in np.argsort(key_out, kind="stable")]
        return by_in, by_out, n, r

    def resolve(self, positions):
        """Pair the i-th incoming strand with the i-th outgoing one."""
        by_in, by_out, _, _ = self.ranks(positions)
        if len(by_in) != len(by_out):
            raise RankMismatch("incoming and outgoing strand counts differ")
        if by_in == by_out:
            return False
        succ = {p: self.succ[p] for p in by_out}
        out = {p: self.out[p] for p in by_out}
        for p_in, p_out in zip(by_in, by_out):
            self.succ[p_in] = succ[p_out]
            self.out[p_in] = out[p_out]
            self.pred[succ[p_out]] = p_in
        return True

    def cycles(self):
        seen = [False] * len(self.seq)
        result = []
        for start in range(len(self.seq)):
            if seen[start]:
                continue
            cyc = []
            p = start
            while not seen[p]:
                seen[p] = True
                cyc.append(p)
                p = self.succ[p]
            result.append(cyc)
        return result


def _multi_vertices(points, seq):
    visits = {b: ps for b, ps in _visits(seq).items() if len(ps) > 1}
    return sorted(visits.items(), key=lambda item: (points[item[0]][0], points[item[0]][1]))


def _resolve_all(tracer, budget):
    done = 0
    multi = _multi_vertices(tracer.points, tracer.seq)
    for _, positions in multi:
        if tracer.resolve(positions):
            done += 1
            if done > budget:
                raise NonTermination(budget)
    # a second sweep must find nothing left to do
    for _, positions in multi:
        if tracer.resolve(positions):
            raise NonTermination(budget)
    return done


# -- public vertex operations -------------------------------------------------

def _curve_ids(curve):
    labels = _cluster(np.asarray(curve.coords), curve.tolerance)
    first = {}
    for i, lab in enumerate(labels):
        first.setdefault(lab, i)
    ids = [first[lab] for lab in labels]
    return np.asarray(curve.coords), ids


def _visits_at(curve, b):
    b = as_point(b)
    pts, ids = _curve_ids(curve)
    d = np.hypot(pts[:, 0] - b.x, pts[:, 1] - b.y)
    hits = np.nonzero(d <= curve.tolerance)[0]
    if len(hits) == 0:
        raise ValueError(f"({b.x}, {b.y}) is not a vertex of the curve")
    target = ids[hits[0]]
    return pts, ids, [p for p in range(len(ids)) if ids[p] == target]


def build_vertex_star(curve, b):
    """Incoming and outgoing strands at vertex ``b``, ordered by rank."""
    pts, ids, positions = _visits_at(curve, b)
    tracer = _Tracer(pts, ids)
    by_in, by_out, n, r = tracer.ranks(positions)
    tol = curve.tolerance
    m = len(ids)
    pb = Point2(*pts[positions[0]])
    incoming = tuple(OrientedSegment(Point2(*pts[(p - 1) % m]), pb, tol) for p in by_in)
    outgoing = tuple(OrientedSegment(pb, Point2(*pts[(p + 1) % m]), tol) for p in by_out)
    line = ((pb.x, pb.y), (float(r[0]), float(r[1])))
    return VertexStar(pb, incoming, outgoing, line, tuple(by_in), tuple(by_out))


def resolve_vertex(curve, star):
    """Rewire the strands through ``star`` by matched rank.

    Returns the closed curves traced by the new successor relation, ordered
    by their first vertex in the original listing.
    """
    if star.k < 2:
        return [curve]
    if len(star.incoming_positions) != len(star.outgoing_positions):
        raise RankMismatch("star has unequal strand counts")
    pts, ids = _curve_ids(curve)
    tracer = _Tracer(pts, ids)
    by_in, by_out = list(star.incoming_positions), list(star.outgoing_positions)
    succ = {p: tracer.succ[p] for p in by_out}
    for p_in, p_out in zip(by_in, by_out):
        tracer.succ[p_in] = succ[p_out]
    out = []
    for cyc in tracer.cycles():
        out.append(ClosedPolyCurve(tuple(Point2(*pts[p]) for p in cyc), curve.tolerance))
    return out


# -- loop geometry ------------------------------------------------------------

def signed_area(coords):
    x, y = coords[:, 0], coords[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _inside(coords, pts, tol):
    vals, dist = winding_numbers(coords, pts, tol)
    return (vals != 0) & (dist > tol)


def representative_point(coords, tol):
    """A point strictly inside a simple polygon.

    The area centroid when it is inside; otherwise the midpoint of the widest
    interior chord on a few horizontal scanlines.
    """
    coords = np.asarray(coords, dtype=float)
    x, y = coords[:, 0], coords[:, 1]
    cross = x * np.roll(y, -1) - np.roll(x, -1) * y
    area = cross.sum() / 2
    if area != 0:
        cx = ((x + np.roll(x, -1)) * cross).sum() / (6 * area)
        cy = ((y + np.roll(y, -1)) * cross).sum() / (6 * area)
        c = np.array([[cx, cy]])
        if _inside(coords, c, tol)[0]:
            return c[0]
    ys = np.unique(y)
    levels = 0.5 * (ys[:-1] + ys[1:])
    widths = np.diff(ys)
    best, best_w = None, -1.0
    for lev in levels[np.argsort(-widths)][:8]:
        a, b = coords, np.roll(coords, -1, axis=0)
        hit = (a[:, 1] - lev) * (b[:, 1] - lev) < 0
        xs = a[hit, 0] + (lev - a[hit, 1]) * (b[hit, 0] - a[hit, 0]) / (b[hit, 1] - a[hit, 1])
        xs = np.sort(xs)
        for x0, x1 in zip(xs[:-1], xs[1:]):
            mid = np.array([[0.5 * (x0 + x1), lev]])
            if x1 - x0 > best_w and _inside(coords, mid, tol)[0]:
                best, best_w = mid[0], x1 - x0
    if best is None:
        raise NestingViolated("could not find an interior point of a loop")
    return best


def interior_samples(coords, count, rng, tol, batches=64):
    """Up to ``count`` uniform samples of the open region bounded by a simple polygon."""
    coords = np.asarray(coords, dtype=float)
    lo, hi = coords.min(axis=0), coords.max(axis=0)
    found = [representative_point(coords, tol)[None, :]]
    total = 1
    for _ in range(batches):
        if total >= count:
            break
        cand = rng.uniform(lo, hi, size=(1024, 2))
        ok = cand[_inside(coords, cand, tol)]
        found.append(ok)
        total += len(ok)
    return np.vstack(found)[:count]


def _loop_is_simple(coords, tol):
    m = len(coords)
    if len(set(_cluster(coords, tol))) < m:
        return False
    seg = np.hstack([coords, np.roll(coords, -1, axis=0)])
    for i, j in kernels.candidate_pairs(seg, tol):
        res = _raw_intersection((seg[i, 0], seg[i, 1]), (seg[i, 2], seg[i, 3]),
                                (seg[j, 0], seg[j, 1]), (seg[j, 2], seg[j, 3]), tol)
        if res[0] == "none":
            continue
        if res[0] == "point" and (j == i + 1 or (i == 0 and j == m - 1)):
            continue
        return False
    return True


# -- decomposition ------------------------------------------------------------

def _working(curve, config):
    arr = _arrange(curve)
    if not arr.overlap:
        return arr, 0.0
    sep = config.separation if config.separation is not None else default_separation(arr)
    last = None
    for _ in range(config.separation_retries + 1):
        try:
            return _separate(arr, sep), sep
        except SeparationTooLarge as exc:
            last = exc
            sep *= 0.25
    raise last


def _trace_loops(curve, arr, tracer, notes):
    tol = curve.tolerance
    loops = []
    for cyc in tracer.cycles():
        entries = [(tracer.seq[p], arr.parent[tracer.out[p]]) for p in cyc]
        kept = [e for e in entries if e[0] not in arr.apex]
        if len(kept) < len(entries):
            if len(kept) >= 2 and _loop_is_simple(arr.points[[e[0] for e in kept]], tol):
                entries = kept
            else:
                notes.append("a detour was kept because retracting it broke simplicity")
        # start at the lowest parent segment so loops read like the input
        first = min(range(len(entries)), key=lambda i: entries[i][1])
        entries = entries[first:] + entries[:first]
        coords = arr.points[[e[0] for e in entries]]
        loop_curve = ClosedPolyCurve(tuple(Point2(*c) for c in coords), tol)
        orient = "CCW" if signed_area(coords) > 0 else "CW"
        loops.append(SimpleLoop(loop_curve, orient, tuple(int(e[1]) for e in entries)))
    loops.sort(key=lambda lp: lp.parent_segment_map[0])
    return loops


def decompose(curve, config=None):
    """Split ``curve`` into simple loops and certify the result.

    Raises ``AngleHypothesisViolated`` up front, and ``DecompositionFailed``
    if any sampled property check fails.
    """
    config = config or DecomposeConfig()
    violations = validate_angle_hypothesis(curve)
    if violations:
        raise AngleHypothesisViolated(violations)
    arr, sep = _working(curve, config)
    tracer = _Tracer(arr.points, arr.seq)
    budget = config.budget if config.budget is not None else 4 * len(arr.seq) + 16
    done = _resolve_all(tracer, budget)
    notes = []
    loops = _trace_loops(curve, arr, tracer, notes)
    rng = np.random.default_rng(config.seed)
    chains = nested_disk_chains(loops)
    kappa = select_kappa(curve, loops, samples=config.kappa_samples, rng=rng, chains=chains)
    if config.verify:
        ver = verify_decomposition(curve, loops, config.samples, rng=rng, kappa=kappa,
                                   kappa_samples=config.kappa_samples)
    else:
        ver = VerificationReport({}, [], [], [])
    report = DecompositionReport(
        loops=loops,
        multiplicity_checks=ver.multiplicity_samples,
        nesting_relation=ver.nesting or _strict_pairs(loops),
        index_additivity_samples=ver.index_samples,
        kappa=kappa,
        chains=chains,
        properties=ver.checks,
        separation=float(sep),
        resolutions=done,
        notes=notes,
    )
    if not ver.passed:
        raise DecompositionFailed(ver.failed(), report)
    return report


# -- verification -------------------------------------------------------------

def _on_curve_samples(coords, count, rng):
    m = len(coords)
    idx = rng.integers(0, m, size=count)
    t = rng.uniform(0.0, 1.0, size=count)
    a = coords[idx]
    b = coords[(idx + 1) % m]
    return a + t[:, None] * (b - a)


def _parent_ok(curve, loop, tol):
    bad = []
    orig = curve.coords
    n = len(orig)
    lc = loop.coords
    m = len(lc)
    for k, par in enumerate(loop.parent_segment_map):
        a, b = orig[par], orig[(par + 1) % n]
        p, q = lc[k], lc[(k + 1) % m]
        d = kernels.min_distance(np.array([a, b]), np.array([p, q]))
        if d.max() > tol or float(np.dot(b - a, q - p)) <= 0:
            bad.append({"segment": k, "parent": int(par)})
    return bad


def _relation(li, lj, rep_i, tol):
    """How loop ``i`` sits relative to loop ``j``: "in", "out" or "mixed"."""
    ci, cj = li.coords, lj.coords
    mids = 0.5 * (ci + np.roll(ci, -1, axis=0))
    probe = np.vstack([ci, mids])
    vals, dist = winding_numbers(cj, probe, tol)
    on = dist <= tol
    inside = (vals != 0) & ~on
    rep_in = _inside(cj, rep_i[None, :], tol)[0]
    if rep_in and np.all(inside | on):
        return "in"
    if not rep_in and not inside.any():
        return "out"
    return "mixed"


def _containment(loops, tol):
    reps = [representative_point(lp.coords, tol) for lp in loops]
    n = len(loops)
    rel = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                rel[i][j] = _relation(loops[i], loops[j], reps[i], tol)
    return rel


def _strict_pairs(loops, rel=None, tol=1e-9):
    if rel is None:
        if not loops:
            return []
        rel = _containment(loops, loops[0].curve.tolerance)
    n = len(loops)
    return [[i, j] for i in range(n) for j in range(n)
            if i != j and rel[i][j] == "in" and rel[j][i] != "in"]


def verify_decomposition(curve, loops, samples=200, rng=None, seed=0, kappa=None, kappa_samples=50):
    """Check properties (i) to (iv), plus simplicity and optionally (v).

    Failures are recorded in the report with witness points rather than
    raised.
    """
    rng = rng if rng is not None else np.random.default_rng(seed)
    tol = curve.tolerance
    coords = np.asarray(curve.coords)
    checks = {}

    simple_bad = [k for k, lp in enumerate(loops) if not _loop_is_simple(lp.coords, tol)]
    checks["simple"] = PropertyCheck(not simple_bad, len(loops), simple_bad)

    # (i) covering multiplicity along the curve
    pts = _on_curve_samples(coords, samples, rng)
    mult = covering_counts(coords, pts, tol)
    total = np.zeros(len(pts), dtype=np.int64)
    for lp in loops:
        total += covering_counts(lp.coords, pts, tol)
    mult_samples = [{"point": [float(p[0]), float(p[1])], "curve": int(a), "loops": int(b)}
                    for p, a, b in zip(pts, mult, total)]
    bad = [s for s in mult_samples if s["curve"] != s["loops"]]
    checks["multiplicity"] = PropertyCheck(not bad, len(pts), bad[:10])

    # (ii) each loop segment lies on a parent segment with the same orientation
    bad = []
    count = 0
    for k, lp in enumerate(loops):
        count += len(lp.parent_segment_map)
        bad.extend({"loop": k, **b} for b in _parent_ok(curve, lp, tol))
    checks["containment"] = PropertyCheck(not bad, count, bad[:10])

    # (iii) any two disks are nested or have disjoint interiors
    rel = _containment(loops, tol) if loops else []
    bad = []
    n = len(loops)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = rel[i][j], rel[j][i]
            if not (a == "in" or b == "in" or (a == "out" and b == "out")):
                bad.append([i, j])
    checks["nesting"] = PropertyCheck(not bad, n * (n - 1) // 2, bad)
    nesting = _strict_pairs(loops, rel) if not bad else []

    # (iv) index additivity at random points off every curve
    lo, hi = coords.min(axis=0), coords.max(axis=0)
    pad = 0.1 * (hi - lo) + 10 * tol
    q = rng.uniform(lo - pad, hi + pad, size=(samples, 2))
    ind, dist = winding_numbers(coords, q, tol)
    keep = dist > tol
    summed = np.zeros(len(q), dtype=np.int64)
    for lp in loops:
        v, d = winding_numbers(lp.coords, q, tol)
        keep &= d > tol
        summed += v
    idx_samples = [{"point": [float(p[0]), float(p[1])], "curve": int(a), "loops": int(b)}
                   for p, a, b, k in zip(q, ind, summed, keep) if k]
    bad = [s for s in idx_samples if s["curve"] != s["loops"]]
    checks["additivity"] = PropertyCheck(not bad, len(idx_samples), bad[:10])

    if kappa is not None and 0 <= kappa < len(loops):
        inner = interior_samples(loops[kappa].coords, kappa_samples, rng, tol)
        v, d = winding_numbers(coords, inner, tol)
        bad = [[float(p[0]), float(p[1])] for p, vv, dd in zip(inner, v, d) if vv == 0 or dd <= tol]
        checks["kappa"] = PropertyCheck(not bad, len(inner), bad[:10])
    return VerificationReport(checks, mult_samples, idx_samples, nesting)


# -- nested disks -------------------------------------------------------------

def nested_disk_chains(loops):
    """Maximal chains of strictly nested loop disks, innermost first."""
    if not loops:
        return []
    tol = loops[0].curve.tolerance
    rel = _containment(loops, tol)
    n = len(loops)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = rel[i][j], rel[j][i]
            ok = a == "in" or b == "in" or (a == "out" and b == "out")
            if not ok:
                raise NestingViolated(f"loops {i} and {j} are neither nested nor disjoint")
    below = {i: set() for i in range(n)}
    for i, j in _strict_pairs(loops, rel):
        below[j].add(i)
    # covering relation of the strict order
    above = {i: [] for i in range(n)}
    for j in range(n):
        for i in below[j]:
            if not any(i in below[k] for k in below[j]):
                above[i].append(j)
    minimal = [i for i in range(n) if not below[i]]
    chains = []

    def walk(path):
        ups = sorted(above[path[-1]])
        if not ups:
            chains.append(list(path))
            return
        for j in ups:
            walk(path + [j])

    for i in minimal:
        walk([i])
    return chains


def select_kappa(curve, loops, samples=50, rng=None, seed=0, chains=None):
    """A loop whose whole open disk has nonzero index for ``curve``.

    Chains are scanned from their innermost disk outwards.
    """
    rng = rng if rng is not None else np.random.default_rng(seed)
    tol = curve.tolerance
    chains = chains if chains is not None else nested_disk_chains(loops)
    order = []
    depth = max((len(c) for c in chains), default=0)
    for level in range(depth):
        for c in chains:
            if level < len(c) and c[level] not in order:
                order.append(c[level])
    for k in order:
        inner = interior_samples(loops[k].coords, samples, rng, tol)
        vals, dist = winding_numbers(curve.coords, inner, tol)
        if np.all(vals != 0) and np.all(dist > tol):
            return int(k)
    raise NoPositiveLoop("no loop disk has nonzero index throughout")
