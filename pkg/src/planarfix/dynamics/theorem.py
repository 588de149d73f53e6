"""Capital points and common fixed points of commuting families.

The search mirrors the inductive argument: maps are peeled off one at a
time, each time finding a fixed point of the next map among the fixed points
of the maps already handled, either in the closure of the orbit (when the
orbit converges) or as a capital point certified by an orbit-curve index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from planarfix.dynamics.degree import FixedPointResult, fixed_point_in_disk
from planarfix.dynamics.orbits import DEFAULT_DOMAIN, Box, orbit_array, record_returns
from planarfix.errors import (
    CommonFixCheckFailed,
    CommutationViolation,
    DegenerateOrbitCurve,
    FixedSeed,
    LocalizationFailure,
    NoReturns,
    PlanarFixError,
    UnboundedOrbit,
)
from planarfix.geometry import (
    DEFAULT_TOLERANCE,
    ClosedPolyCurve,
    ConvexPolygon,
    Point2,
    as_point,
    convex_hull,
    hull_signed_distance,
    point_in_hull,
)
from planarfix.untangle import DecomposeConfig, decompose
from planarfix.winding import winding_number


@dataclass(frozen=True)
class TheoremConfig:
    fixed_tol: float = 1e-9  # target cell size scale of the degree search
    residual_tol: float = 1e-7  # accepted residual of the final point
    fixer_tol: float = 1e-7  # how well an earlier map must fix a candidate
    commute_tol: float = 1e-9
    commute_samples: int = 64
    commute_radius: float = 1.0
    domain: Box = DEFAULT_DOMAIN
    budget: int = 20000
    return_budget: int = 4000
    return_ratio: float = 0.5
    closure_tol: float = 1e-6
    max_candidates: int = 12
    extra_indices: int = 3
    hull_samples: int = 10000
    tolerance: float = DEFAULT_TOLERANCE
    decompose_samples: int = 50
    seed: int = 0
    epsilon1: float = 0.05
    epsilon2: float = 0.01


@dataclass(frozen=True)
class CapitalPointCertificate:
    point: Point2
    map: object
    base: Point2
    return_times: List[int]
    indices: List[int]
    residual: float
    degree: int
    loop_size: int

    def to_dict(self):
        return {
            "point": [self.point.x, self.point.y],
            "map": self.map.label,
            "base": [self.base.x, self.base.y],
            "return_times": list(self.return_times),
            "indices": list(self.indices),
            "residual": self.residual,
            "degree": self.degree,
            "loop_size": self.loop_size,
        }


@dataclass
class TheoremCertificate:
    generators: list
    seed: Point2
    fixed_point: Point2
    residuals: List[float]
    hull: ConvexPolygon
    hull_membership: str
    hull_margin: float
    steps: list = field(default_factory=list)

    def to_dict(self):
        return {
            "generators": [{"label": g.label, "spec": g.spec} for g in self.generators],
            "seed": [self.seed.x, self.seed.y],
            "fixed_point": [self.fixed_point.x, self.fixed_point.y],
            "residuals": list(self.residuals),
            "hull": self.hull.to_dict(),
            "hull_membership": self.hull_membership,
            "hull_margin": self.hull_margin,
            "steps": self.steps,
        }


def _pt(p):
    return np.asarray(tuple(as_point(p)), dtype=float)


def commutator_residual(f, g, pts):
    return float(np.hypot(*(f(g(pts)) - g(f(pts))).T).max())


def check_commutation(maps, center, config=None):
    """Largest sampled ``|f(g(x)) - g(f(x))|`` over all pairs; raises on violation."""
    config = config or TheoremConfig()
    rng = np.random.default_rng(config.seed)
    c = _pt(center)
    pts = c + rng.uniform(-config.commute_radius, config.commute_radius,
                          size=(config.commute_samples, 2))
    pts = np.vstack([c[None, :], pts])
    scale = 1.0 + float(np.abs(pts).max())
    worst = 0.0
    for i in range(len(maps)):
        for j in range(i + 1, len(maps)):
            r = commutator_residual(maps[i], maps[j], pts)
            worst = max(worst, r)
            if r > config.commute_tol * scale:
                raise CommutationViolation((maps[i].label, maps[j].label), r)
    return worst


def orbit_samples(maps, p, count=10000, domain=None):
    """Forward grid ``f1^i1 ... fk^ik (p)`` with about ``count`` points.

    The first ``count`` points are returned; ``UnboundedOrbit`` is raised if
    any leaves ``domain``.
    """
    pts = _pt(p)[None, :]
    if not maps:
        return pts
    per = int(math.ceil(count ** (1.0 / len(maps))))
    for f in maps:
        layers = [pts]
        cur = pts
        for _ in range(per - 1):
            cur = f(cur)
            layers.append(cur)
        pts = np.vstack(layers)
    pts = pts[:count]
    if not np.all(np.isfinite(pts)):
        raise UnboundedOrbit("orbit samples are not finite")
    if domain is not None and not np.all(domain.contains(pts)):
        raise UnboundedOrbit("orbit samples leave the working domain")
    return pts


def _check_fixers(fixers, q, tol):
    for g in fixers:
        r = float(np.hypot(*(g(q) - q)))
        if r > tol:
            raise CommonFixCheckFailed(g.label, r)


def _curve(pts, tol):
    try:
        return ClosedPolyCurve(tuple(Point2(*row) for row in pts), tol)
    except PlanarFixError as exc:
        raise DegenerateOrbitCurve(str(exc)) from exc


def find_capital_point(f, commuting_fixers, p, config=None):
    """A fixed point of ``f`` with nonzero index for orbit curves of ``p``.

    Return times are the record close returns of ``p`` (closer than
    ``return_ratio * |f(p) - p|`` and than every earlier return); candidates
    are tried in increasing order until one certifies.
    """
    config = config or TheoremConfig()
    p0 = _pt(p)
    step = float(np.hypot(*(f(p0) - p0)))
    if step <= config.fixed_tol:
        raise FixedSeed(f"{f.label} fixes the seed")
    pts = orbit_array(f, p0, config.return_budget)
    dist = np.hypot(*(pts - p0).T)
    cands = [n for n in record_returns(dist, config.return_ratio * step) if n >= 3]
    if not cands:
        raise NoReturns(f"no close returns of the seed under {f.label} within {config.return_budget} steps")
    if not np.all(config.domain.contains(pts[: cands[-1]])):
        raise UnboundedOrbit(f"orbit of {f.label} leaves the working domain")
    last = None
    dcfg = DecomposeConfig(samples=config.decompose_samples, seed=config.seed)
    for idx, n in enumerate(cands[: config.max_candidates]):
        try:
            curve = _curve(pts[:n], config.tolerance)
            rep = decompose(curve, dcfg)
            loop = rep.loops[rep.kappa]
            found = fixed_point_in_disk(f, loop, config.fixed_tol)
            q = _pt(found.point)
            _check_fixers(commuting_fixers, q, config.fixer_tol)
            ind = winding_number(curve, q).value
            if ind == 0:
                raise DegenerateOrbitCurve(f"index of the candidate is zero for n={n}")
        except PlanarFixError as exc:
            last = exc
            continue
        times, indices = [n], [ind]
        for n2 in cands[idx + 1:]:
            if len(times) > config.extra_indices:
                break
            try:
                v = winding_number(_curve(pts[:n2], config.tolerance), q).value
            except PlanarFixError:
                continue
            if v != 0:
                times.append(n2)
                indices.append(v)
        return CapitalPointCertificate(Point2(*q), f, Point2(*p0), times, indices,
                                       found.residual, found.degree, len(loop.curve))
    if isinstance(last, CommonFixCheckFailed):
        raise last
    raise DegenerateOrbitCurve(f"no return time certified a capital point ({type(last).__name__}: {last})")


def _converging_fixed_point(f, fixers, p0, config):
    """Fixed point in the closure of a converging orbit, or ``None``."""
    x = p0[None, :]
    best, best_d = None, np.inf
    for _ in range(config.budget):
        y = f.func(x)
        d = float(np.hypot(*(y - x)[0]))
        if not np.isfinite(d) or not config.domain.contains(y)[0]:
            raise UnboundedOrbit(f"orbit of {f.label} leaves the working domain")
        if d < best_d:
            best, best_d = x[0].copy(), d
        if d < config.closure_tol:
            break
        x = y
    if best_d >= config.closure_tol:
        return None
    q = best
    for _ in range(50):
        jac = f.jacobian(q) - np.eye(2)
        try:
            q = q - np.linalg.solve(jac, f(q) - q)
        except np.linalg.LinAlgError:
            return None
        if np.hypot(*(f(q) - q)) < 0.01 * config.fixed_tol:
            break
    half = max(10 * config.closure_tol, 1e-6 * (1 + float(np.abs(q).max())))
    square = q + half * np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
    try:
        found = fixed_point_in_disk(f, square, config.fixed_tol)
    except PlanarFixError:
        return None
    return found


def locate_common_fixed_point(g_fixed, f_family, p, config=None):
    """A common fixed point of all maps inside the hull of the orbit of ``p``."""
    config = config or TheoremConfig()
    g_fixed, f_family = list(g_fixed), list(f_family)
    gens = g_fixed + f_family
    p0 = _pt(p)
    check_commutation(gens, p0, config)
    trace = []
    for g in g_fixed:
        r = float(np.hypot(*(g(p0) - p0)))
        if r > config.fixer_tol:
            raise LocalizationFailure("seed", [{"map": g.label, "residual": r}])
    samples = orbit_samples(f_family, p0, config.hull_samples, config.domain)
    cur = p0
    fixers = list(g_fixed)
    for i, f in enumerate(f_family):
        step = float(np.hypot(*(f(cur) - cur)))
        if step <= config.fixer_tol:
            trace.append({"map": f.label, "case": "fixed", "residual": step})
            fixers.append(f)
            continue
        entry = {"map": f.label}
        try:
            found = _converging_fixed_point(f, fixers, cur, config)
            if found is not None:
                q = _pt(found.point)
                _check_fixers(fixers, q, config.fixer_tol)
                entry.update(case="orbit-closure", residual=found.residual)
            else:
                cert = find_capital_point(f, fixers, cur, config)
                q = _pt(cert.point)
                entry.update(case="capital", residual=cert.residual,
                             return_times=cert.return_times, indices=cert.indices)
        except UnboundedOrbit:
            raise
        except PlanarFixError as exc:
            entry.update(case="failed", error=type(exc).__name__, message=str(exc))
            trace.append(entry)
            raise LocalizationFailure(i, trace) from exc
        entry["point"] = [float(q[0]), float(q[1])]
        trace.append(entry)
        cur = q
        fixers.append(f)
    residuals = [float(np.hypot(*(g(cur) - cur))) for g in gens]
    if residuals and max(residuals) > config.residual_tol:
        raise LocalizationFailure("residual", trace + [{"residuals": residuals}])
    hull = convex_hull(samples, config.tolerance)
    membership = point_in_hull(hull, cur, config.tolerance)
    margin = hull_signed_distance(hull, cur)
    if membership == "outside":
        raise LocalizationFailure("hull", trace + [{"hull_margin": margin}])
    return TheoremCertificate(gens, Point2(*p0), Point2(*cur), residuals, hull, membership,
                              float(margin), trace)


def verify_orbit_localization(h, f, q, p, ell_range, samples=10000, h_span=5, tol=1e-7):
    """``h^l(q)`` stays fixed by ``f`` and inside the hull of the joint orbit of ``p``.

    The joint orbit is sampled as ``h^j f^i (p)`` with ``|j| <= h_span``
    (forward only when ``h`` has no inverse).
    """
    q0, p0 = _pt(q), _pt(p)
    k = max(2, samples // (2 * h_span + 1))
    fwd = [p0[None, :]]
    cur = p0[None, :]
    for _ in range(k - 1):
        cur = f(cur)
        fwd.append(cur)
    base = np.vstack(fwd)
    layers = [base]
    if h.invertible:
        hi, up, down = h.inverse(), base, base
        for _ in range(h_span):
            up, down = h(up), hi(down)
            layers.extend([up, down])
    else:
        up = base
        for _ in range(2 * h_span):
            up = h(up)
            layers.append(up)
    hull = convex_hull(np.vstack(layers))
    entries = []
    ok = True
    for ell in ell_range:
        if ell < 0 and not h.invertible:
            entries.append({"ell": int(ell), "skipped": "no inverse"})
            continue
        x = h.iterate(q0, int(ell))
        res = float(np.hypot(*(f(x) - x)))
        member = point_in_hull(hull, x)
        passed = res < tol and member != "outside"
        ok &= passed
        entries.append({"ell": int(ell), "point": [float(x[0]), float(x[1])], "residual": res,
                        "membership": member, "passed": passed})
    return {"passed": bool(ok), "entries": entries, "hull": hull.to_dict()}
