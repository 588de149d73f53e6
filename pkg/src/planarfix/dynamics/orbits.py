"""Orbits, orbit curves, near-identity estimates and the runtime checks
that stand in for the small-neighbourhood hypotheses."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from planarfix import kernels
from planarfix.errors import (
    ConsecutiveDuplicate,
    DegenerateOrbitCurve,
    FixedSeed,
    NonFiniteIterate,
    NonFiniteValue,
)
from planarfix.geometry import (
    DEFAULT_TOLERANCE,
    ClosedPolyCurve,
    Point2,
    _raw_intersection,
    _vector_angle,
    as_point,
)

FIXED_TOL = 1e-9


@dataclass(frozen=True)
class Box:
    x0: float
    y0: float
    x1: float
    y1: float

    def contains(self, pts, pad=0.0):
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        return ((pts[:, 0] >= self.x0 - pad) & (pts[:, 0] <= self.x1 + pad)
                & (pts[:, 1] >= self.y0 - pad) & (pts[:, 1] <= self.y1 + pad))

    def grid(self, step):
        nx = max(2, int(math.ceil((self.x1 - self.x0) / step)) + 1)
        ny = max(2, int(math.ceil((self.y1 - self.y0) / step)) + 1)
        gx, gy = np.meshgrid(np.linspace(self.x0, self.x1, nx), np.linspace(self.y0, self.y1, ny))
        return np.column_stack([gx.ravel(), gy.ravel()])

    def to_dict(self):
        return {"box": [self.x0, self.y0, self.x1, self.y1]}


@dataclass(frozen=True)
class Disk:
    center: tuple
    radius: float

    def contains(self, pts, pad=0.0):
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        c = np.asarray(self.center, dtype=float)
        return np.hypot(*(pts - c).T) <= self.radius + pad

    def grid(self, step):
        c = np.asarray(self.center, dtype=float)
        r = self.radius
        box = Box(c[0] - r, c[1] - r, c[0] + r, c[1] + r)
        pts = box.grid(step)
        pts = pts[self.contains(pts, 1e-12)]
        k = max(16, int(math.ceil(2 * math.pi * r / step)))
        t = 2 * math.pi * np.arange(k) / k
        rim = c + r * np.column_stack([np.cos(t), np.sin(t)])
        return np.vstack([pts, rim])

    def to_dict(self):
        return {"disk": {"center": list(self.center), "radius": self.radius}}


UNIT_BOX = Box(-1.0, -1.0, 1.0, 1.0)
DEFAULT_DOMAIN = Box(-10.0, -10.0, 10.0, 10.0)


def _pt(p):
    return np.asarray(tuple(as_point(p)), dtype=float)


def orbit_array(f, p, count):
    """``(count, 2)`` array of ``f(p), ..., f^count(p)``."""
    out = np.empty((int(count), 2))
    x = _pt(p)[None, :]
    for k in range(int(count)):
        x = f.func(x)
        if not np.all(np.isfinite(x)):
            raise NonFiniteIterate(f"iterate {k + 1} of {f.label} is not finite")
        out[k] = x[0]
    return out


def orbit(f, p, count):
    """The forward iterates ``[f(p), ..., f^count(p)]``."""
    if count < 1:
        raise ValueError("count must be at least 1")
    return [Point2(*row) for row in orbit_array(f, p, count)]


@dataclass(frozen=True)
class OrbitCurve:
    base_point: Point2
    map: object
    length: int
    curve: ClosedPolyCurve


def orbit_curve(f, p, m, tolerance=DEFAULT_TOLERANCE):
    """Closed polygon through ``f(p), ..., f^m(p)``."""
    if m < 2:
        raise ValueError("an orbit curve needs m >= 2")
    p = as_point(p)
    step = float(np.hypot(*(f(_pt(p)) - _pt(p))))
    if step <= tolerance:
        raise FixedSeed(f"{f.label} fixes the seed (displacement {step:.3g})")
    pts = orbit_array(f, p, m)
    try:
        curve = ClosedPolyCurve(tuple(Point2(*row) for row in pts), tolerance)
    except ConsecutiveDuplicate as exc:
        raise DegenerateOrbitCurve(f"orbit curve has repeated consecutive vertices at {exc.index}") from exc
    return OrbitCurve(p, f, int(m), curve)


def return_distances(f, p, max_iter):
    """``|f^n(p) - p|`` for ``n = 1 .. max_iter``."""
    pts = orbit_array(f, p, max_iter)
    return np.hypot(*(pts - _pt(p)).T)


def return_times(f, p, tol, max_iter):
    """All ``n <= max_iter`` with ``|f^n(p) - p| < tol``, ascending."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    d = return_distances(f, p, max_iter)
    return [int(n) + 1 for n in np.nonzero(d < tol)[0]]


def record_returns(distances, threshold):
    """Return times that come closer than ``threshold`` and than any earlier return."""
    out = []
    best = threshold
    for n, d in enumerate(distances, start=1):
        if d < threshold and d <= best * (1 + 1e-12) + 1e-15:
            out.append(n)
            best = min(best, d)
    return out


# -- C1 estimates -------------------------------------------------------------

def operator_norm(m):
    """Largest singular value of each 2x2 matrix in ``(N, 2, 2)``."""
    m = np.asarray(m, dtype=float)
    frob = (m * m).sum(axis=(1, 2))
    det = m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]
    disc = np.sqrt(np.maximum(frob * frob - 4 * det * det, 0.0))
    return np.sqrt(0.5 * (frob + disc))


@dataclass(frozen=True)
class C1Estimate:
    domain: object
    grid_step: float
    sup_displacement: float
    sup_derivative_deviation: float
    samples: int

    @property
    def value(self):
        return max(self.sup_displacement, self.sup_derivative_deviation)

    def to_dict(self):
        return {
            "domain": self.domain.to_dict(),
            "grid_step": self.grid_step,
            "sup_displacement": self.sup_displacement,
            "sup_derivative_deviation": self.sup_derivative_deviation,
            "samples": self.samples,
        }


def estimate_c1_distance(f, domain=UNIT_BOX, grid_step=0.05):
    """Grid sups of ``|f(x) - x|`` and ``|Df(x) - Id|`` over ``domain``."""
    if not grid_step > 0:
        raise ValueError("grid_step must be positive")
    pts = domain.grid(grid_step)
    disp = np.hypot(*(f(pts) - pts).T)
    dev = operator_norm(f.jacobian(pts) - np.eye(2))
    if not (np.all(np.isfinite(disp)) and np.all(np.isfinite(dev))):
        raise NonFiniteValue(f"{f.label} is not finite on the domain")
    return C1Estimate(domain, float(grid_step), float(disp.max()), float(dev.max()), len(pts))


# -- runtime checks -----------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    passed: bool
    value: float
    witness: Optional[tuple] = None
    detail: str = ""

    def to_dict(self):
        return {"passed": self.passed, "value": self.value,
                "witness": None if self.witness is None else list(self.witness),
                "detail": self.detail}


def disk_samples(center, radius, count):
    """Sunflower samples of a closed disk, rim included."""
    c = np.asarray(center, dtype=float)
    k = np.arange(count)
    r = radius * np.sqrt((k + 0.5) / count)
    t = k * math.pi * (3.0 - math.sqrt(5.0))
    inner = c + np.column_stack([r * np.cos(t), r * np.sin(t)])
    rim_t = 2 * math.pi * np.arange(max(16, count // 8)) / max(16, count // 8)
    rim = c + radius * np.column_stack([np.cos(rim_t), np.sin(rim_t)])
    return np.vstack([c[None, :], inner, rim])


def check_B1(f, p, samples=2000, tol=FIXED_TOL):
    """No fixed point in the closed ball about ``p`` of radius ``4 |f(p) - p|``.

    Samples the ball, and also looks for fixed points certified by a
    nonzero displacement degree on its rim.
    """
    from planarfix.dynamics.degree import displacement_degree, search_fixed_point

    c = _pt(p)
    radius = 4.0 * float(np.hypot(*(f(c) - c)))
    pts = disk_samples(c, radius, samples)
    disp = np.hypot(*(f(pts) - pts).T)
    k = int(np.argmin(disp))
    if disp[k] <= tol:
        return CheckResult(False, float(disp[k]), tuple(pts[k]), "sampled fixed point")
    t = 2 * math.pi * np.arange(256) / 256
    rim = c + radius * np.column_stack([np.cos(t), np.sin(t)])
    deg, _ = displacement_degree(f, rim, margin=0.0)
    if deg != 0:
        found = search_fixed_point(f, rim, tol)
        return CheckResult(False, float(found.residual), tuple(found.point.as_tuple()),
                           f"displacement degree {deg} on the rim")
    return CheckResult(True, float(disp[k]), None, f"min displacement over {len(pts)} samples")


def check_B2(f, p, m):
    """Worst angle between intersecting segments among the first ``m`` orbit segments."""
    pts = orbit_array(f, p, m + 1)
    seg = np.hstack([pts[:-1], pts[1:]])
    keep = np.hypot(seg[:, 2] - seg[:, 0], seg[:, 3] - seg[:, 1]) > DEFAULT_TOLERANCE
    seg = seg[keep]
    worst, witness = 0.0, None
    for i, j in kernels.candidate_pairs(seg, DEFAULT_TOLERANCE):
        res = _raw_intersection((seg[i, 0], seg[i, 1]), (seg[i, 2], seg[i, 3]),
                                (seg[j, 0], seg[j, 1]), (seg[j, 2], seg[j, 3]), DEFAULT_TOLERANCE)
        if res[0] == "none":
            continue
        ang = _vector_angle(seg[i, 2:] - seg[i, :2], seg[j, 2:] - seg[j, :2])
        if ang > worst:
            worst, witness = ang, (int(i), int(j))
    return CheckResult(worst < 0.25 * math.pi, float(worst), witness, f"{len(seg)} segments")


def check_segment_estimate(f, domain=UNIT_BOX, K=3.0, pairs=10000, max_length=None, seed=0,
                           positions=33):
    """``|f(l) - f(p)| <= K |f(q) - f(p)|`` for ``l`` on ``[p, q]``.

    Each random pair is tested at ``positions`` evenly spaced points of the
    segment. ``max_length`` bounds ``|q - p|`` (default: half the domain
    width).
    """
    if not K > 1:
        raise ValueError("K must exceed 1")
    rng = np.random.default_rng(seed)
    if isinstance(domain, Disk):
        lo = np.asarray(domain.center) - domain.radius
        hi = np.asarray(domain.center) + domain.radius
    else:
        lo, hi = np.array([domain.x0, domain.y0]), np.array([domain.x1, domain.y1])
    if max_length is None:
        max_length = 0.5 * float(np.min(hi - lo))
    p = rng.uniform(lo, hi, size=(pairs, 2))
    ang = rng.uniform(0, 2 * math.pi, size=pairs)
    r = rng.uniform(0, max_length, size=pairs)
    q = p + r[:, None] * np.column_stack([np.cos(ang), np.sin(ang)])
    fp, fq = f(p), f(q)
    base = np.hypot(*(fq - fp).T)
    worst, witness = 0.0, None
    for t in np.linspace(0.0, 1.0, positions):
        lam = p + t * (q - p)
        num = np.hypot(*(f(lam) - fp).T)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(base > 0, num / base, 0.0)
        k = int(np.argmax(ratio))
        if ratio[k] > worst:
            worst = float(ratio[k])
            witness = (float(p[k, 0]), float(p[k, 1]), float(q[k, 0]), float(q[k, 1]), float(t))
    return CheckResult(worst <= K, worst, witness, f"{pairs * positions} triples")
