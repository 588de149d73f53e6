"""Fixed points located by the degree of the displacement field.

The winding of ``x -> f(x) - x`` along a closed curve counts fixed points
inside it with multiplicity. A nonzero value certifies at least one; a
quadtree search keeps only cells whose own boundary winding is nonzero and
closes in on a fixed point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from planarfix.errors import BoundaryFixedPoint, SearchExhausted, ZeroDegree
from planarfix.geometry import Point2
from planarfix.winding import winding_numbers

SAMPLES_PER_SEGMENT = 64
_SPLITS = (0.5, 0.45, 0.55, 0.4, 0.6, 0.35, 0.65, 0.3, 0.7, 0.25, 0.75)
_LINE_RATIO = 1e-4


def _wrap(a):
    return (a + math.pi) % (2 * math.pi) - math.pi


def _boundary_points(coords, s):
    n = len(coords)
    edge = np.floor(s).astype(int) % n
    t = (s - np.floor(s))[:, None]
    a = coords[edge]
    b = coords[(edge + 1) % n]
    return a + t * (b - a)


def displacement_degree(f, coords, samples=SAMPLES_PER_SEGMENT, margin=0.0, rounds=40):
    """Winding of ``f(x) - x`` along the closed polygon ``coords``.

    Returns ``(degree, min_norm)``. Samples are added wherever two
    consecutive displacement directions differ by more than a right angle.
    Raises ``BoundaryFixedPoint`` when the displacement falls to ``margin``
    or below, or when refinement cannot resolve the winding.
    """
    coords = np.asarray(coords, dtype=float)
    n = len(coords)
    s = (np.arange(n * samples) / samples).astype(float)
    pts = _boundary_points(coords, s)
    disp = f(pts) - pts
    for _ in range(rounds):
        ang = np.arctan2(disp[:, 1], disp[:, 0])
        diff = _wrap(np.diff(np.append(ang, ang[0])))
        bad = np.nonzero(np.abs(diff) > 0.5 * math.pi)[0]
        if len(bad) == 0:
            break
        nxt = np.append(s[1:], s[0] + n)
        mids = 0.5 * (s[bad] + nxt[bad])
        mids = np.where(mids >= n, mids - n, mids)
        mp = _boundary_points(coords, mids)
        s = np.concatenate([s, mids])
        disp = np.vstack([disp, f(mp) - mp])
        order = np.argsort(s, kind="stable")
        s, disp = s[order], disp[order]
    else:
        raise BoundaryFixedPoint("displacement direction could not be resolved along the curve")
    norms = np.hypot(disp[:, 0], disp[:, 1])
    min_norm = float(norms.min())
    if min_norm <= margin:
        raise BoundaryFixedPoint(f"displacement {min_norm:.3g} on the curve is below the margin")
    ang = np.arctan2(disp[:, 1], disp[:, 0])
    total = _wrap(np.diff(np.append(ang, ang[0]))).sum()
    return int(round(total / (2 * math.pi))), min_norm


@dataclass(frozen=True)
class FixedPointResult:
    point: Point2
    residual: float
    degree: int
    inside: bool
    cells: int
    cell_size: float

    def to_dict(self):
        return {"point": [self.point.x, self.point.y], "residual": self.residual,
                "degree": self.degree, "inside": self.inside, "cells": self.cells,
                "cell_size": self.cell_size}


def _square(x0, y0, x1, y1):
    return np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]])


def _cell_degree(f, cell):
    try:
        deg, _ = displacement_degree(f, _square(*cell), samples=16)
    except BoundaryFixedPoint:
        return None
    return deg


def _line_ok(f, a, b, scale):
    t = np.linspace(0.0, 1.0, 65)[:, None]
    pts = a + t * (b - a)
    return np.hypot(*(f(pts) - pts).T).min() > _LINE_RATIO * scale


def _split(f, cell):
    x0, y0, x1, y1 = cell
    corners = _square(*cell)
    scale = float(np.hypot(*(f(corners) - corners).T).max())
    xs = ys = None
    for fr in _SPLITS:
        xm = x0 + fr * (x1 - x0)
        if _line_ok(f, np.array([xm, y0]), np.array([xm, y1]), scale):
            xs = xm
            break
    for fr in _SPLITS:
        ym = y0 + fr * (y1 - y0)
        if _line_ok(f, np.array([x0, ym]), np.array([x1, ym]), scale):
            ys = ym
            break
    if xs is None:
        xs = 0.5 * (x0 + x1)
    if ys is None:
        ys = 0.5 * (y0 + y1)
    return [(x0, y0, xs, ys), (xs, y0, x1, ys), (xs, ys, x1, y1), (x0, ys, xs, y1)]


def _newton(f, q):
    jac = f.jacobian(q) - np.eye(2)
    try:
        step = np.linalg.solve(jac, f(q) - q)
    except np.linalg.LinAlgError:
        return q
    return q - step


def search_fixed_point(f, coords, tol=1e-9, max_cells=200000):
    """Quadtree search for a fixed point near the region bounded by ``coords``.

    Cells whose centre lies inside ``coords`` are explored first.
    """
    coords = np.asarray(coords, dtype=float)
    lo, hi = coords.min(axis=0), coords.max(axis=0)
    centre = 0.5 * (lo + hi)
    half = 0.5 * float(max(hi - lo)) * 1.0313 + 1e-12
    root = (centre[0] - half * 0.9871, centre[1] - half * 1.0127,
            centre[0] + half * 1.0129, centre[1] + half * 0.9873)
    target = 0.1 * tol
    stack = []
    deg = _cell_degree(f, root)
    if deg:
        stack.append(root)
    else:
        xs = np.linspace(root[0], root[2], 9)
        ys = np.linspace(root[1], root[3], 9)
        for i in range(8):
            for j in range(8):
                cell = (xs[i], ys[j], xs[i + 1], ys[j + 1])
                if _cell_degree(f, cell):
                    stack.append(cell)
    visited = 0
    tile_tol = max(tol, 1e-300)
    while stack and visited < max_cells:
        cell = stack.pop()
        visited += 1
        size = math.hypot(cell[2] - cell[0], cell[3] - cell[1])
        if size < target:
            q = np.array([0.5 * (cell[0] + cell[2]), 0.5 * (cell[1] + cell[3])])
            qn = _newton(f, q)
            if np.all(np.isfinite(qn)) and np.hypot(*(qn - q)) < size:
                if np.hypot(*(f(qn) - qn)) < np.hypot(*(f(q) - q)):
                    q = qn
            residual = float(np.hypot(*(f(q) - q)))
            inside = bool(_inside(coords, q, tile_tol))
            return FixedPointResult(Point2(*q), residual, 0, inside, visited, size)
        children = []
        for child in _split(f, cell):
            d = _cell_degree(f, child)
            if d:
                c = np.array([0.5 * (child[0] + child[2]), 0.5 * (child[1] + child[3])])
                children.append((_inside(coords, c, tile_tol), child))
        # push outside-first so inside cells are popped first
        children.sort(key=lambda item: item[0])
        stack.extend(child for _, child in children)
    raise SearchExhausted(f"no fixed point isolated after {visited} cells")


def _inside(coords, q, tol):
    vals, dist = winding_numbers(coords, np.asarray(q, dtype=float)[None, :], tol)
    return bool(vals[0] != 0 and dist[0] > tol)


def fixed_point_in_disk(f, loop, tol=1e-9, margin=None):
    """A fixed point of ``f`` inside the disk bounded by ``loop``.

    The displacement degree along the loop must be nonzero; otherwise
    ``ZeroDegree`` is raised since the method then proves nothing.
    """
    coords = np.asarray(getattr(loop, "coords", loop), dtype=float)
    pts = coords
    scale = float(np.hypot(*(f(pts) - pts).T).max())
    if margin is None:
        margin = max(tol, 1e-9 * scale)
    deg, _ = displacement_degree(f, coords, margin=margin)
    if deg == 0:
        raise ZeroDegree(f"displacement of {f.label} has degree 0 along the loop")
    found = search_fixed_point(f, coords, tol)
    return FixedPointResult(found.point, found.residual, deg, found.inside, found.cells,
                            found.cell_size)
