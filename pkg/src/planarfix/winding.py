"""Winding numbers of closed polygons.

The primary method sums signed angles and rounds; the oracle counts signed
crossings of a ray. The two share no code beyond the distance check, so
each guards the other in the tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from planarfix import kernels
from planarfix.errors import DegenerateProbe, NumericallyAmbiguous, PointOnCurve
from planarfix.geometry import as_point

RESIDUAL_LIMIT = 0.25
_GOLDEN = math.pi * (3.0 - math.sqrt(5.0))


@dataclass(frozen=True)
class IndexValue:
    value: int
    distance_to_curve: float

    def __int__(self):
        return self.value


def _query(q):
    return np.asarray(tuple(as_point(q)), dtype=float)[None, :]


def distance_to_curve(curve, q):
    return float(kernels.min_distance(curve.coords, _query(q))[0])


def winding_number(curve, q):
    """Index of ``q`` with respect to ``curve``."""
    qq = _query(q)
    dist = float(kernels.min_distance(curve.coords, qq)[0])
    if dist <= curve.tolerance:
        raise PointOnCurve(dist, curve.tolerance)
    turns = float(kernels.winding_turns(curve.coords, qq)[0])
    value = round(turns)
    if abs(turns - value) >= RESIDUAL_LIMIT:
        raise NumericallyAmbiguous(turns)
    return IndexValue(int(value), dist)


def winding_numbers(coords, queries, tolerance):
    """Bulk indices for many queries against one polygon.

    Returns ``(values, distances)``. Queries within ``tolerance`` of the
    polygon get value 0; callers mask them with ``distances``.
    """
    coords = np.asarray(coords, dtype=float)
    queries = np.asarray(queries, dtype=float).reshape(-1, 2)
    dist = kernels.min_distance(coords, queries)
    turns = kernels.winding_turns(coords, queries)
    values = np.rint(turns).astype(np.int64)
    off = dist > tolerance
    bad = off & (np.abs(turns - values) >= RESIDUAL_LIMIT)
    if bad.any():
        raise NumericallyAmbiguous(float(turns[np.argmax(bad)]))
    values[~off] = 0
    return values, dist


def winding_number_oracle(curve, q, probe_direction=(1.0, 0.0), retries=32):
    """Signed ray-crossing count.

    When the ray grazes a vertex the direction is turned by the golden angle
    and the count repeated, at most ``retries`` times.
    """
    qq = _query(q)
    dist = float(kernels.min_distance(curve.coords, qq)[0])
    if dist <= curve.tolerance:
        raise PointOnCurve(dist, curve.tolerance)
    d = np.asarray(probe_direction, dtype=float)
    base = math.atan2(d[1], d[0])
    for attempt in range(retries + 1):
        ang = base + attempt * _GOLDEN
        counts, degenerate = kernels.ray_crossings(
            curve.coords, qq, (math.cos(ang), math.sin(ang)), curve.tolerance)
        if not degenerate[0]:
            return IndexValue(int(counts[0]), dist)
    raise DegenerateProbe(f"no transversal ray found after {retries} rotations")


def covering_counts(coords, points, tolerance):
    """Vectorized covering multiplicity of ``points`` by a closed polygon."""
    v = np.asarray(coords, dtype=float)
    x = np.asarray(points, dtype=float).reshape(-1, 2)
    a = v
    d = np.roll(v, -1, axis=0) - v
    dd = (d * d).sum(axis=1)
    out = np.zeros(len(x), dtype=np.int64)
    for start in range(0, len(x), 256):
        xx = x[start:start + 256]
        wx = xx[:, None, 0] - a[None, :, 0]
        wy = xx[:, None, 1] - a[None, :, 1]
        t = (wx * d[None, :, 0] + wy * d[None, :, 1]) / dd[None, :]
        tc = np.clip(t, 0.0, 1.0)
        seg_dist = np.hypot(wx - tc * d[None, :, 0], wy - tc * d[None, :, 1])
        at_vertex = np.hypot(wx, wy) <= tolerance
        at_next = np.roll(at_vertex, -1, axis=1)
        interior = (seg_dist <= tolerance) & ~at_vertex & ~at_next
        out[start:start + 256] = interior.sum(axis=1) + at_vertex.sum(axis=1)
    return out


def covering_multiplicity(curve, x):
    """How many passes of ``curve`` go through ``x``.

    A point interior to a segment counts once per segment; a vertex counts
    once per visit rather than once per incident segment.
    """
    return int(covering_counts(curve.coords, _query(x), curve.tolerance)[0])
