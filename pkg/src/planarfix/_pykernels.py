"""Pure numpy implementations of the hot geometric kernels.

Every function here has a twin in ``_ckernels.pyx`` with identical inputs,
outputs and semantics; ``planarfix.kernels`` picks one at import time.
"""
import math

import numpy as np

_CHUNK = 512


def _boxes(seg, pad):
    xmin = np.minimum(seg[:, 0], seg[:, 2]) - pad
    xmax = np.maximum(seg[:, 0], seg[:, 2]) + pad
    ymin = np.minimum(seg[:, 1], seg[:, 3]) - pad
    ymax = np.maximum(seg[:, 1], seg[:, 3]) + pad
    return xmin, xmax, ymin, ymax


def candidate_pairs(seg, pad):
    """Index pairs ``(i, j)``, ``i < j``, of segments whose padded boxes overlap.

    ``seg`` is an ``(n, 4)`` array of ``x0, y0, x1, y1`` rows. The result is
    an ``(k, 2)`` int64 array sorted lexicographically.
    """
    seg = np.ascontiguousarray(seg, dtype=np.float64)
    n = len(seg)
    if n < 2:
        return np.empty((0, 2), dtype=np.int64)
    xmin, xmax, ymin, ymax = _boxes(seg, pad)
    found = []
    for start in range(0, n, _CHUNK):
        stop = min(n, start + _CHUNK)
        i = np.arange(start, stop)
        hit = (
            (xmin[i, None] <= xmax[None, :])
            & (xmin[None, :] <= xmax[i, None])
            & (ymin[i, None] <= ymax[None, :])
            & (ymin[None, :] <= ymax[i, None])
        )
        hit &= i[:, None] < np.arange(n)[None, :]
        ii, jj = np.nonzero(hit)
        if len(ii):
            found.append(np.stack([i[ii], jj], axis=1))
    if not found:
        return np.empty((0, 2), dtype=np.int64)
    pairs = np.concatenate(found).astype(np.int64)
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    return pairs[order]


def winding_turns(vertices, queries):
    """Total signed turning of ``v - q`` around the closed polygon, in turns."""
    v = np.ascontiguousarray(vertices, dtype=np.float64)
    q = np.ascontiguousarray(queries, dtype=np.float64).reshape(-1, 2)
    a = v
    b = np.roll(v, -1, axis=0)
    out = np.empty(len(q))
    for start in range(0, len(q), _CHUNK):
        qq = q[start:start + _CHUNK]
        ax = a[None, :, 0] - qq[:, None, 0]
        ay = a[None, :, 1] - qq[:, None, 1]
        bx = b[None, :, 0] - qq[:, None, 0]
        by = b[None, :, 1] - qq[:, None, 1]
        ang = np.arctan2(ax * by - ay * bx, ax * bx + ay * by)
        out[start:start + _CHUNK] = ang.sum(axis=1) / (2.0 * math.pi)
    return out


def ray_crossings(vertices, queries, direction, eps):
    """Signed crossings of the ray ``q + s * direction`` (s > 0) with the polygon.

    Returns ``(counts, degenerate)``. A query is flagged degenerate when the
    ray passes within ``eps`` of a vertex, or the crossing point is within
    ``eps`` of the query itself.
    """
    v = np.ascontiguousarray(vertices, dtype=np.float64)
    q = np.ascontiguousarray(queries, dtype=np.float64).reshape(-1, 2)
    dx, dy = float(direction[0]), float(direction[1])
    counts = np.zeros(len(q), dtype=np.int64)
    degenerate = np.zeros(len(q), dtype=bool)
    for start in range(0, len(q), _CHUNK):
        qq = q[start:start + _CHUNK]
        rx = v[None, :, 0] - qq[:, None, 0]
        ry = v[None, :, 1] - qq[:, None, 1]
        # frame where the ray is the positive x axis
        xs = rx * dx + ry * dy
        ys = dx * ry - dy * rx
        on_ray = (np.abs(ys) <= eps) & (xs >= -eps)
        deg = on_ray.any(axis=1)
        xa, ya = xs, ys
        xb, yb = np.roll(xs, -1, axis=1), np.roll(ys, -1, axis=1)
        straddle = (ya > 0) != (yb > 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            xcross = xa + (xb - xa) * ya / (ya - yb)
        straddle &= ~on_ray & ~np.roll(on_ray, -1, axis=1)
        near = straddle & (np.abs(xcross) <= eps)
        deg |= near.any(axis=1)
        hit = straddle & (xcross > eps)
        up = hit & (ya < 0) & (yb > 0)
        down = hit & (ya > 0) & (yb < 0)
        counts[start:start + _CHUNK] = up.sum(axis=1) - down.sum(axis=1)
        degenerate[start:start + _CHUNK] = deg
    return counts, degenerate


def min_distance(vertices, queries):
    """Distance from each query to the closed polygon."""
    v = np.ascontiguousarray(vertices, dtype=np.float64)
    q = np.ascontiguousarray(queries, dtype=np.float64).reshape(-1, 2)
    a = v
    d = np.roll(v, -1, axis=0) - v
    dd = (d * d).sum(axis=1)
    dd_safe = np.where(dd > 0, dd, 1.0)
    out = np.empty(len(q))
    for start in range(0, len(q), _CHUNK):
        qq = q[start:start + _CHUNK]
        wx = qq[:, None, 0] - a[None, :, 0]
        wy = qq[:, None, 1] - a[None, :, 1]
        t = (wx * d[None, :, 0] + wy * d[None, :, 1]) / dd_safe[None, :]
        t = np.clip(t, 0.0, 1.0)
        ex = wx - t * d[None, :, 0]
        ey = wy - t * d[None, :, 1]
        out[start:start + _CHUNK] = np.sqrt(ex * ex + ey * ey).min(axis=1)
    return out
