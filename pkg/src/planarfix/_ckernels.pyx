# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the kernels in ``_pykernels``.

Same signatures, same results; the numpy module documents the semantics.
"""
import numpy as np

from libc.math cimport atan2, sqrt, fabs, M_PI


def candidate_pairs(seg_in, double pad):
    cdef const double[:, ::1] seg = np.ascontiguousarray(seg_in, dtype=np.float64)
    cdef Py_ssize_t n = seg.shape[0]
    if n < 2:
        return np.empty((0, 2), dtype=np.int64)
    xmin_a = np.minimum(seg_in[:, 0], seg_in[:, 2]) - pad
    cdef double[::1] xmin = np.ascontiguousarray(xmin_a, dtype=np.float64)
    cdef double[::1] xmax = np.ascontiguousarray(np.maximum(seg_in[:, 0], seg_in[:, 2]) + pad, dtype=np.float64)
    cdef double[::1] ymin = np.ascontiguousarray(np.minimum(seg_in[:, 1], seg_in[:, 3]) - pad, dtype=np.float64)
    cdef double[::1] ymax = np.ascontiguousarray(np.maximum(seg_in[:, 1], seg_in[:, 3]) + pad, dtype=np.float64)
    cdef long long[::1] order = np.argsort(xmin_a, kind="stable").astype(np.int64)
    cdef Py_ssize_t cap = 4 * n + 16
    out_a = np.empty((cap, 2), dtype=np.int64)
    cdef long long[:, ::1] out = out_a
    cdef Py_ssize_t k = 0, oa, ob
    cdef long long i, j
    for oa in range(n):
        i = order[oa]
        for ob in range(oa + 1, n):
            j = order[ob]
            if xmin[j] > xmax[i]:
                break
            if ymin[i] <= ymax[j] and ymin[j] <= ymax[i]:
                if k == cap:
                    cap *= 2
                    out_a = np.resize(out_a, (cap, 2))
                    out = out_a
                if i < j:
                    out[k, 0] = i
                    out[k, 1] = j
                else:
                    out[k, 0] = j
                    out[k, 1] = i
                k += 1
    pairs = out_a[:k]
    idx = np.lexsort((pairs[:, 1], pairs[:, 0]))
    return np.ascontiguousarray(pairs[idx])


def winding_turns(vertices, queries):
    cdef const double[:, ::1] v = np.ascontiguousarray(vertices, dtype=np.float64)
    qa = np.ascontiguousarray(queries, dtype=np.float64).reshape(-1, 2)
    cdef const double[:, ::1] q = qa
    cdef Py_ssize_t n = v.shape[0], nq = q.shape[0], s, t, u
    out_a = np.empty(nq, dtype=np.float64)
    cdef double[::1] out = out_a
    cdef double qx, qy, ax, ay, bx, by, total
    for s in range(nq):
        qx = q[s, 0]
        qy = q[s, 1]
        total = 0.0
        for t in range(n):
            u = t + 1
            if u == n:
                u = 0
            ax = v[t, 0] - qx
            ay = v[t, 1] - qy
            bx = v[u, 0] - qx
            by = v[u, 1] - qy
            total += atan2(ax * by - ay * bx, ax * bx + ay * by)
        out[s] = total / (2.0 * M_PI)
    return out_a


def ray_crossings(vertices, queries, direction, double eps):
    cdef const double[:, ::1] v = np.ascontiguousarray(vertices, dtype=np.float64)
    qa = np.ascontiguousarray(queries, dtype=np.float64).reshape(-1, 2)
    cdef const double[:, ::1] q = qa
    cdef double dx = float(direction[0]), dy = float(direction[1])
    cdef Py_ssize_t n = v.shape[0], nq = q.shape[0], s, t, u
    counts_a = np.zeros(nq, dtype=np.int64)
    deg_a = np.zeros(nq, dtype=bool)
    cdef long long[::1] counts = counts_a
    cdef unsigned char[::1] deg = deg_a.view(np.uint8)
    xs_a = np.empty(n, dtype=np.float64)
    ys_a = np.empty(n, dtype=np.float64)
    onr_a = np.empty(n, dtype=np.uint8)
    cdef double[::1] xs = xs_a
    cdef double[::1] ys = ys_a
    cdef unsigned char[::1] onr = onr_a
    cdef double rx, ry, xa, ya, xb, yb, xc
    cdef long long c
    cdef bint d
    for s in range(nq):
        d = False
        for t in range(n):
            rx = v[t, 0] - q[s, 0]
            ry = v[t, 1] - q[s, 1]
            xs[t] = rx * dx + ry * dy
            ys[t] = dx * ry - dy * rx
            onr[t] = fabs(ys[t]) <= eps and xs[t] >= -eps
            if onr[t]:
                d = True
        c = 0
        for t in range(n):
            u = t + 1
            if u == n:
                u = 0
            ya = ys[t]
            yb = ys[u]
            if (ya > 0) == (yb > 0):
                continue
            if onr[t] or onr[u]:
                continue
            xa = xs[t]
            xb = xs[u]
            xc = xa + (xb - xa) * ya / (ya - yb)
            if fabs(xc) <= eps:
                d = True
                continue
            if xc > eps:
                if ya < 0 and yb > 0:
                    c += 1
                elif ya > 0 and yb < 0:
                    c -= 1
        counts[s] = c
        deg[s] = d
    return counts_a, deg_a


def min_distance(vertices, queries):
    cdef const double[:, ::1] v = np.ascontiguousarray(vertices, dtype=np.float64)
    qa = np.ascontiguousarray(queries, dtype=np.float64).reshape(-1, 2)
    cdef const double[:, ::1] q = qa
    cdef Py_ssize_t n = v.shape[0], nq = q.shape[0], s, t, u
    out_a = np.empty(nq, dtype=np.float64)
    cdef double[::1] out = out_a
    cdef double ddx, ddy, dd, wx, wy, tt, ex, ey, dist, best
    for s in range(nq):
        best = 1e308
        for t in range(n):
            u = t + 1
            if u == n:
                u = 0
            ddx = v[u, 0] - v[t, 0]
            ddy = v[u, 1] - v[t, 1]
            dd = ddx * ddx + ddy * ddy
            if dd <= 0:
                dd = 1.0
            wx = q[s, 0] - v[t, 0]
            wy = q[s, 1] - v[t, 1]
            tt = (wx * ddx + wy * ddy) / dd
            if tt < 0.0:
                tt = 0.0
            elif tt > 1.0:
                tt = 1.0
            ex = wx - tt * ddx
            ey = wy - tt * ddy
            dist = sqrt(ex * ex + ey * ey)
            if dist < best:
                best = dist
        out[s] = best
    return out_a
