"""Compare the compiled and numpy kernel backends.

Run ``python3 benchmarks/bench_kernels.py``. Each kernel is timed on the
same random input with both backends; results are checked to agree before
timing is reported.
"""
from __future__ import annotations

import argparse
import math
import timeit

import numpy as np

from planarfix import _pykernels

try:
    from planarfix import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def tangled_polygon(n, rng):
    """Closed polygon that winds several times, with many crossings."""
    t = np.sort(rng.uniform(0, 6 * math.pi, n))
    r = 1.0 + 0.3 * np.sin(7 * t) + 0.05 * rng.standard_normal(n)
    return np.ascontiguousarray(np.column_stack([r * np.cos(t), r * np.sin(t)]))


def cases(n_vertices, n_queries, seed):
    rng = np.random.default_rng(seed)
    poly = tangled_polygon(n_vertices, rng)
    seg = np.ascontiguousarray(np.hstack([poly, np.roll(poly, -1, axis=0)]))
    queries = np.ascontiguousarray(rng.uniform(-1.5, 1.5, size=(n_queries, 2)))
    direction = (math.cos(0.3), math.sin(0.3))
    return {
        "candidate_pairs": (lambda m: m.candidate_pairs(seg, 1e-9)),
        "winding_turns": (lambda m: m.winding_turns(poly, queries)),
        "ray_crossings": (lambda m: m.ray_crossings(poly, queries, direction, 1e-12)),
        "min_distance": (lambda m: m.min_distance(poly, queries)),
    }


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    a, b = np.asarray(a), np.asarray(b)
    if a.dtype.kind == "f":
        return a.shape == b.shape and np.allclose(a, b, rtol=1e-9, atol=1e-12)
    return a.shape == b.shape and np.array_equal(a, b)


def run(n_vertices=2000, n_queries=2000, repeat=5, seed=0):
    rows = []
    for name, call in cases(n_vertices, n_queries, seed).items():
        py_time = min(timeit.repeat(lambda: call(_pykernels), number=1, repeat=repeat))
        if _ckernels is None:
            rows.append((name, py_time, None, None))
            continue
        if not _same(call(_pykernels), call(_ckernels)):
            raise AssertionError(f"backends disagree on {name}")
        c_time = min(timeit.repeat(lambda: call(_ckernels), number=1, repeat=repeat))
        rows.append((name, py_time, c_time, py_time / c_time))
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vertices", type=int, default=2000)
    ap.add_argument("--queries", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rows = run(args.vertices, args.queries, args.repeat, args.seed)
    print(f"{args.vertices} vertices, {args.queries} queries, best of {args.repeat}")
    print(f"{'kernel':<16} {'numpy [ms]':>11} {'cython [ms]':>12} {'speedup':>8}")
    for name, py_t, c_t, ratio in rows:
        if c_t is None:
            print(f"{name:<16} {1e3 * py_t:>11.2f} {'n/a':>12} {'n/a':>8}")
        else:
            print(f"{name:<16} {1e3 * py_t:>11.2f} {1e3 * c_t:>12.2f} {ratio:>7.1f}x")


if __name__ == "__main__":
    main()
