"""Planar maps with Jacobians, and a registry of parametric families.

Every map evaluates on ``(N, 2)`` arrays (a single point of shape ``(2,)``
works too) and carries the JSON-able spec it was built from, so the CLI can
write certificates that name their generators.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.linalg import expm

FD_STEP = 1e-6


def _rows(x):
    x = np.asarray(x, dtype=float)
    return x.reshape(-1, 2), x.ndim == 1


@dataclass(frozen=True)
class DiffeoMap:
    """A C1 map of the plane.

    ``func`` and ``jac`` take ``(N, 2)`` arrays and return ``(N, 2)`` and
    ``(N, 2, 2)`` arrays. Without ``jac`` the Jacobian is taken by central
    differences with step ``step``.
    """

    func: Callable
    jac: Optional[Callable] = None
    inv: Optional[Callable] = None
    inv_jac: Optional[Callable] = None
    label: str = "map"
    spec: Optional[dict] = field(default=None, compare=False)
    step: float = FD_STEP

    def __call__(self, x):
        rows, single = _rows(x)
        out = np.asarray(self.func(rows), dtype=float)
        return out[0] if single else out

    eval = __call__

    def jacobian(self, x):
        rows, single = _rows(x)
        if self.jac is not None:
            out = np.asarray(self.jac(rows), dtype=float)
        else:
            out = _central_difference(self.func, rows, self.step)
        return out[0] if single else out

    def finite_difference_jacobian(self, x):
        rows, single = _rows(x)
        out = _central_difference(self.func, rows, self.step)
        return out[0] if single else out

    @property
    def invertible(self):
        return self.inv is not None

    def inverse(self):
        if self.inv is None:
            return None
        return DiffeoMap(self.inv, self.inv_jac, self.func, self.jac, f"{self.label}^-1",
                         {"name": "inverse", "params": {"map": self.spec}} if self.spec else None,
                         self.step)

    def iterate(self, x, n):
        """``f^n(x)``; negative ``n`` uses the inverse."""
        rows, single = _rows(x)
        g = self if n >= 0 else self.inverse()
        if g is None:
            raise ValueError(f"{self.label} has no inverse")
        for _ in range(abs(n)):
            rows = g.func(rows)
        return rows[0] if single else rows


def _central_difference(func, rows, h):
    out = np.empty((len(rows), 2, 2))
    for k in range(2):
        e = np.zeros(2)
        e[k] = h
        out[:, :, k] = (func(rows + e) - func(rows - e)) / (2 * h)
    return out


def _const_jac(mat):
    mat = np.asarray(mat, dtype=float)
    return lambda x: np.broadcast_to(mat, (len(x), 2, 2)).copy()


def _rot(angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


# -- elementary families ------------------------------------------------------

def identity():
    return DiffeoMap(lambda x: x.copy(), _const_jac(np.eye(2)), lambda x: x.copy(),
                     _const_jac(np.eye(2)), "identity", {"name": "identity", "params": {}})


def affine(matrix, offset=(0.0, 0.0), label=None):
    """``x -> A x + b``."""
    a = np.asarray(matrix, dtype=float).reshape(2, 2)
    b = np.asarray(offset, dtype=float).reshape(2)
    ainv = np.linalg.inv(a)
    spec = {"name": "affine", "params": {"matrix": a.tolist(), "offset": b.tolist()}}
    return DiffeoMap(lambda x: x @ a.T + b, _const_jac(a),
                     lambda y: (y - b) @ ainv.T, _const_jac(ainv),
                     label or "affine", spec)


def _about(mat, center, name, params, label):
    a = np.asarray(mat, dtype=float)
    c = np.asarray(center, dtype=float).reshape(2)
    ainv = np.linalg.inv(a)
    spec = {"name": name, "params": params}
    return DiffeoMap(lambda x: c + (x - c) @ a.T, _const_jac(a),
                     lambda y: c + (y - c) @ ainv.T, _const_jac(ainv), label, spec)


def rotation(angle, center=(0.0, 0.0)):
    c = [float(v) for v in center]
    return _about(_rot(angle), c, "rotation", {"angle": float(angle), "center": c},
                  f"rotation({angle:.6g} about {c[0]:.6g},{c[1]:.6g})")


def scaling(factor, center=(0.0, 0.0)):
    c = [float(v) for v in center]
    return _about(float(factor) * np.eye(2), c, "scaling", {"factor": float(factor), "center": c},
                  f"scaling({factor:.6g})")


def translation(offset):
    b = [float(v) for v in offset]
    m = affine(np.eye(2), b, label=f"translation({b[0]:.6g},{b[1]:.6g})")
    return DiffeoMap(m.func, m.jac, m.inv, m.inv_jac, m.label,
                     {"name": "translation", "params": {"offset": b}})


def linear_flow(matrix, time, center=(0.0, 0.0)):
    """Time-``t`` map of the linear field ``x' = A (x - c)``."""
    a = np.asarray(matrix, dtype=float).reshape(2, 2)
    c = [float(v) for v in center]
    return _about(expm(float(time) * a), c, "linear_flow",
                  {"matrix": a.tolist(), "time": float(time), "center": c},
                  f"flow(t={time:.6g})")


# -- smooth profiles ----------------------------------------------------------

def _e(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def _de(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos]) / x[pos] ** 2
    return out


def smoothstep(x):
    """C-infinity step: 0 for x <= 0, 1 for x >= 1."""
    a, b = _e(x), _e(1.0 - np.asarray(x, dtype=float))
    return a / (a + b)


def smoothstep_derivative(x):
    x = np.asarray(x, dtype=float)
    a, b = _e(x), _e(1.0 - x)
    da, db = _de(x), _de(1.0 - x)
    return (da * b + a * db) / (a + b) ** 2


def bump_angle(r, n):
    """Rotation angle profile: ``2 pi / n`` for r <= 1, zero for r >= 2."""
    return (2 * math.pi / n) * (1.0 - smoothstep(np.asarray(r) - 1.0))


def bump_rotation(n):
    """Rotate each circle of radius r about the origin by ``bump_angle(r, n)``."""
    n = int(n)

    def profile(x):
        r = np.hypot(x[:, 0], x[:, 1])
        return r, bump_angle(r, n)

    def func(x, sign=1.0):
        _, phi = profile(x)
        c, s = np.cos(sign * phi), np.sin(sign * phi)
        return np.stack([c * x[:, 0] - s * x[:, 1], s * x[:, 0] + c * x[:, 1]], axis=1)

    def jac(x, sign=1.0):
        r, phi = profile(x)
        dphi = -(2 * math.pi / n) * smoothstep_derivative(r - 1.0) * sign
        c, s = np.cos(sign * phi), np.sin(sign * phi)
        out = np.empty((len(x), 2, 2))
        out[:, 0, 0], out[:, 0, 1] = c, -s
        out[:, 1, 0], out[:, 1, 1] = s, c
        rx = np.where(r > 0, r, 1.0)
        grad = dphi[:, None] * x / rx[:, None]
        # derivative of R(phi) x along phi is J R(phi) x
        jrx = np.stack([-(s * x[:, 0] + c * x[:, 1]), c * x[:, 0] - s * x[:, 1]], axis=1)
        out += jrx[:, :, None] * grad[:, None, :]
        return out

    return DiffeoMap(func, jac, lambda y: func(y, -1.0), lambda y: jac(y, -1.0),
                     f"bump_rotation({n})", {"name": "bump_rotation", "params": {"n": n}})


def tube_flow(target, width, steps=256):
    """Compactly supported map pushing the origin to ``target``.

    It is the time-``|q|`` flow of a field parallel to ``q`` that equals the
    unit field on a neighbourhood of the segment from the origin to ``q`` and
    vanishes outside a tube of half-width ``width`` around it. The flow is
    integrated with RK4; on the flat part of the field the steps are exact,
    so the origin lands on ``target`` to rounding.
    """
    q = np.asarray(target, dtype=float).reshape(2)
    length = float(np.hypot(*q))
    if length == 0:
        return identity()
    w = float(width)
    axis = q / length
    normal = np.array([-axis[1], axis[0]])

    def speed(s, v):
        along = smoothstep((s + w) / (0.5 * w)) * smoothstep((length + w - s) / (0.5 * w))
        across = 1.0 - smoothstep((np.abs(v) - 0.5 * w) / (0.5 * w))
        return along * across

    def flow(x, direction):
        out = np.array(x, dtype=float)
        s = x @ axis
        v = x @ normal
        live = (np.abs(v) < w) & (s > -w) & (s < length + w)
        if not live.any():
            return out
        s, v = s[live], v[live]
        dt = direction * length / steps
        for _ in range(steps):
            k1 = speed(s, v)
            k2 = speed(s + 0.5 * dt * k1, v)
            k3 = speed(s + 0.5 * dt * k2, v)
            k4 = speed(s + dt * k3, v)
            s = s + dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
        out[live] = s[:, None] * axis + v[:, None] * normal
        return out

    spec = {"name": "tube_flow", "params": {"target": q.tolist(), "width": w, "steps": int(steps)}}
    return DiffeoMap(lambda x: flow(x, 1.0), None, lambda y: flow(y, -1.0), None,
                     "tube_flow", spec)


def fold_shear(amplitude=0.9, lift=2.0, width=1.0):
    """A diffeomorphism that nearly folds horizontal segments.

    ``(x, y) -> (x - a w P(x/w), y + a b w B(x/w))`` where ``P`` has slope 1
    on ``[-1, 1]`` and ``B`` is an even C1 bump. Along ``[(-w, 0), (w, 0)]``
    the endpoints are squeezed together while the middle is lifted, which
    breaks the segment estimate for moderate ``K``.
    """
    a, b, w = float(amplitude), float(lift), float(width)

    def plateau(u):
        au = np.abs(u)
        t = np.clip(au - 1.0, 0.0, 1.0)
        val = np.where(au <= 1.0, au, 1.0 + t / 2 + np.sin(math.pi * t) / (2 * math.pi))
        slope = np.where(au <= 1.0, 1.0, np.cos(0.5 * math.pi * t) ** 2)
        return np.sign(u) * val, slope

    def bump(u):
        inside = np.abs(u) < 1.0
        one = 1.0 - u * u
        val = np.where(inside, 0.5 * one * one, 0.0)
        slope = np.where(inside, -2.0 * u * one, 0.0)
        return val, slope

    def func(x):
        u = x[:, 0] / w
        p, _ = plateau(u)
        bb, _ = bump(u)
        return np.stack([x[:, 0] - a * w * p, x[:, 1] + a * b * w * bb], axis=1)

    def jac(x):
        u = x[:, 0] / w
        _, dp = plateau(u)
        _, db = bump(u)
        out = np.zeros((len(x), 2, 2))
        out[:, 0, 0] = 1.0 - a * dp
        out[:, 1, 0] = a * b * db
        out[:, 1, 1] = 1.0
        return out

    spec = {"name": "fold_shear", "params": {"amplitude": a, "lift": b, "width": w}}
    return DiffeoMap(func, jac, None, None, "fold_shear", spec)


# -- combinators --------------------------------------------------------------

def compose(*maps):
    """``compose(f, g)`` is ``f o g``: ``g`` is applied first."""
    maps = list(maps)
    if not maps:
        return identity()

    def func(x):
        for m in reversed(maps):
            x = m.func(x)
        return x

    def jac(x):
        out = np.broadcast_to(np.eye(2), (len(x), 2, 2)).copy()
        for m in reversed(maps):
            out = m.jacobian(x) @ out
            x = m.func(x)
        return out

    inv = None
    if all(m.inv is not None for m in maps):
        def inv(y):
            for m in maps:
                y = m.inv(y)
            return y
    label = " o ".join(m.label for m in maps)
    spec = None
    if all(m.spec is not None for m in maps):
        spec = {"name": "compose", "params": {"maps": [m.spec for m in maps]}}
    return DiffeoMap(func, jac, inv, None, label, spec)


def conjugate(inner, outer):
    """``outer o inner o outer^-1``."""
    if outer.inv is None:
        raise ValueError(f"{outer.label} has no inverse")
    out_inv = outer.inverse()

    def func(x):
        return outer.func(inner.func(outer.inv(x)))

    def jac(x):
        y = outer.inv(x)
        z = inner.func(y)
        d_out_inv = np.linalg.inv(outer.jacobian(y))
        return outer.jacobian(z) @ inner.jacobian(y) @ d_out_inv

    inv = None
    if inner.inv is not None:
        def inv(x):
            return outer.func(inner.inv(out_inv.func(x)))
    spec = None
    if inner.spec is not None and outer.spec is not None:
        spec = {"name": "conjugate", "params": {"inner": inner.spec, "outer": outer.spec}}
    return DiffeoMap(func, jac, inv, None, f"({outer.label})[{inner.label}]", spec)


def affine_conjugate(inner, matrix, offset=(0.0, 0.0)):
    m = conjugate(inner, affine(matrix, offset))
    spec = None
    if inner.spec is not None:
        spec = {"name": "affine_conjugate",
                "params": {"map": inner.spec, "matrix": np.asarray(matrix, float).tolist(),
                           "offset": [float(v) for v in offset]}}
    return DiffeoMap(m.func, m.jac, m.inv, None, m.label, spec)


# -- registry -----------------------------------------------------------------

def _build_rotation(p):
    return rotation(p["angle"], p.get("center", (0.0, 0.0)))


def _build_counterexample(p):
    from planarfix.dynamics.counterexample import counterexample_family

    _, conj, _ = counterexample_family(p["n"], p["p"], p["q"], p.get("width"))
    return conj


REGISTRY = {
    "identity": lambda p: identity(),
    "rotation": _build_rotation,
    "translation": lambda p: translation(p["offset"]),
    "scaling": lambda p: scaling(p["factor"], p.get("center", (0.0, 0.0))),
    "affine": lambda p: affine(p["matrix"], p.get("offset", (0.0, 0.0))),
    "linear_flow": lambda p: linear_flow(p["matrix"], p["time"], p.get("center", (0.0, 0.0))),
    "bump_rotation": lambda p: bump_rotation(p["n"]),
    "tube_flow": lambda p: tube_flow(p["target"], p["width"], p.get("steps", 256)),
    "fold_shear": lambda p: fold_shear(p.get("amplitude", 0.9), p.get("lift", 2.0), p.get("width", 1.0)),
    "compose": lambda p: compose(*[build_map(s) for s in p["maps"]]),
    "conjugate": lambda p: conjugate(build_map(p["inner"]), build_map(p["outer"])),
    "affine_conjugate": lambda p: affine_conjugate(build_map(p["map"]), p["matrix"],
                                                   p.get("offset", (0.0, 0.0))),
    "inverse": lambda p: build_map(p["map"]).inverse(),
    "counterexample": _build_counterexample,
}


def build_map(spec):
    """Build a map from ``{"name": ..., "params": {...}}``."""
    try:
        name = spec["name"]
    except (TypeError, KeyError):
        raise ValueError(f"map spec needs a 'name': {spec!r}") from None
    if name not in REGISTRY:
        raise ValueError(f"unknown map {name!r}; known: {', '.join(sorted(REGISTRY))}")
    built = REGISTRY[name](spec.get("params", {}))
    if built is None:
        raise ValueError(f"map {name!r} cannot be built (missing inverse)")
    return built
