"""Shipped example maps and randomized commuting families."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from planarfix.dynamics.maps import (
    affine_conjugate,
    bump_rotation,
    identity,
    linear_flow,
    rotation,
    scaling,
    translation,
)

ANGLE_RANGE = (0.035, 0.08)


@dataclass(frozen=True)
class ExampleFamily:
    name: str
    maps: tuple
    seed: tuple
    fixed_point: tuple

    def to_dict(self):
        return {"name": self.name, "maps": [m.spec for m in self.maps],
                "seed": list(self.seed), "fixed_point": list(self.fixed_point)}


def spiral_matrix(decay, turn=1.0):
    return [[-decay, -turn], [turn, -decay]]


def centre_matrix(a, b):
    """Elliptic field ``(x, y) -> (-a y, b x)``; orbits are ellipses."""
    return [[0.0, -a], [b, 0.0]]


def _near_identity_affine(rng):
    ang = rng.uniform(-0.5, 0.5)
    c, s = math.cos(ang), math.sin(ang)
    scale = np.diag(rng.uniform(0.7, 1.3, size=2))
    shear = np.array([[1.0, rng.uniform(-0.3, 0.3)], [0.0, 1.0]])
    return np.array([[c, -s], [s, c]]) @ scale @ shear, rng.uniform(-0.5, 0.5, size=2)


def example_families(count=20, seed=0):
    """Commuting families with a known common fixed point.

    Cycles through common-centre rotations, spiral-sink flow maps, elliptic
    centre flow maps, and affine conjugates of the first two kinds. Step
    sizes are drawn from ``ANGLE_RANGE`` with a common sign, so the forward
    orbit grid of the pair winds fully around the centre.
    """
    rng = np.random.default_rng(seed)
    kinds = ("rotations", "spiral", "centre", "affine-rotations", "affine-spiral")
    out = []
    for i in range(count):
        kind = kinds[i % len(kinds)]
        centre = rng.uniform(-0.5, 0.5, size=2)
        sign = 1.0 if rng.random() < 0.5 else -1.0
        steps = sign * rng.uniform(*ANGLE_RANGE, size=2)
        radius = rng.uniform(0.3, 0.8)
        phase = rng.uniform(0.0, 2 * math.pi)
        p = centre + radius * np.array([math.cos(phase), math.sin(phase)])
        c = tuple(float(v) for v in centre)
        if kind.endswith("rotations"):
            maps = [rotation(float(t), c) for t in steps]
        elif kind.endswith("spiral"):
            mat = spiral_matrix(float(rng.uniform(0.05, 0.3)))
            maps = [linear_flow(mat, abs(float(t)), c) for t in steps]
        else:
            a = float(rng.uniform(0.5, 1.5))
            mat = centre_matrix(a, 1.0 / a)
            maps = [linear_flow(mat, abs(float(t)), c) for t in steps]
        if kind.startswith("affine"):
            mat, off = _near_identity_affine(rng)
            maps = [affine_conjugate(m, mat, off) for m in maps]
            p = mat @ p + off
            centre = mat @ centre + off
        out.append(ExampleFamily(kind, tuple(maps), (float(p[0]), float(p[1])),
                                 (float(centre[0]), float(centre[1]))))
    return out


def shipped_maps():
    """Named example maps used by the documentation, tests and CLI demos."""
    sheared = [[1.1, 0.2], [0.0, 0.9]]
    maps = {
        "rotation-small": rotation(0.02, (0.1, 0.1)),
        "rotation-medium": rotation(0.045, (-0.2, 0.1)),
        "rotation-large": rotation(0.3, (0.0, 0.0)),
        "translation-small": translation((0.01, 0.02)),
        "scaling-contract": scaling(0.98, (0.1, -0.1)),
        "spiral-flow": linear_flow(spiral_matrix(0.2), 0.03, (0.1, 0.0)),
        "centre-flow": linear_flow(centre_matrix(0.8, 1.25), 0.03, (0.0, 0.2)),
        "affine-rotation": affine_conjugate(rotation(0.02, (0.0, 0.0)), sheared, (0.1, 0.1)),
        "bump-rotation-400": bump_rotation(400),
        "bump-rotation-8": bump_rotation(8),
    }
    return maps
