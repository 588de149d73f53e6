"""JSON reading and writing.

Output is canonical (sorted keys, two-space indent, trailing newline) so
identical inputs give byte-identical files.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from planarfix.dynamics.maps import build_map
from planarfix.geometry import DEFAULT_TOLERANCE, build_closed_curve


class SchemaError(ValueError):
    """Input JSON does not have the expected shape."""


def _default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (tuple, set, frozenset)):
        return list(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, default=_default) + "\n"


def write_json(path, obj):
    """Write ``obj`` to ``path``; ``None`` or ``"-"`` means stdout."""
    text = dumps(obj)
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_json(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def curve_from_dict(data, tolerance=None):
    if not isinstance(data, dict) or "vertices" not in data:
        raise SchemaError("curve JSON needs a 'vertices' list")
    verts = data["vertices"]
    if not isinstance(verts, list) or not all(isinstance(v, list) and len(v) == 2 for v in verts):
        raise SchemaError("'vertices' must be a list of [x, y] pairs")
    tol = tolerance if tolerance is not None else data.get("tolerance", DEFAULT_TOLERANCE)
    return build_closed_curve([tuple(float(c) for c in v) for v in verts], float(tol))


def read_curve(path, tolerance=None):
    return curve_from_dict(read_json(path), tolerance)


def map_from_json(spec):
    """A map from a registry spec, given as a dict or a JSON string."""
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"map spec is not valid JSON: {exc}") from None
    try:
        return build_map(spec)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad map spec: {exc}") from None


def family_from_dict(data):
    """``(g_fixed, f_family, seed)`` from ``{"g_fixed": [...], "maps": [...], "seed": [x, y]}``."""
    if not isinstance(data, dict) or "maps" not in data:
        raise SchemaError("family JSON needs a 'maps' list")
    g_fixed = [map_from_json(s) for s in data.get("g_fixed", [])]
    maps = [map_from_json(s) for s in data["maps"]]
    seed = data.get("seed")
    if seed is not None:
        if not (isinstance(seed, list) and len(seed) == 2):
            raise SchemaError("'seed' must be [x, y]")
        seed = (float(seed[0]), float(seed[1]))
    return g_fixed, maps, seed


def read_family(path):
    return family_from_dict(read_json(path))
