"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy implementations in ``_pykernels`` are used. Setting the environment
variable ``PLANARFIX_PURE_PYTHON=1`` forces the numpy backend.
"""
import os

from planarfix import _pykernels

if os.environ.get("PLANARFIX_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from planarfix import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
        BACKEND = "python"

candidate_pairs = _impl.candidate_pairs
winding_turns = _impl.winding_turns
ray_crossings = _impl.ray_crossings
min_distance = _impl.min_distance

__all__ = [
    "BACKEND",
    "candidate_pairs",
    "winding_turns",
    "ray_crossings",
    "min_distance",
]
