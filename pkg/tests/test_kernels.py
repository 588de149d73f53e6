import os
import subprocess
import sys

import numpy as np
import pytest

from planarfix import _pykernels, kernels

try:
    from planarfix import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def polygon(seed, n=60):
    rng = np.random.default_rng(seed)
    t = np.sort(rng.uniform(0, 4 * np.pi, n))
    r = 1 + 0.3 * np.sin(5 * t)
    return np.column_stack([r * np.cos(t), r * np.sin(t)])


def segments(poly):
    return np.hstack([poly, np.roll(poly, -1, axis=0)])


@pytest.mark.parametrize("impl", [_pykernels, _ckernels], ids=["python", "cython"])
def test_square_oracles(impl):
    if impl is None:
        pytest.skip("compiled kernels not built")
    sq = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    q = np.array([[0.5, 0.5], [2.0, 0.5], [0.5, -1.0]])
    assert np.allclose(impl.winding_turns(sq, q), [1.0, 0.0, 0.0], atol=1e-12)
    counts, deg = impl.ray_crossings(sq, q, (1.0, 0.0), 1e-9)
    assert list(counts) == [1, 0, 0] and not deg.any()
    assert np.allclose(impl.min_distance(sq, q), [0.5, 1.0, 1.0])
    pairs = {tuple(p) for p in impl.candidate_pairs(segments(sq), 1e-9)}
    assert pairs == {(0, 1), (1, 2), (2, 3), (0, 3)}


@needs_ext
@pytest.mark.parametrize("seed", range(5))
def test_backends_agree(seed):
    poly = polygon(seed)
    q = np.random.default_rng(seed + 100).uniform(-1.5, 1.5, size=(300, 2))
    assert np.allclose(_pykernels.winding_turns(poly, q), _ckernels.winding_turns(poly, q),
                       atol=1e-9)
    a = _pykernels.ray_crossings(poly, q, (0.6, 0.8), 1e-12)
    b = _ckernels.ray_crossings(poly, q, (0.6, 0.8), 1e-12)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    assert np.allclose(_pykernels.min_distance(poly, q), _ckernels.min_distance(poly, q),
                       rtol=1e-12, atol=1e-15)
    seg = segments(poly)
    assert np.array_equal(_pykernels.candidate_pairs(seg, 1e-9), _ckernels.candidate_pairs(seg, 1e-9))


@needs_ext
def test_readonly_inputs_accepted():
    poly = polygon(0)
    poly.setflags(write=False)
    q = np.zeros((1, 2))
    q.setflags(write=False)
    _ckernels.winding_turns(poly, q)
    _ckernels.min_distance(poly, q)


def test_forced_fallback():
    env = dict(os.environ, PLANARFIX_PURE_PYTHON="1")
    code = ("from planarfix import kernels; from planarfix.geometry import build_closed_curve;"
            "from planarfix.untangle import decompose;"
            "c = build_closed_curve([(-1,0),(1,0),(0,2)]*2);"
            "print(kernels.BACKEND, len(decompose(c).loops))")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.split()
    assert out == ["python", "2"]


def test_backend_reported():
    assert kernels.BACKEND in {"cython", "python"}
    if _ckernels is not None and not os.environ.get("PLANARFIX_PURE_PYTHON"):
        assert kernels.BACKEND == "cython"
