"""Kernel dispatch: compiled extension when available, numpy/Python otherwise.

Set ``CUBEDUAL_PURE=1`` to force the fallback (the benchmark and the test
suite use this to compare both paths).
"""
import os

from . import _pykernels

try:
    if os.environ.get("CUBEDUAL_PURE", "") not in ("", "0"):
        raise ImportError("pure mode requested")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "compiled" if _ckernels is not None else "python"
WORD_WALLS = 64


def _impl(name, compiled_ok=True):
    if _ckernels is not None and compiled_ok:
        return getattr(_ckernels, name)
    return getattr(_pykernels, name)


def flip_closure(starts, n_walls, bad0, bad1, max_vertices):
    return _impl("flip_closure", n_walls <= WORD_WALLS)(starts, n_walls, bad0, bad1, max_vertices)


def bfs_distances(indptr, indices, n):
    return _impl("bfs_distances")(indptr, indices, n)


def bottleneck(dist, indptr, indices):
    return _impl("bottleneck")(dist, indptr, indices)


def four_point(dist):
    return _impl("four_point")(dist)


def median_violation(masks, dist, n_walls):
    return _impl("median_violation", n_walls <= WORD_WALLS)(masks, dist)
