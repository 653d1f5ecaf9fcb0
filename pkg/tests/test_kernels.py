"""The compiled kernels and the pure fallback must agree exactly."""
import numpy as np
import pytest
from hypothesis import given, strategies as st

from cubedual import _pykernels, kernels
from cubedual.dual_complex import build_dual, conflict_masks, principal_orientation

from gen import random_wallspace

ck = pytest.importorskip("cubedual._ckernels")


def complex_of(seed):
    return build_dual(random_wallspace(seed, max_points=10, max_walls=8, cores=bool(seed % 2)))


def test_backend_reported():
    assert kernels.BACKEND in ("compiled", "python")


@given(st.integers(0, 10_000))
def test_flip_closure_parity(seed):
    ws = random_wallspace(seed, max_points=10, max_walls=8, cores=True)
    bad0, bad1 = conflict_masks(ws)
    starts = sorted({principal_orientation(ws, p).bits for p in ws.points})
    a, oa = _pykernels.flip_closure(starts, len(ws.walls), bad0, bad1, 10 ** 5)
    b, ob = ck.flip_closure(starts, len(ws.walls), bad0, bad1, 10 ** 5)
    assert sorted(a) == sorted(b) and oa == ob


def test_flip_closure_overflow_parity():
    ws = random_wallspace(5, max_points=12, max_walls=10)
    bad0, bad1 = conflict_masks(ws)
    starts = sorted({principal_orientation(ws, p).bits for p in ws.points})
    assert _pykernels.flip_closure(starts, len(ws.walls), bad0, bad1, 3)[1]
    assert ck.flip_closure(starts, len(ws.walls), bad0, bad1, 3)[1]


@given(st.integers(0, 10_000))
def test_graph_kernel_parity(seed):
    X = complex_of(seed)
    g = X.graph
    indptr, indices = g.csr
    da = _pykernels.bfs_distances(indptr, indices, g.n)
    db = ck.bfs_distances(indptr, indices, g.n)
    assert np.array_equal(da, db)
    assert _pykernels.bottleneck(da, indptr, indices)[0] == ck.bottleneck(da, indptr, indices)[0]
    assert _pykernels.four_point(da)[0] == ck.four_point(da)[0]
    assert _pykernels.median_violation(list(X.vertices), da) == ck.median_violation(list(X.vertices), da)


def test_median_violation_parity_on_a_broken_vertex_set():
    X = complex_of(11)
    verts = list(X.vertices)
    dist = X.distances
    # drop a vertex: the majority of some triple may leave the set
    broken = verts[:-1]
    sub = np.ascontiguousarray(dist[:-1, :-1])
    assert _pykernels.median_violation(broken, sub) == ck.median_violation(broken, sub)


def test_wide_inputs_route_to_fallback():
    # 70 nested walls exceed the 64-bit word kernels
    from gen import nested
    X = build_dual(nested(70), wall_budget=70)
    assert len(X.vertices) == 71
    assert kernels.median_violation(list(X.vertices), X.distances, X.n_walls) is None
