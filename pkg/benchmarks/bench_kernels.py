"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]

Both backends run on the same inputs; results must agree exactly before any
timing is reported.
"""
import argparse
import time

import numpy as np

from cubedual import _pykernels
from cubedual.dual_complex import build_dual, conflict_masks, principal_orientation
from cubedual.free_product_lab import abc, example_walls
from cubedual.group_action import ball_wallspace
from cubedual.pocset import Wall, Wallspace

try:
    from cubedual import _ckernels
except ImportError:
    _ckernels = None


def crossing_walls(n, sparse=False):
    """n pairwise crossing coordinate walls; ``sparse`` keeps only points of
    weight <= 2, so most of the 2^n vertices come from the flip closure."""
    pts = [p for p in range(2 ** n) if not sparse or bin(p).count("1") <= 2]
    walls = [Wall([p for p in pts if not (p >> j) & 1], [p for p in pts if (p >> j) & 1]) for j in range(n)]
    return Wallspace(pts, walls)


def timed(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def cases():
    ws = crossing_walls(14, sparse=True)
    bad0, bad1 = conflict_masks(ws)
    starts = sorted({principal_orientation(ws, p).bits for p in ws.points})
    yield "flip_closure 14-cube from 106 points", "flip_closure", (starts, 14, bad0, bad1, 10 ** 6)

    X = ball_wallspace(abc(), example_walls(abc()), 3).complex
    g = X.graph
    indptr, indices = g.csr
    yield f"bfs_distances A*B*C r=3 ({g.n} v)", "bfs_distances", (indptr, indices, g.n)
    dist = g.distances
    yield f"bottleneck A*B*C r=3 ({g.n} v)", "bottleneck", (dist, indptr, indices)
    sub = dist[:40, :40]
    yield "four_point 40 vertices", "four_point", (np.ascontiguousarray(sub),)

    Q = build_dual(crossing_walls(6), wall_budget=6)
    yield f"median_violation 6-cube ({len(Q.vertices)} v)", "median_violation", (list(Q.vertices), Q.distances)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled extension not built; only the fallback is available")
    print(f"{'kernel':44} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for label, name, call in cases():
        tp, rp = timed(getattr(_pykernels, name), *call, repeat=args.repeat)
        if _ckernels is None:
            print(f"{label:44} {tp:10.4f} {'-':>11} {'-':>8}")
            continue
        tc, rc = timed(getattr(_ckernels, name), *call, repeat=args.repeat)
        same = (np.array_equal(rp, rc) if isinstance(rp, np.ndarray)
                else (sorted(rp[0]), rp[1]) == (sorted(rc[0]), rc[1]) if name == "flip_closure" else rp == rc)
        if not same:
            raise SystemExit(f"{label}: backends disagree")
        print(f"{label:44} {tp:10.4f} {tc:11.4f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
