"""Pure Python / numpy implementations of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module; used when the
extension is not built or ``CUBEDUAL_PURE=1`` is set.
"""
from collections import deque

import numpy as np


def flip_closure(starts, n_walls, bad0, bad1, max_vertices):
    """Orientations reachable from ``starts`` by legal single-wall flips.

    ``bad0[2*j+s]`` / ``bad1[2*j+s]`` are masks of walls that may not sit on
    side 0 / side 1 while wall j sits on side s.  Returns (masks, overflowed).
    """
    full = (1 << n_walls) - 1
    seen = set(starts)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for j in range(n_walls):
            w = v ^ (1 << j)
            if w in seen:
                continue
            k = 2 * j + ((w >> j) & 1)
            if w & bad1[k] or (full & ~w) & bad0[k]:
                continue
            seen.add(w)
            if len(seen) > max_vertices:
                return list(seen), True
            stack.append(w)
    return list(seen), False


def bfs_distances(indptr, indices, n):
    dist = np.full((n, n), -1, dtype=np.int32)
    for s in range(n):
        row = dist[s]
        row[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = row[u] + 1
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if row[v] < 0:
                    row[v] = du
                    queue.append(v)
    return dist


def _maximin(level, indptr, indices, n):
    """W[x, y] = max over x-y paths of the least vertex level on the path."""
    parent = list(range(n))
    members = [[v] for v in range(n)]
    active = [False] * n
    W = np.zeros((n, n), dtype=np.int32)

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for v in sorted(range(n), key=lambda u: -level[u]):
        t = level[v]
        active[v] = True
        W[v, v] = t
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
            if not active[u]:
                continue
            a, b = find(u), find(v)
            if a == b:
                continue
            ma, mb = members[a], members[b]
            W[np.ix_(ma, mb)] = t
            W[np.ix_(mb, ma)] = t
            if len(ma) < len(mb):
                a, b, ma, mb = b, a, mb, ma
            parent[b] = a
            ma.extend(mb)
            members[b] = []
    return W


def bottleneck(dist, indptr, indices):
    """Least Delta such that each ordered pair has a geodesic midpoint whose
    Delta-ball separates the pair.  Returns (Delta, x, y) for a worst pair."""
    n = dist.shape[0]
    if n <= 1:
        return 0, 0, 0
    INF = np.iinfo(np.int32).max
    best = np.full((n, n), INF, dtype=np.int64)
    half = (dist + 1) // 2
    for m in range(n):
        dm = dist[m]
        W = _maximin(dm, indptr, indices, n)
        is_mid = (dm[:, None] == half) & (dm[None, :] == dist - half)
        np.minimum(best, np.where(is_mid, W, INF), out=best)
    np.fill_diagonal(best, 0)
    flat = int(np.argmax(best))
    x, y = divmod(flat, n)
    return int(best[x, y]), x, y


def four_point(dist):
    """Twice the largest four-point defect, with a witnessing quadruple."""
    n = dist.shape[0]
    best, quad = 0, (0, 0, 0, 0)
    d = dist.astype(np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            s1 = d[i, j] + d  # pair (i,j) with (k,l)
            s2 = d[i][:, None] + d[j][None, :]  # (i,k) + (j,l)
            s3 = d[i][None, :] + d[j][:, None]  # (i,l) + (j,k)
            hi = np.maximum(np.maximum(s1, s2), s3)
            lo = np.minimum(np.minimum(s1, s2), s3)
            mid = s1 + s2 + s3 - hi - lo
            defect = hi - mid
            k, l = np.unravel_index(int(np.argmax(defect)), defect.shape)
            if defect[k, l] > best:
                best, quad = int(defect[k, l]), (i, j, int(k), int(l))
    return best, quad


def median_violation(masks, dist):
    """First triple whose majority orientation is missing or off-geodesic."""
    n = len(masks)
    index = {m: i for i, m in enumerate(masks)}
    arr = np.array(masks, dtype=object)
    for u in range(n):
        for v in range(u + 1, n):
            muv = masks[u] & masks[v]
            either = masks[u] | masks[v]
            maj = arr[v + 1:] & either | muv
            for off, m in enumerate(maj):
                w = v + 1 + off
                i = index.get(m)
                if i is None:
                    return (u, v, w)
                if (dist[u, i] + dist[i, v] != dist[u, v]
                        or dist[u, i] + dist[i, w] != dist[u, w]
                        or dist[v, i] + dist[i, w] != dist[v, w]):
                    return (u, v, w)
    return None
