# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled hot kernels.  Mirrors ``_pykernels`` call for call.

``flip_closure`` and ``median_violation`` pack orientations into one machine
word, so they only accept up to 64 walls; the dispatcher routes larger inputs
to the pure implementation.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int32_t, int64_t
from libcpp.unordered_set cimport unordered_set
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

cnp.import_array()

MAX_WORD_WALLS = 64


def flip_closure(starts, int n_walls, bad0, bad1, Py_ssize_t max_vertices):
    if n_walls > 64:
        raise ValueError("word kernel handles at most 64 walls")
    cdef vector[uint64_t] b0, b1
    cdef Py_ssize_t k
    for k in range(2 * n_walls):
        b0.push_back(<uint64_t>bad0[k])
        b1.push_back(<uint64_t>bad1[k])
    cdef uint64_t full = (<uint64_t>0 - 1) if n_walls == 64 else ((<uint64_t>1 << n_walls) - 1)
    cdef unordered_set[uint64_t] seen
    cdef vector[uint64_t] stack
    cdef vector[uint64_t] order
    cdef uint64_t v, w
    cdef int j, s
    for x in starts:
        v = <uint64_t>x
        if seen.count(v) == 0:
            seen.insert(v)
            stack.push_back(v)
            order.push_back(v)
    cdef bint overflow = False
    while stack.size() > 0 and not overflow:
        v = stack.back()
        stack.pop_back()
        for j in range(n_walls):
            w = v ^ (<uint64_t>1 << j)
            if seen.count(w):
                continue
            s = <int>((w >> j) & 1)
            k = 2 * j + s
            if (w & b1[k]) or ((full & ~w) & b0[k]):
                continue
            seen.insert(w)
            order.push_back(w)
            if <Py_ssize_t>order.size() > max_vertices:
                overflow = True
                break
            stack.push_back(w)
    return [int(order[i]) for i in range(order.size())], bool(overflow)


def bfs_distances(indptr_in, indices_in, Py_ssize_t n):
    cdef cnp.int64_t[:] indptr = np.asarray(indptr_in, dtype=np.int64)
    cdef cnp.int64_t[:] indices = np.asarray(indices_in, dtype=np.int64)
    out = np.full((n, n), -1, dtype=np.int32)
    cdef int32_t[:, :] dist = out
    cdef vector[Py_ssize_t] queue
    cdef Py_ssize_t s, head, tail, u, v, k
    queue.resize(n)
    for s in range(n):
        dist[s, s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if dist[s, v] < 0:
                    dist[s, v] = dist[s, u] + 1
                    queue[tail] = v
                    tail += 1
    return out


cdef Py_ssize_t _find(Py_ssize_t* parent, Py_ssize_t v) nogil:
    while parent[v] != v:
        parent[v] = parent[parent[v]]
        v = parent[v]
    return v


def bottleneck(dist_in, indptr_in, indices_in):
    cdef int32_t[:, :] dist = np.ascontiguousarray(dist_in, dtype=np.int32)
    cdef cnp.int64_t[:] indptr = np.asarray(indptr_in, dtype=np.int64)
    cdef cnp.int64_t[:] indices = np.asarray(indices_in, dtype=np.int64)
    cdef Py_ssize_t n = dist.shape[0]
    if n <= 1:
        return 0, 0, 0
    best_arr = np.full((n, n), 2 ** 30, dtype=np.int32)
    W_arr = np.zeros((n, n), dtype=np.int32)
    cdef int32_t[:, :] best = best_arr
    cdef int32_t[:, :] W = W_arr
    cdef vector[Py_ssize_t] parent, nxt, tail_of, size, order
    parent.resize(n); nxt.resize(n); tail_of.resize(n); size.resize(n); order.resize(n)
    cdef vector[bint] active
    active.resize(n)
    cdef vector[Py_ssize_t] bucket_start
    cdef Py_ssize_t m, v, u, k, a, b, x, y, i, t, maxd, half, dxy
    for m in range(n):
        # order vertices by decreasing distance from m (counting sort)
        maxd = 0
        for v in range(n):
            if dist[m, v] > maxd:
                maxd = dist[m, v]
        bucket_start.assign(maxd + 2, 0)
        for v in range(n):
            bucket_start[maxd - dist[m, v] + 1] += 1
        for k in range(1, maxd + 2):
            bucket_start[k] += bucket_start[k - 1]
        for v in range(n):
            order[bucket_start[maxd - dist[m, v]]] = v
            bucket_start[maxd - dist[m, v]] += 1
        for v in range(n):
            parent[v] = v
            nxt[v] = -1
            tail_of[v] = v
            size[v] = 1
            active[v] = False
        for i in range(n):
            v = order[i]
            t = dist[m, v]
            active[v] = True
            W[v, v] = <int32_t>t
            for k in range(indptr[v], indptr[v + 1]):
                u = indices[k]
                if not active[u]:
                    continue
                a = _find(&parent[0], u)
                b = _find(&parent[0], v)
                if a == b:
                    continue
                x = a
                while x != -1:
                    y = b
                    while y != -1:
                        W[x, y] = <int32_t>t
                        W[y, x] = <int32_t>t
                        y = nxt[y]
                    x = nxt[x]
                if size[a] < size[b]:
                    a, b = b, a
                parent[b] = a
                nxt[tail_of[a]] = b
                tail_of[a] = tail_of[b]
                size[a] += size[b]
        for x in range(n):
            for y in range(n):
                dxy = dist[x, y]
                half = (dxy + 1) // 2
                if dist[m, x] == half and dist[m, y] == dxy - half:
                    if W[x, y] < best[x, y]:
                        best[x, y] = W[x, y]
    cdef int32_t worst = 0
    cdef Py_ssize_t wx = 0, wy = 0
    for x in range(n):
        for y in range(n):
            if x != y and best[x, y] > worst:
                worst = best[x, y]
                wx = x
                wy = y
    return int(worst), int(wx), int(wy)


def four_point(dist_in):
    cdef int32_t[:, :] d = np.ascontiguousarray(dist_in, dtype=np.int32)
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i, j, k, l
    cdef int64_t s1, s2, s3, hi, mid, best = 0
    cdef Py_ssize_t bi = 0, bj = 0, bk = 0, bl = 0
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for l in range(k + 1, n):
                    s1 = d[i, j] + d[k, l]
                    s2 = d[i, k] + d[j, l]
                    s3 = d[i, l] + d[j, k]
                    if s1 >= s2 and s1 >= s3:
                        hi = s1
                        mid = s2 if s2 > s3 else s3
                    elif s2 >= s3:
                        hi = s2
                        mid = s1 if s1 > s3 else s3
                    else:
                        hi = s3
                        mid = s1 if s1 > s2 else s2
                    if hi - mid > best:
                        best = hi - mid
                        bi, bj, bk, bl = i, j, k, l
    return int(best), (int(bi), int(bj), int(bk), int(bl))


def median_violation(masks, dist_in):
    cdef int32_t[:, :] dist = np.ascontiguousarray(dist_in, dtype=np.int32)
    cdef Py_ssize_t n = len(masks)
    cdef vector[uint64_t] m
    cdef unordered_map[uint64_t, Py_ssize_t] index
    cdef Py_ssize_t u, v, w, i
    for u in range(n):
        m.push_back(<uint64_t>masks[u])
        index[m[u]] = u
    cdef uint64_t med
    for u in range(n):
        for v in range(u + 1, n):
            for w in range(v + 1, n):
                med = (m[u] & m[v]) | (m[w] & (m[u] | m[v]))
                if index.count(med) == 0:
                    return (int(u), int(v), int(w))
                i = index[med]
                if (dist[u, i] + dist[i, v] != dist[u, v]
                        or dist[u, i] + dist[i, w] != dist[u, w]
                        or dist[v, i] + dist[i, w] != dist[v, w]):
                    return (int(u), int(v), int(w))
    return None
