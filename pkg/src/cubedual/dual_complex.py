"""Sageev's dual cube complex of a finite wallspace.

Vertices are consistent orientations, stored as integer bitmasks: bit j set
means wall j is oriented to its negative side.  Consistency is a pairwise
condition (the chosen sides of any two walls must meet), so the vertex set is
closed under taking majorities and its flip-connected part containing the
principal orientations is a median graph.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from . import kernels
from .coarse_geometry import Graph
from .errors import InputError, ResourceError
from .pocset import MINUS, PLUS, Wallspace

DEFAULT_WALL_BUDGET = 24
DEFAULT_MAX_VERTICES = 200_000


@dataclass(frozen=True)
class Orientation:
    """Choice of one side per wall.

    ``domain`` (a bitmask, ``None`` = every wall) marks the walls the
    orientation is defined on; partial orientations come out of truncated
    group actions.
    """

    bits: int
    n: int
    domain: int | None = None

    def sign(self, wall: int) -> int:
        return MINUS if (self.bits >> wall) & 1 else PLUS

    @property
    def sides(self) -> tuple[str, ...]:
        return tuple("-" if (self.bits >> j) & 1 else "+" for j in range(self.n))

    @property
    def full_domain(self) -> int:
        return (1 << self.n) - 1 if self.domain is None else self.domain

    def agrees(self, other: "Orientation") -> bool:
        dom = self.full_domain & other.full_domain
        return not (self.bits ^ other.bits) & dom

    def __str__(self):
        return "".join(self.sides)


def lex_key(bits: int, n: int) -> tuple[int, ...]:
    return tuple((bits >> j) & 1 for j in range(n))


def principal_orientation(ws: Wallspace, p) -> Orientation:
    """Orient every wall towards ``p``; core points count as positive."""
    if p not in ws.index:
        raise InputError(f"unknown point {p!r}")
    bit = 1 << ws.index[p]
    bits = 0
    for j, (pos, _, _, _) in enumerate(ws.masks):
        if not pos & bit:
            bits |= 1 << j
    return Orientation(bits, len(ws.walls))


def conflict_masks(ws: Wallspace):
    """Masks used by the flip kernel.

    ``bad0[2*j+s]`` holds the walls i whose side 0 is disjoint from side s of
    wall j (so i may not sit on 0 while j sits on s); likewise ``bad1``.
    """
    n = len(ws.walls)
    sides = [(pos, neg) for pos, neg, _, _ in ws.masks]
    bad0 = [0] * (2 * n)
    bad1 = [0] * (2 * n)
    for j in range(n):
        for s in (0, 1):
            sj = sides[j][s]
            b0 = b1 = 0
            for i in range(n):
                if not sides[i][0] & sj:
                    b0 |= 1 << i
                if not sides[i][1] & sj:
                    b1 |= 1 << i
            bad0[2 * j + s] = b0
            bad1[2 * j + s] = b1
    return bad0, bad1


def is_consistent(ws: Wallspace, bits: int) -> bool:
    n = len(ws.walls)
    chosen = [ws.masks[j][(bits >> j) & 1] for j in range(n)]
    return all(chosen[i] & chosen[j] for i, j in combinations(range(n), 2))


@dataclass(frozen=True)
class Hyperplane:
    wall: int
    dual_edges: tuple[int, ...]
    plus_side: frozenset
    minus_side: frozenset


class CubeComplex:
    """1-skeleton, cubes and hyperplanes of a dual complex.

    Vertices are sorted lexicographically on their side arrays ('+' before
    '-', wall 0 first), which fixes vertex indices independently of the order
    of discovery.
    """

    def __init__(self, n_walls: int, masks, wallspace: Wallspace | None = None):
        self.n_walls = n_walls
        self.vertices = tuple(sorted(masks, key=lambda b: lex_key(b, n_walls)))
        self.index = {b: i for i, b in enumerate(self.vertices)}
        self.wallspace = wallspace
        edges = []
        for i, b in enumerate(self.vertices):
            for j in range(n_walls):
                if not (b >> j) & 1:
                    k = self.index.get(b | (1 << j))
                    if k is not None:
                        edges.append((i, k, j))
        self.edges = tuple(sorted(edges))
        self.edge_index = {(u, v): e for e, (u, v, _) in enumerate(self.edges)}

    def __repr__(self):
        return f"CubeComplex({len(self.vertices)} vertices, {len(self.edges)} edges, dim {self.dimension})"

    def orientation(self, v: int) -> Orientation:
        return Orientation(self.vertices[v], self.n_walls)

    @cached_property
    def graph(self) -> Graph:
        return Graph(len(self.vertices), ((u, v) for u, v, _ in self.edges))

    @property
    def distances(self) -> np.ndarray:
        return self.graph.distances

    def flippable(self, v: int) -> list[int]:
        """Walls dual to the edges at ``v``."""
        b = self.vertices[v]
        return [j for j in range(self.n_walls) if (b ^ (1 << j)) in self.index]

    def adjacent_walls_mask(self, v: int) -> int:
        m = 0
        for j in self.flippable(v):
            m |= 1 << j
        return m

    @cached_property
    def cubes(self) -> dict[int, tuple[tuple[int, tuple[int, ...]], ...]]:
        """Cubes of dimension >= 2 as (base vertex, walls); the base is the
        corner with every cube wall on its positive side."""
        out: dict[int, list] = {}
        index = self.index
        for i, b in enumerate(self.vertices):
            up = [j for j in range(self.n_walls) if not (b >> j) & 1 and (b | (1 << j)) in index]

            # grow wall sets in increasing order; corners of the current cube
            def grow(start, walls, corners):
                for pos in range(start, len(up)):
                    j = up[pos]
                    bit = 1 << j
                    new = [c | bit for c in corners]
                    if all(c in index for c in new):
                        ws = walls + (j,)
                        out.setdefault(len(ws), []).append((i, ws))
                        grow(pos + 1, ws, corners + new)

            for pos, j in enumerate(up):
                grow(pos + 1, (j,), [b, b | (1 << j)])
        return {k: tuple(sorted(v)) for k, v in sorted(out.items())}

    @property
    def dimension(self) -> int:
        if not self.edges:
            return 0
        return max(self.cubes, default=1)

    def census(self) -> dict[int, int]:
        counts = {0: len(self.vertices), 1: len(self.edges)}
        for k, cs in self.cubes.items():
            counts[k] = len(cs)
        return counts

    def cells(self):
        """Every cell as (dimension, sorted vertex tuple)."""
        for v in range(len(self.vertices)):
            yield 0, (v,)
        for u, v, _ in self.edges:
            yield 1, (u, v)
        for k, cs in self.cubes.items():
            for base, walls in cs:
                yield k, self.cube_vertices(base, walls)

    def cube_vertices(self, base: int, walls) -> tuple[int, ...]:
        b = self.vertices[base]
        corners = [b]
        for j in walls:
            corners += [c | (1 << j) for c in corners]
        return tuple(sorted(self.index[c] for c in corners))

    def hyperplane(self, wall: int) -> Hyperplane:
        return hyperplane_of(self, wall)


def build_dual(ws: Wallspace, wall_budget: int = DEFAULT_WALL_BUDGET,
               max_vertices: int = DEFAULT_MAX_VERTICES) -> CubeComplex:
    """Flip closure of the principal orientations."""
    n = len(ws.walls)
    if n > wall_budget:
        raise ResourceError(
            f"{n} walls exceed the wall budget of {wall_budget}",
            {"walls": n, "budget": wall_budget, "vertices_found": 0},
        )
    starts = sorted({principal_orientation(ws, p).bits for p in ws.points})
    bad0, bad1 = conflict_masks(ws)
    masks, overflow = kernels.flip_closure(starts, n, bad0, bad1, max_vertices)
    if overflow:
        raise ResourceError(
            f"dual complex exceeds {max_vertices} vertices",
            {"walls": n, "vertices_found": len(masks), "limit": max_vertices},
        )
    return CubeComplex(n, masks, ws)


def median(X: CubeComplex, u: int, v: int, w: int) -> int:
    a, b, c = X.vertices[u], X.vertices[v], X.vertices[w]
    m = (a & b) | (b & c) | (a & c)
    try:
        return X.index[m]
    except KeyError:
        raise InputError(f"majority of ({u}, {v}, {w}) is not a vertex") from None


@dataclass(frozen=True)
class MedianCertificate:
    ok: bool
    vertices: int
    triples_checked: int
    counterexample: tuple[int, int, int] | None = None


def verify_median_graph(X) -> MedianCertificate:
    """Check every vertex triple has a median on all three pairwise geodesics.

    For a CubeComplex the candidate median is the majority orientation; for a
    bare Graph the geodesic intervals are intersected and must meet in exactly
    one vertex.
    """
    if isinstance(X, CubeComplex):
        n = len(X.vertices)
        dist = X.distances
        if n and (dist < 0).any():
            raise InputError("1-skeleton is disconnected")
        bad = kernels.median_violation(list(X.vertices), dist, X.n_walls)
    else:
        n = X.n
        dist = X.distances
        if n and (dist < 0).any():
            raise InputError("graph is disconnected")
        bad = _graph_median_violation(dist)
    triples = n * (n - 1) * (n - 2) // 6
    return MedianCertificate(bad is None, n, triples, bad)


@dataclass(frozen=True)
class DualityCertificate:
    """Graph distance between principal vertices against wall counts.

    ``ok`` compares with the number of walls whose principal sides differ
    (core points count as positive); ``separation_pairs`` counts the pairs
    where it also equals the strict wall separation, which is every pair
    when neither point lies in a core.
    """

    ok: bool
    pairs_checked: int
    separation_pairs: int
    counterexample: tuple | None = None


def verify_duality(X: CubeComplex, ws: Wallspace) -> DualityCertificate:
    dist = X.distances
    pts = list(ws.points)
    verts = [X.index[principal_orientation(ws, p).bits] for p in pts]
    pairs = agree = 0
    for a, b in combinations(range(len(pts)), 2):
        pairs += 1
        d = int(dist[verts[a], verts[b]])
        flips = bin(X.vertices[verts[a]] ^ X.vertices[verts[b]]).count("1")
        if d != flips:
            return DualityCertificate(False, pairs, agree, (pts[a], pts[b], d, flips))
        if d == ws.wall_separation(pts[a], pts[b]):
            agree += 1
    return DualityCertificate(True, pairs, agree)


def _graph_median_violation(dist):
    n = dist.shape[0]
    for u, v, w in combinations(range(n), 3):
        on_uv = dist[u] + dist[v] == dist[u, v]
        on_uw = dist[u] + dist[w] == dist[u, w]
        on_vw = dist[v] + dist[w] == dist[v, w]
        if int(np.count_nonzero(on_uv & on_uw & on_vw)) != 1:
            return (u, v, w)
    return None


def hyperplane_of(X: CubeComplex, wall: int) -> Hyperplane:
    dual = tuple(e for e, (_, _, j) in enumerate(X.edges) if j == wall)
    if not dual:
        raise InputError(f"wall {wall} is flipped by no edge of the complex")
    bit = 1 << wall
    plus = frozenset(i for i, b in enumerate(X.vertices) if not b & bit)
    minus = frozenset(range(len(X.vertices))) - plus
    return Hyperplane(wall, dual, plus, minus)


def hyperplane_components(X: CubeComplex, wall: int) -> list[set[int]]:
    """Components of the 1-skeleton after deleting the dual edges of ``wall``."""
    n = len(X.vertices)
    adj = [[] for _ in range(n)]
    for u, v, j in X.edges:
        if j != wall:
            adj[u].append(v)
            adj[v].append(u)
    seen, comps = set(), []
    for s in range(n):
        if s in seen:
            continue
        comp = {s}
        queue = deque([s])
        seen.add(s)
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    queue.append(y)
        comps.append(comp)
    return comps


def canonical_form(X: CubeComplex) -> tuple:
    """Relabeling-invariant fingerprint: sorted degree sequence, census and
    the multiset of hyperplane (edge count, side sizes)."""
    degs = tuple(sorted(X.graph.degree(v) for v in range(len(X.vertices))))
    hyper = Counter()
    for j in range(X.n_walls):
        try:
            h = hyperplane_of(X, j)
        except InputError:
            continue
        hyper[(len(h.dual_edges), tuple(sorted((len(h.plus_side), len(h.minus_side)))))] += 1
    return degs, tuple(sorted(X.census().items())), tuple(sorted(hyper.items()))
