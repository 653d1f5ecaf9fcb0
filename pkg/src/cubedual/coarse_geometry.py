"""Quasi-tree, hyperbolicity and fineness diagnostics on finite graphs."""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from . import kernels
from .errors import InputError, ResourceError

DEFAULT_MAX_VERTICES = 5000
DEFAULT_MAX_CIRCUIT = 12


class Graph:
    """Simple undirected graph on vertices ``0..n-1``."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]], labels: Sequence | None = None):
        self.n = int(n)
        adj = [set() for _ in range(self.n)]
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise InputError(f"loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        self.adjacency = tuple(tuple(sorted(a)) for a in adj)
        self.labels = tuple(labels) if labels is not None else None

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        nodes = sorted(g.nodes(), key=repr)
        pos = {v: i for i, v in enumerate(nodes)}
        return cls(len(nodes), ((pos[u], pos[v]) for u, v in g.edges()), nodes)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def csr(self):
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        for v, a in enumerate(self.adjacency):
            indptr[v + 1] = indptr[v] + len(a)
        indices = np.fromiter((u for a in self.adjacency for u in a), dtype=np.int64,
                              count=int(indptr[-1]))
        return indptr, indices

    @cached_property
    def distances(self) -> np.ndarray:
        indptr, indices = self.csr
        return kernels.bfs_distances(indptr, indices, self.n)

    def is_connected(self) -> bool:
        return self.n == 0 or bool((self.distances[0] >= 0).all())

    def subgraph(self, vertices: Sequence[int]) -> "Graph":
        pos = {v: i for i, v in enumerate(vertices)}
        edges = [(pos[u], pos[v]) for u in vertices for v in self.adjacency[u] if v in pos and u < v]
        return Graph(len(vertices), edges, list(vertices))


def _require_connected(g: Graph, max_vertices: int):
    if g.n > max_vertices:
        raise ResourceError(f"graph has {g.n} vertices, limit {max_vertices}",
                            {"vertices": g.n, "limit": max_vertices})
    if not g.is_connected():
        raise InputError("graph is disconnected")


def bottleneck_delta(g: Graph, max_vertices: int = DEFAULT_MAX_VERTICES) -> Fraction:
    """Exact bottleneck constant.

    For each ordered pair (x, y) we take the vertices m at distance
    ``ceil(d/2)`` from x on an x-y geodesic, and the least radius r such that
    deleting ``B(m, r)`` separates x from y.  A path avoids ``B(m, r)`` exactly
    when all its vertices sit farther than r from m, so the least separating
    radius is a max-min path value, computed for all pairs at once by merging
    vertices in decreasing distance from m.  The result is returned as a
    Fraction to keep the half-integer convention visible; with vertex
    midpoints it is always integral.
    """
    return bottleneck_witness(g, max_vertices)[0]


def bottleneck_witness(g: Graph, max_vertices: int = DEFAULT_MAX_VERTICES):
    _require_connected(g, max_vertices)
    indptr, indices = g.csr
    delta, x, y = kernels.bottleneck(g.distances, indptr, indices)
    return Fraction(delta), (x, y)


def hyperbolicity_delta(g: Graph, max_vertices: int = DEFAULT_MAX_VERTICES) -> Fraction:
    """Exact four-point hyperbolicity constant.

    The constant of a graph is the maximum over its biconnected components, and
    shortest paths between two vertices of a block stay in the block, so each
    block is scanned separately on the restricted distance matrix.
    """
    return hyperbolicity_witness(g, max_vertices)[0]


def hyperbolicity_witness(g: Graph, max_vertices: int = DEFAULT_MAX_VERTICES):
    _require_connected(g, max_vertices)
    dist = g.distances
    best, quad = 0, None
    for block in nx.biconnected_components(g.to_networkx()):
        if len(block) < 4:
            continue
        verts = sorted(block)
        twice, (i, j, k, l) = kernels.four_point(dist[np.ix_(verts, verts)])
        if twice > best:
            best, quad = twice, (verts[i], verts[j], verts[k], verts[l])
    return Fraction(best, 2), quad


def hyperbolicity_bound(bottleneck: Fraction) -> Fraction:
    """Upper bound on the four-point constant implied by the bottleneck one.

    Take p on a side [x, y] of a geodesic triangle and the sub-geodesic
    [x', y'] of radius t around p.  The bottleneck midpoint m of x', y' (on
    some geodesic) is within 2*Delta of p, because the sub-geodesic itself
    must pass within Delta of m.  The path running from x' back to x, round
    the other two sides and on to y' also meets B(m, Delta): either on the
    other sides, or on the side segments, which forces t <= 3*Delta.  So
    triangles are 3*Delta-slim, and slim triangles give the four-point
    condition with 8 times the slimness constant.
    """
    return 24 * Fraction(bottleneck)


def circuits_through(g: Graph, edge: tuple[int, int], r: int,
                     max_length: int = DEFAULT_MAX_CIRCUIT) -> int:
    """Number of simple circuits of length exactly ``r`` through ``edge``."""
    u, v = edge
    if r < 3:
        raise InputError(f"circuit length {r} < 3")
    if r > max_length:
        raise ResourceError(f"circuit length {r} exceeds bound {max_length}",
                            {"r": r, "bound": max_length})
    if v not in g.adjacency[u]:
        raise InputError(f"{edge} is not an edge")
    dist = g.distances
    adj = g.adjacency
    on_path = [False] * g.n
    on_path[u] = on_path[v] = True
    count = 0

    # simple paths v -> u of length r - 1 avoiding the edge itself
    def walk(x, steps_left):
        nonlocal count
        for y in adj[x]:
            if y == u:
                if steps_left == 1 and x != v:
                    count += 1
                continue
            if on_path[y] or dist[y, u] > steps_left - 1:
                continue
            on_path[y] = True
            walk(y, steps_left - 1)
            on_path[y] = False

    walk(v, r - 1)
    return count


def circuit_profile(g: Graph, edge: tuple[int, int], lengths=range(3, 9)) -> dict[int, int]:
    return {r: circuits_through(g, edge, r) for r in lengths}


def geometry_report(g: Graph, name: str = "graph", lengths=range(3, 9)) -> dict:
    """Delta, delta and a circuit profile for the first edge of ``g``."""
    bdelta, bpair = bottleneck_witness(g)
    hdelta, quad = hyperbolicity_witness(g)
    edges = g.edges
    profile = circuit_profile(g, edges[0], lengths) if edges else {}
    bound = hyperbolicity_bound(bdelta)
    return {
        "name": name,
        "vertices": g.n,
        "edges": len(edges),
        "bottleneck_delta": str(bdelta),
        "bottleneck_witness": list(bpair),
        "hyperbolicity_delta": str(hdelta),
        "hyperbolicity_witness": list(quad) if quad else None,
        "hyperbolicity_bound": str(bound),
        "within_bound": hdelta <= bound,
        "circuit_edge": list(edges[0]) if edges else None,
        "circuit_profile": {str(k): v for k, v in profile.items()},
        "fineness_note": "circuit counts at fixed length are a finite-scale fineness diagnostic",
    }
