"""Peripheral refinement pipeline and the relatively geometric audit.

For each peripheral P that is not elliptic on the dual X of H0, the walls that
cut P essentially give a P-complex Y; P is replaced by the stabilisers of the
vertices of Y.  The audit then checks, at two truncation radii, that cells of
X fall into finitely many orbits, that every refined peripheral fixes a
vertex, and that cell stabilisers sit inside conjugates of refined
peripherals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .coarse_geometry import (bottleneck_witness, circuit_profile, hyperbolicity_bound,
                              hyperbolicity_witness)
from .errors import HorizonError, InputError, ResourceError, VerificationError
from .group_action import (DEFAULT_MARGIN, DEFAULT_N_MAX, DEFAULT_RADIUS, EllipticityCertificate,
                           GroupWallspace, Inconclusive, PermutationModel, axis_separation_search,
                           ball_wallspace, closure, essential_wall_search, fixed_point_search,
                           skewer_search, subgroup_ball)

DEFAULT_SAMPLE_LENGTH = 6


@dataclass(frozen=True)
class Peripheral:
    label: str
    generators: tuple


@dataclass(frozen=True)
class RefinedEntry:
    """A refined peripheral Q.

    ``conjugator`` c satisfies c Q c^-1 = the subgroup named ``name`` when a
    factor matches (otherwise c is the identity and ``name`` is a label).
    Every generator lies in the source peripheral.
    """

    name: str
    generators: tuple
    conjugator: Any
    source: str
    classification: str  # "kept" or "refined-from"
    finite: bool | None = None


@dataclass
class PeripheralDual:
    peripheral: Peripheral
    gw: GroupWallspace
    radius: int
    delta: Fraction
    delta_pair: tuple
    hyperbolicity: Fraction
    hyperbolicity_quad: Any
    bound: Fraction
    circuits: dict
    edge_orbits: int
    walls: list

    @property
    def complex(self):
        return self.gw.complex

    def summary(self, model) -> dict:
        X = self.complex
        return {
            "peripheral": self.peripheral.label,
            "radius": self.radius,
            "essential_walls": [f"{model.format(w.translate)}.{self.gw.data[w.datum].label}" for w in self.walls],
            "vertices": len(X.vertices),
            "edges": len(X.edges),
            "census": {str(k): v for k, v in X.census().items()},
            "bottleneck_delta": str(self.delta),
            "hyperbolicity_delta": str(self.hyperbolicity),
            "hyperbolicity_bound": str(self.bound),
            "circuit_profile": {str(k): v for k, v in self.circuits.items()},
            "edge_orbits": self.edge_orbits,
        }


@dataclass
class RefinedStructure:
    entries: list[RefinedEntry]
    duals: list[PeripheralDual] = field(default_factory=list)
    verification: dict = field(default_factory=dict)

    @property
    def names(self) -> list[str]:
        return sorted({e.name for e in self.entries})

    def describe(self) -> str:
        return "{" + ", ".join(self.names) + "}"


@dataclass
class VertexStabilizer:
    vertex: int
    generators: tuple
    elements: frozenset
    classification: str  # "finite" or "infinite-at-horizon"


@dataclass
class AuditReport:
    cocompactness: dict
    ellipticity: dict
    stabilizers: list
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures

    def check(self, k: int) -> bool:
        return not any(f["check"] == k for f in self.failures)


# orbits and stabilisers

class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def classes(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return [sorted(c) for _, c in sorted(out.items())]


def _letters(model, gens):
    out = []
    for s in gens:
        out.append(s)
        si = model.inv(s)
        if si != s:
            out.append(si)
    return out


def interior_cells(gw: GroupWallspace):
    """Cells (dimension, vertex tuple) all of whose vertices are interior."""
    return [(k, c) for k, c in gw.complex.cells() if all(gw.interior(v) for v in c)]


def cell_orbits(gw: GroupWallspace, gens) -> dict[int, list[list[tuple]]]:
    """Orbits of interior cells under the group generated by ``gens``, glued
    along generator moves between interior cells."""
    cells = interior_cells(gw)
    present = set(cells)
    uf = _UnionFind(cells)
    letters = _letters(gw.model, gens)
    for k, c in cells:
        for s in letters:
            try:
                img = gw.cell_image(s, c)
            except HorizonError:
                continue
            if (k, img) in present:
                uf.union((k, c), (k, img))
    out: dict[int, list] = {}
    for cls in uf.classes():
        out.setdefault(cls[0][0], []).append([c for _, c in cls])
    return dict(sorted(out.items()))


def cell_orbit_counts(gw: GroupWallspace, gens) -> dict[int, int]:
    return {k: len(v) for k, v in cell_orbits(gw, gens).items()}


def cell_stabilizer(gw: GroupWallspace, gens, cell: tuple, radius: int):
    """Setwise stabiliser of ``cell`` among subgroup elements of length <= radius.

    Returns (elements, classification).  The stabiliser is "finite" when the
    fixers found are closed under products (a finite subgroup), otherwise
    "infinite-at-horizon".
    """
    model = gw.model
    if isinstance(model, PermutationModel):
        radius = model.diameter
    ball = subgroup_ball(model, gens, radius)
    fixers = []
    for g in ball.elements:
        try:
            if gw.cell_image(g, cell) == cell:
                fixers.append(g)
        except HorizonError:
            continue
    fixers_set = frozenset(fixers)
    if ball.closed:
        return fixers_set, "finite"
    try:
        span = closure(model, fixers, cap=len(ball.elements) + 1)
    except ResourceError:
        span = None
    if span is not None and span == fixers_set:
        return fixers_set, "finite"
    return fixers_set, "infinite-at-horizon"


def orbit_representative(gw: GroupWallspace, gens, cells, radius: int, home: int):
    """Member of an orbit with the largest stabiliser seen within ``radius``
    (a far member may have its stabiliser conjugated past the horizon); ties
    go to the member nearest ``home``, then the smallest cell."""
    dist = gw.complex.distances
    best = None
    for c in sorted(cells, key=lambda c: (max(int(dist[home, v]) for v in c), c)):
        elems, kind = cell_stabilizer(gw, gens, c, radius)
        if best is None or len(elems) > len(best[1]):
            best = (c, elems, kind)
    return best


def home_vertex(gw: GroupWallspace) -> int:
    model = gw.model
    if isinstance(model, PermutationModel):
        return gw.principal_vertex(model.points[0])
    return gw.principal_vertex(model.identity)


def greedy_generators(model, elements, radius=None):
    gens, span = [], {model.identity}
    for g in sorted(elements, key=model.sort_key):
        if g in span:
            continue
        gens.append(g)
        if radius is None:
            span = closure(model, gens)
        else:
            span = set(subgroup_ball(model, gens, radius).elements)
    return tuple(gens)


def vertex_stabilizers(gw: GroupWallspace, P_gens, radius: int = 4) -> list[VertexStabilizer]:
    """Stabilisers of one vertex per interior orbit; the representative is the
    orbit vertex nearest the principal vertex of the identity."""
    model = gw.model
    orbits = cell_orbits(gw, P_gens).get(0, [])
    home = home_vertex(gw)
    out = []
    for cls in orbits:
        (v,), elems, kind = orbit_representative(gw, P_gens, cls, radius, home)
        gens = greedy_generators(model, elems, None if kind == "finite" else radius)
        out.append(VertexStabilizer(v, gens, elems, kind))
    return out


# conjugacy

def conjugate_set(model, c, elems):
    ci = model.inv(c)
    return frozenset(model.mul(model.mul(c, g), ci) for g in elems)


def factor_subgroups(model) -> dict[str, frozenset]:
    """Named standard subgroups: the factors of a free product."""
    if isinstance(model, PermutationModel):
        return {}
    out = {}
    for f, fac in enumerate(model.factors):
        out[fac.name] = frozenset({()} | {((f, e),) for e in range(1, len(fac))})
    return out


def match_factor(model, elems, radius: int):
    """Shortest-lex c with c S c^-1 equal to a named factor subgroup."""
    named = factor_subgroups(model)
    if not named:
        return None, model.identity
    for c in model.ball(radius):
        image = conjugate_set(model, c, elems)
        for name, sub in named.items():
            if image == sub:
                return name, c
    return None, model.identity


def conjugate_within(model, P_ball, S1, S2):
    """Some p in P_ball with p S1 p^-1 = S2, else None."""
    for p in P_ball.elements:
        if conjugate_set(model, p, S1) == S2:
            return p
    return None


# pipeline

def build_peripheral_dual(model, peripheral: Peripheral, data, essential, radius: int = DEFAULT_RADIUS,
                          margin: int = DEFAULT_MARGIN, wall_budget: int | None = None) -> PeripheralDual:
    """Dual of the P-translates of the essential walls on the P-ball."""
    if not essential:
        raise InputError(f"P already elliptic: no wall cuts {peripheral.label} essentially")
    gens = list(peripheral.generators)
    Pb = subgroup_ball(model, gens, radius + 1)
    inner = [p for p in Pb.elements if model.length(p) <= radius]
    translates = []
    for w in essential:
        for p in inner:
            translates.append((model.mul(p, w.translate), w.datum))
    boundary = [p for p in Pb.elements if model.length(p) > radius]
    tests = [p for p in Pb.elements if model.length(p) <= radius + 1 - margin]
    budget = wall_budget or max(64, len(translates))
    gw = GroupWallspace(model, data, translates, Pb.elements, boundary, tests, margin, budget,
                        name=f"Y({peripheral.label})")
    g = gw.complex.graph
    delta, pair = bottleneck_witness(g)
    hyper, quad = hyperbolicity_witness(g)
    edges = g.edges
    lengths = range(3, 9)
    circuits = circuit_profile(g, edges[0], lengths) if edges else {}
    edge_orbits = len(cell_orbits(gw, gens).get(1, []))
    return PeripheralDual(peripheral, gw, radius, delta, pair, hyper, quad, hyperbolicity_bound(delta),
                          circuits, edge_orbits, list(essential))


def reduced_words(model, gens, max_length: int = DEFAULT_SAMPLE_LENGTH) -> list:
    """Elements spelled by freely reduced words of length <= max_length in the
    generators and their inverses, deduplicated and in shortlex order."""
    letters = []
    for k, s in enumerate(gens):
        letters.append((k, 1, s))
        si = model.inv(s)
        if si != s:
            letters.append((k, -1, si))
    seen = {model.identity}
    frontier = [((), model.identity)]
    for _ in range(max_length):
        nxt = []
        for word, g in frontier:
            for k, e, s in letters:
                if word and word[-1][0] == k and (word[-1][1] == -e or model.inv(s) == s):
                    continue
                h = model.mul(g, s)
                nxt.append((word + ((k, e),), h))
                seen.add(h)
        frontier = nxt
    return sorted(seen, key=model.sort_key)


def refine_structure(model, peripherals, data, radius: int = 4, margin: int = DEFAULT_MARGIN,
                     n_max: int = DEFAULT_N_MAX, horizon: int = DEFAULT_RADIUS,
                     peripheral_radius: int = DEFAULT_RADIUS, sample_length: int = DEFAULT_SAMPLE_LENGTH,
                     X: GroupWallspace | None = None) -> RefinedStructure:
    X = X or ball_wallspace(model, data, radius, margin)
    entries: list[RefinedEntry] = []
    duals = []
    verification = {"elliptic": {}, "loxodromic_samples": {}}
    for P in peripherals:
        gens = tuple(P.generators)
        cert = fixed_point_search(gens, X)
        if cert.ok:
            elems = _finite_span(model, gens)
            name, c = match_factor(model, elems, radius) if elems is not None else (None, model.identity)
            entries.append(RefinedEntry(name or P.label, gens, c, P.label, "kept", elems is not None))
            continue
        essential = essential_wall_search(model, gens, data, radius, horizon)
        if not essential:
            raise HorizonError(f"{P.label} fixes no interior vertex of X but no wall cuts it essentially "
                               f"within radius {radius}", escaping=P.label)
        Y = build_peripheral_dual(model, P, data, essential, peripheral_radius, margin)
        duals.append(Y)
        stabs = [s for s in vertex_stabilizers(Y.gw, gens) if len(s.elements) > 1]
        Pb = subgroup_ball(model, gens, 2 * peripheral_radius)
        reps: list[VertexStabilizer] = []
        for s in stabs:
            if any(r.classification == s.classification == "finite"
                   and conjugate_within(model, Pb, s.elements, r.elements) is not None for r in reps):
                continue
            reps.append(s)
        for k, s in enumerate(reps):
            name, c = match_factor(model, s.elements, radius)
            entries.append(RefinedEntry(name or f"{P.label}/Q{k}", s.generators, c, P.label, "refined-from",
                                        s.classification == "finite"))
        # elements of P that are loxodromic on Y must separate axes for H0
        samples = {"sampled": 0, "loxodromic": 0, "axis_separated": 0}
        for h in reduced_words(model, gens, sample_length):
            if model.order(h) is not None:
                continue
            samples["sampled"] += 1
            sk = skewer_search(h, Y.gw, n_max)
            if not sk.ok:
                continue
            samples["loxodromic"] += 1
            ax = axis_separation_search(h, model, data, X.test_points, n_max)
            if not ax.ok or not ax.verify(model, data, X.test_points):
                raise VerificationError(f"{model.format(h)} skewers Y({P.label}) but has no axis separation "
                                        f"certificate for H0", witness={"element": model.format(h)})
            samples["axis_separated"] += 1
        verification["loxodromic_samples"][P.label] = samples
    for e in entries:
        cert = fixed_point_search(e.generators, X)
        if not cert.ok:
            raise VerificationError(f"refined peripheral {e.name} fixes no vertex of X",
                                    witness={"generators": [model.format(g) for g in e.generators]})
        verification["elliptic"][e.name] = cert
    return RefinedStructure(entries, duals, verification)


def _finite_span(model, gens):
    if not gens:
        return frozenset({model.identity})
    if all(model.order(g) is not None for g in gens) and len(gens) == 1:
        return frozenset(closure(model, gens))
    try:
        ball = subgroup_ball(model, gens, DEFAULT_RADIUS)
    except Exception:
        return None
    return frozenset(ball.elements) if ball.closed else None


def relatively_geometric_audit(model, Q: RefinedStructure, X: GroupWallspace,
                               compare_radius: int | None = None, stabilizer_radius: int = 4) -> AuditReport:
    """Three finite-scale checks: orbit counts of cells agree at two radii,
    each Q fixes a vertex, and each nontrivial cell stabiliser is conjugate
    into some Q."""
    failures = []
    gens = list(model.generators)
    base_radius = _radius_of(X)
    radii = [base_radius]
    if compare_radius is not None and compare_radius != base_radius and not isinstance(model, PermutationModel):
        radii.append(compare_radius)
    counts = {}
    for r in radii:
        gw = X if r == base_radius else ball_wallspace(model, X.data, r, X.margin)
        counts[r] = cell_orbit_counts(gw, gens)
    if len({tuple(sorted(c.items())) for c in counts.values()}) > 1:
        failures.append({"check": 1, "reason": "cell-orbit counts differ across radii",
                         "witness": {str(r): {str(k): v for k, v in c.items()} for r, c in counts.items()}})

    ellipticity = {}
    for e in Q.entries:
        cert = fixed_point_search(e.generators, X)
        ellipticity[e.name] = cert
        if not cert.ok or not cert.verify(X):
            failures.append({"check": 2, "reason": f"{e.name} fixes no vertex",
                             "witness": {"generators": [model.format(g) for g in e.generators]}})

    q_sets = []
    for e in Q.entries:
        span = _finite_span(model, e.generators)
        if span is None:
            span = frozenset(subgroup_ball(model, e.generators, 2 * stabilizer_radius + 2).elements)
        q_sets.append((e, span))
    conj_ball = model.elements if isinstance(model, PermutationModel) else model.ball(stabilizer_radius)
    stabilizers = []
    home = home_vertex(X)
    for k, orbits in cell_orbits(X, gens).items():
        for cls in orbits:
            cell, elems, kind = orbit_representative(X, gens, cls, stabilizer_radius, home)
            if len(elems) <= 1:
                continue
            found = None
            for c in conj_ball:
                image = conjugate_set(model, c, elems)
                for e, span in q_sets:
                    if image <= span:
                        found = (e, c, len(span) // len(elems) if e.finite else None)
                        break
                if found:
                    break
            rec = {"dimension": k, "cell": list(cell), "order_at_horizon": len(elems), "classification": kind,
                   "generators": [model.format(g) for g in greedy_generators(model, elems)]}
            if found is None:
                failures.append({"check": 3, "reason": "cell stabiliser is not conjugate into any refined peripheral",
                                 "witness": rec})
            else:
                e, c, index = found
                rec.update({"inside": e.name, "conjugator": model.format(c), "index_bound": index})
            stabilizers.append(rec)
    return AuditReport({str(r): {str(k): v for k, v in c.items()} for r, c in counts.items()},
                       ellipticity, stabilizers, failures)


def _radius_of(gw: GroupWallspace) -> int:
    if gw.radius is not None:
        return gw.radius
    return max((gw.model.length(g) for g, _ in gw.translates), default=0)
