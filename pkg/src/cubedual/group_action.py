"""Groups acting on wallspaces and dual complexes, with replayable certificates.

Infinite groups are only ever seen through balls.  A :class:`GroupWallspace`
holds a finite family of wall translates ``g.H`` restricted to a finite set of
points; the group acts on translates by left multiplication and on vertices of
the dual complex by transporting orientations.  Claims are only certified away
from the truncation boundary (``margin``), and every certificate can be
replayed through the action.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property, lru_cache
from itertools import count
from typing import Any, Sequence

from .dual_complex import DEFAULT_WALL_BUDGET, CubeComplex, Orientation, build_dual, principal_orientation
from .errors import HorizonError, InputError, ResourceError
from .pocset import MINUS, PLUS, Wall, Wallspace

DEFAULT_RADIUS = 6
DEFAULT_N_MAX = 6
DEFAULT_MARGIN = 2
MAX_SUBGROUP = 100_000


class PermutationModel:
    """Finite group given by permutations of ``points``.

    Products compose right to left, ``(g*h)(x) = g(h(x))``, so the action on
    points is a left action.
    """

    kind = "finite_permutation_group"

    def __init__(self, points: Sequence, generators: dict[str, Sequence[int]], name: str | None = None,
                 max_order: int = MAX_SUBGROUP):
        self.points = tuple(points)
        self.point_index = {p: i for i, p in enumerate(self.points)}
        n = len(self.points)
        self.name = name or "permutation group"
        self.gen_labels = tuple(generators)
        gens = []
        for lab, perm in generators.items():
            perm = tuple(int(x) for x in perm)
            if sorted(perm) != list(range(n)):
                raise InputError(f"generator {lab!r} is not a permutation of {n} points")
            gens.append(perm)
        self._gens = tuple(gens)
        self.identity = tuple(range(n))
        # breadth-first enumeration gives word lengths and shortlex words
        self.words = {self.identity: ()}
        queue = deque([self.identity])
        while queue:
            g = queue.popleft()
            for k, s in enumerate(self._gens):
                h = self.mul(g, s)
                if h not in self.words:
                    self.words[h] = self.words[g] + (k,)
                    if len(self.words) > max_order:
                        raise ResourceError(f"group exceeds {max_order} elements",
                                            {"elements_so_far": len(self.words)})
                    queue.append(h)

    def __repr__(self):
        return f"PermutationModel({self.name}, order {len(self.words)})"

    def mul(self, g, h):
        return tuple(g[i] for i in h)

    def inv(self, g):
        out = [0] * len(g)
        for i, x in enumerate(g):
            out[x] = i
        return tuple(out)

    def power(self, g, n: int):
        if n < 0:
            g, n = self.inv(g), -n
        out = self.identity
        for _ in range(n):
            out = self.mul(out, g)
        return out

    def length(self, g) -> int:
        return len(self.words[g])

    @property
    def diameter(self) -> int:
        return max(len(w) for w in self.words.values())

    def act_point(self, g, x):
        return self.points[g[self.point_index[x]]]

    def order(self, g) -> int:
        k, h = 1, g
        while h != self.identity:
            h = self.mul(h, g)
            k += 1
        return k

    @property
    def generators(self):
        return self._gens

    @property
    def elements(self):
        return sorted(self.words, key=self.sort_key)

    def ball(self, r: int):
        return [g for g in self.elements if len(self.words[g]) <= r]

    def sort_key(self, g):
        return (len(self.words[g]), self.words[g])

    def parse(self, word):
        if isinstance(word, (tuple, list)) and len(word) == len(self.points) and all(isinstance(x, int) for x in word):
            g = tuple(word)
            if g not in self.words:
                raise InputError(f"{word!r} is not an element of the group")
            return g
        tokens = word.split() if isinstance(word, str) else list(word)
        if isinstance(word, str) and len(tokens) == 1 and tokens[0] not in self.gen_labels:
            tokens = list(tokens[0])
        g = self.identity
        lookup = dict(zip(self.gen_labels, self._gens))
        for tok in tokens:
            if tok in ("1", "e"):
                continue
            if tok not in lookup:
                raise InputError(f"unknown generator label {tok!r}")
            g = self.mul(g, lookup[tok])
        return g

    def format(self, g) -> str:
        w = self.words[g]
        return "1" if not w else " ".join(self.gen_labels[k] for k in w)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "name": self.name,
            "points": list(self.points),
            "generators": {lab: list(s) for lab, s in zip(self.gen_labels, self._gens)},
        }


@dataclass(frozen=True)
class PointSetDatum:
    """Codimension-1 datum of a permutation model: a wall on its points."""

    label: str
    positive: frozenset
    negative: frozenset
    subgroup: tuple = ()

    def side(self, x) -> int:
        inp, inn = x in self.positive, x in self.negative
        if inp and inn:
            return 0
        return PLUS if inp else MINUS

    def describe(self, model) -> dict:
        return {
            "label": self.label,
            "positive": sorted(self.positive, key=model.point_index.__getitem__),
            "negative": sorted(self.negative, key=model.point_index.__getitem__),
            "subgroup": [model.format(k) for k in self.subgroup],
        }


# CodimOneDatum is either SyllableDatum (free products) or PointSetDatum.


# small finite presets

def single_wall_model():
    """Z/2 swapping q and r, preserving the wall {p} | {q, r}."""
    model = PermutationModel(("p", "q", "r"), {"s": (0, 2, 1)}, "single wall")
    return model, [PointSetDatum("W", frozenset({"p"}), frozenset({"q", "r"}))]


def square_swap_model():
    """Z/2 exchanging the two coordinates of {0,1}^2; the first-coordinate
    wall and its image span a square, and the swap fixes corners 00 and 11."""
    model = PermutationModel(("00", "01", "10", "11"), {"s": (0, 2, 1, 3)}, "square swap")
    return model, [PointSetDatum("W", frozenset({"00", "01"}), frozenset({"10", "11"}))]


def cube_symmetric_model():
    """S_3 permuting the coordinates of {0,1}^3; one coordinate wall."""
    pts = tuple(f"{i:03b}" for i in range(8))
    idx = {p: i for i, p in enumerate(pts)}

    def perm(f):
        return tuple(idx[f(p)] for p in pts)

    gens = {
        "t": perm(lambda p: p[1] + p[0] + p[2]),
        "r": perm(lambda p: p[2] + p[0] + p[1]),
    }
    model = PermutationModel(pts, gens, "S3 on the 3-cube")
    first0 = frozenset(p for p in pts if p[0] == "0")
    return model, [PointSetDatum("W", first0, frozenset(pts) - first0)]


def closure(model, gens, cap: int = MAX_SUBGROUP) -> set:
    """Finite subgroup generated by ``gens``; ResourceError if it exceeds ``cap``."""
    ident = model.identity
    out = {ident}
    queue = deque([ident])
    gens = list(gens)
    while queue:
        g = queue.popleft()
        for s in gens:
            h = model.mul(g, s)
            if h not in out:
                out.add(h)
                if len(out) > cap:
                    raise ResourceError(f"subgroup exceeds {cap} elements", {"elements_so_far": len(out)})
                queue.append(h)
    return out


def translate_side(model, datum, g, x) -> int:
    """Side of the translate ``g.H`` containing ``x`` (0 = core)."""
    return datum.side(model.act_point(model.inv(g), x))


def check_datum_invariance(model, datum, points) -> Any:
    """First (k, x) where the datum's side is not invariant under subgroup
    generator k, or None."""
    for k in datum.subgroup:
        for x in points:
            y = model.act_point(k, x)
            if datum.side(y) != datum.side(x):
                return (k, x)
    return None


@dataclass
class SubgroupBall:
    """Elements of a subgroup within a ball, each with a word in the generators."""

    elements: list
    words: dict
    closed: bool

    def __contains__(self, g):
        return g in self.words


def subgroup_ball(model, gens, radius: int, cap: int = MAX_SUBGROUP) -> SubgroupBall:
    """Breadth-first search through generators and inverses, keeping elements
    of ambient length <= radius.  ``closed`` means no product was cut off by
    the radius, so the subgroup is finite and fully listed."""
    gens = list(gens)
    letters = []
    for k, s in enumerate(gens):
        letters.append(((k, 1), s))
        si = model.inv(s)
        if si != s:
            letters.append(((k, -1), si))
    ident = model.identity
    words = {ident: ()}
    queue = deque([ident])
    closed = True
    while queue:
        g = queue.popleft()
        for letter, s in letters:
            h = model.mul(g, s)
            if h in words:
                continue
            if model.length(h) > radius:
                closed = False
                continue
            words[h] = words[g] + (letter,)
            if len(words) > cap:
                raise ResourceError(f"subgroup ball exceeds {cap} elements", {"elements_so_far": len(words)})
            queue.append(h)
    elements = sorted(words, key=model.sort_key)
    return SubgroupBall(elements, words, closed)


def replay_word(model, gens, word):
    g = model.identity
    for k, e in word:
        s = gens[k]
        g = model.mul(g, s if e > 0 else model.inv(s))
    return g


class GroupWallspace:
    """A finite family of wall translates on a finite point set, with the
    partial action of the group on points, walls and dual vertices.

    translates: sequence of (group element g, datum index i), standing for
        the wall g.H_i.  Repeats (same coset g.K_i) and translates whose
        restriction to ``points`` is degenerate are dropped.
    boundary: points beyond the translate range; vertices near their principal
        orientations are treated as truncation artefacts.
    test_points: points on which nesting claims are checked and witnessed.
    """

    def __init__(self, model, data, translates, points, boundary=(), test_points=None,
                 margin: int = DEFAULT_MARGIN, wall_budget: int = DEFAULT_WALL_BUDGET, name=None):
        self.model = model
        self.data = tuple(data)
        self.margin = margin
        self.radius = None
        self.wall_budget = wall_budget
        self.name = name
        self.points = list(points)
        self.boundary = frozenset(boundary)
        self.test_points = list(test_points) if test_points is not None else [
            p for p in self.points if p not in self.boundary]
        self._subgroups = [closure(model, d.subgroup) if d.subgroup else {model.identity} for d in self.data]
        self.translates = []
        self.key_index = {}
        walls = []
        seen_sets = {}
        for g, i in translates:
            key = self._key(g, i)
            if key in self.key_index:
                continue
            pos, neg = [], []
            for x in self.points:
                s = translate_side(model, self.data[i], g, x)
                if s >= 0:
                    pos.append(x)
                if s <= 0:
                    neg.append(x)
            w = Wall(pos, neg)
            if not w.strict(PLUS) or not w.strict(MINUS):
                continue
            uk = w.unordered()
            if uk in seen_sets:
                # different infinite walls with equal restrictions: keep the first
                continue
            seen_sets[uk] = len(walls)
            self.key_index[key] = len(walls)
            self.translates.append((g, i))
            walls.append(w)
        self.wallspace = Wallspace(self.points, walls, name)
        self._wall_maps = {}
        self._domain_lookup = {}

    def __repr__(self):
        return f"GroupWallspace({len(self.points)} points, {len(self.translates)} walls)"

    # keys and translates
    def _key(self, g, i):
        if isinstance(self.model, PermutationModel):
            d = self.data[i]
            pos = frozenset(x for x in self.points if translate_side(self.model, d, g, x) >= 0)
            neg = frozenset(x for x in self.points if translate_side(self.model, d, g, x) <= 0)
            return frozenset((pos, neg))
        coset = min((self.model.mul(g, k) for k in self._subgroups[i]), key=self.model.sort_key)
        return (i, coset)

    def wall_label(self, j: int) -> str:
        g, i = self.translates[j]
        return f"{self.model.format(g)}.{self.data[i].label}"

    def lookup(self, g, i):
        """(wall index, flipped) of the translate g.H_i, or HorizonError."""
        key = self._key(g, i)
        j = self.key_index.get(key)
        if j is None:
            raise HorizonError(f"translate {self.model.format(g)}.{self.data[i].label} is outside the family",
                               escaping=(g, i))
        flipped = False
        if isinstance(self.model, PermutationModel):
            x = next(iter(self.wallspace.walls[j].strict(PLUS)))
            flipped = translate_side(self.model, self.data[i], g, x) != PLUS
        return j, flipped

    # action on points and walls
    def act_point(self, g, x):
        y = self.model.act_point(g, x)
        if y not in self.wallspace.index:
            raise HorizonError(f"point {self._fmt_point(y)} escapes the truncation", escaping=y)
        return y

    def _fmt_point(self, x):
        if isinstance(self.model, PermutationModel):
            return repr(x)
        return self.model.format(x)

    def act_wall(self, g, j: int):
        h, i = self.translates[j]
        return self.lookup(self.model.mul(g, h), i)

    def wall_map(self, g):
        """Per wall j: (image index, flipped) or None; plus the image domain mask."""
        cached = self._wall_maps.get(g)
        if cached is None:
            images, domain = [], 0
            for j in range(len(self.translates)):
                try:
                    k, f = self.act_wall(g, j)
                except HorizonError:
                    images.append(None)
                    continue
                images.append((k, f))
                domain |= 1 << k
            cached = (images, domain)
            self._wall_maps[g] = cached
        return cached

    def act_orientation(self, g, o: Orientation) -> Orientation:
        images, _ = self.wall_map(g)
        bits = dom = 0
        src = o.full_domain
        for j, im in enumerate(images):
            if im is None or not (src >> j) & 1:
                continue
            k, f = im
            dom |= 1 << k
            if ((o.bits >> j) & 1) ^ f:
                bits |= 1 << k
        return Orientation(bits, o.n, dom)

    def act(self, g, obj):
        if isinstance(obj, Orientation):
            return self.act_orientation(g, obj)
        if isinstance(obj, Wall):
            try:
                j = self.wallspace.walls.index(obj)
            except ValueError:
                raise InputError("wall is not in the family") from None
            k, f = self.act_wall(g, j)
            w = self.wallspace.walls[k]
            return w.swapped() if f else w
        return self.act_point(g, obj)

    # dual complex
    @cached_property
    def complex(self) -> CubeComplex:
        return build_dual(self.wallspace, wall_budget=self.wall_budget)

    def principal_vertex(self, p) -> int:
        return self.complex.index[principal_orientation(self.wallspace, p).bits]

    @cached_property
    def depth(self) -> list[int]:
        """Distance of each vertex from the principal vertices of boundary points."""
        X = self.complex
        n = len(X.vertices)
        sources = sorted({self.principal_vertex(p) for p in self.boundary if p in self.wallspace.index})
        if not sources:
            return [n + self.margin] * n
        dist = X.distances
        return [int(min(dist[s, v] for s in sources)) for v in range(n)]

    def interior(self, v: int) -> bool:
        return self.depth[v] >= self.margin

    def image_vertex(self, g, v: int) -> int:
        """The vertex g.v; HorizonError if it cannot be pinned down."""
        X = self.complex
        images, domain = self.wall_map(g)
        for j in X.flippable(v):
            if images[j] is None:
                raise HorizonError(f"wall {self.wall_label(j)} at vertex {v} leaves the family under "
                                   f"{self.model.format(g)}", escaping=v)
        o = self.act_orientation(g, X.orientation(v))
        table = self._domain_lookup.get(domain)
        if table is None:
            table = {}
            for i, b in enumerate(X.vertices):
                table.setdefault(b & domain, []).append(i)
            self._domain_lookup[domain] = table
        hits = table.get(o.bits & domain, [])
        if len(hits) != 1:
            raise HorizonError(f"image of vertex {v} under {self.model.format(g)} is "
                               f"{'ambiguous' if hits else 'not a vertex'}", escaping=v)
        return hits[0]

    def fixes(self, g, v: int) -> bool | None:
        try:
            return self.image_vertex(g, v) == v
        except HorizonError:
            return None

    def cell_image(self, g, cell: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(sorted(self.image_vertex(g, v) for v in cell))


def ball_wallspace(model, data, radius: int, margin: int = DEFAULT_MARGIN,
                   wall_budget: int | None = None, name=None) -> GroupWallspace:
    """Translates g.H for every g in the radius ball, on the radius+1 ball."""
    if isinstance(model, PermutationModel):
        elements = model.elements
        translates = [(g, i) for i in range(len(data)) for g in elements]
        budget = wall_budget or max(DEFAULT_WALL_BUDGET, len(translates))
        gw = GroupWallspace(model, data, translates, model.points, margin=margin,
                            wall_budget=budget, name=name)
        gw.radius = radius
        return gw
    inner = model.ball(radius)
    points = model.ball(radius + 1)
    translates = [(g, i) for i in range(len(data)) for g in inner]
    boundary = [p for p in points if model.length(p) > radius]
    tests = [p for p in points if model.length(p) <= radius + 1 - margin]
    budget = wall_budget or max(DEFAULT_WALL_BUDGET, len(translates))
    gw = GroupWallspace(model, data, translates, points, boundary, tests, margin, budget, name)
    gw.radius = radius
    return gw


# certificates

@dataclass(frozen=True)
class Inconclusive:
    reason: str
    detail: str = ""

    ok = False

    def to_dict(self, model=None) -> dict:
        return {"type": "Inconclusive", "reason": self.reason, "detail": self.detail}


def _exact_points(model, gs):
    """Points on which comparing syllable translates g.H is exact.

    For a trivial-subgroup syllable wall the side of x relative to g.H only
    depends on the common prefix of x and g and, when x extends g, on the
    factor of the next syllable.  The prefixes of each g together with their
    one-syllable extensions realise every such pattern.
    """
    out, seen = [], set()
    for g in gs:
        for x in _prefix_star(model, g):
            if x not in seen:
                seen.add(x)
                out.append(x)
    return out


@lru_cache(maxsize=1 << 16)
def _prefix_star(model, g) -> tuple:
    letters = [((f, e),) for f, fac in enumerate(model.factors) for e in range(1, len(fac))]
    out = set()
    for k in range(len(g) + 1):
        p = g[:k]
        out.add(p)
        out.update(model.mul(p, s) for s in letters)
    return tuple(sorted(out, key=model.sort_key))


def _strictly_inside(model, datum, small_g, big_g, sign, points):
    """Check strict(small_g.H, sign) is a proper subset of strict(big_g.H, sign).

    Returns (ok, witness) where the witness lies in the big strict side but
    not in the small one.  Permutation models are checked on ``points``;
    free products with syllable data are checked exactly, whatever the
    truncation (``points`` is then ignored).
    """
    if not isinstance(model, PermutationModel) and not datum.subgroup:
        points = _exact_points(model, (small_g, big_g))
    witness = None
    fast = getattr(datum, "translate_side", None)
    if fast is None:
        inv_small, inv_big = model.inv(small_g), model.inv(big_g)
        act, side = model.act_point, datum.side
    for x in points:
        if fast is not None:
            s_small, s_big = fast(small_g, x), fast(big_g, x)
        else:
            s_small, s_big = side(act(inv_small, x)), side(act(inv_big, x))
        if s_small == sign and s_big != sign:
            return False, None
        if witness is None and s_big == sign and s_small != sign:
            witness = x
    return witness is not None, witness


@dataclass(frozen=True)
class SkewerCertificate:
    """h^n maps the strict ``sign`` side of wall ``g.H`` properly into itself."""

    element: Any
    wall: int
    translate: Any
    datum: int
    sign: int
    exponent: int
    witness: Any

    ok = True

    def verify(self, gw: GroupWallspace) -> bool:
        m = gw.model
        g, i = self.translate
        hn = m.power(self.element, self.exponent)
        good, _ = _strictly_inside(m, gw.data[i], m.mul(hn, g), g, self.sign, gw.test_points)
        if not good:
            return False
        d = gw.data[i]
        return (translate_side(m, d, g, self.witness) == self.sign
                and translate_side(m, d, m.mul(hn, g), self.witness) != self.sign)

    def to_dict(self, model=None) -> dict:
        fmt = model.format if model is not None else repr
        pfmt = fmt if not isinstance(model, PermutationModel) else repr
        return {
            "type": "SkewerCertificate",
            "element": fmt(self.element),
            "wall": self.wall,
            "translate": fmt(self.translate[0]),
            "datum": self.datum,
            "side": "+" if self.sign > 0 else "-",
            "exponent": self.exponent,
            "witness": pfmt(self.witness),
        }


@dataclass(frozen=True)
class AxisSepCertificate:
    """h^-n V < V < h^n V for V the ``sign`` side of ``conjugator.base.H``."""

    element: Any
    datum: int
    base: Any
    conjugator: Any
    sign: int
    exponent: int
    witnesses: tuple

    ok = True

    @property
    def translate(self):
        return self.conjugator, self.base

    def verify(self, model, data, points) -> bool:
        d = data[self.datum]
        g = model.mul(self.conjugator, self.base)
        hn = model.power(self.element, self.exponent)
        hin = model.inv(hn)
        lower, _ = _strictly_inside(model, d, model.mul(hin, g), g, self.sign, points)
        upper, _ = _strictly_inside(model, d, g, model.mul(hn, g), self.sign, points)
        if not (lower and upper):
            return False
        w1, w2 = self.witnesses
        return (translate_side(model, d, g, w1) == self.sign
                and translate_side(model, d, model.mul(hin, g), w1) != self.sign
                and translate_side(model, d, model.mul(hn, g), w2) == self.sign
                and translate_side(model, d, g, w2) != self.sign)

    def to_dict(self, model=None) -> dict:
        fmt = model.format if model is not None else repr
        pfmt = fmt if not isinstance(model, PermutationModel) else repr
        return {
            "type": "AxisSepCertificate",
            "element": fmt(self.element),
            "datum": self.datum,
            "base": fmt(self.base),
            "conjugator": fmt(self.conjugator),
            "side": "+" if self.sign > 0 else "-",
            "exponent": self.exponent,
            "witnesses": [pfmt(w) for w in self.witnesses],
        }


@dataclass(frozen=True)
class EllipticityCertificate:
    generators: tuple
    vertex: int
    orientation: int

    ok = True

    def verify(self, gw: GroupWallspace) -> bool:
        X = gw.complex
        if X.vertices[self.vertex] != self.orientation:
            return False
        return all(gw.fixes(s, self.vertex) is True for s in self.generators)

    def to_dict(self, model=None) -> dict:
        fmt = model.format if model is not None else repr
        return {
            "type": "EllipticityCertificate",
            "generators": [fmt(s) for s in self.generators],
            "vertex": self.vertex,
            "orientation": format(self.orientation, "b"),
        }


@dataclass(frozen=True)
class DeepnessCertificate:
    """P-points in one side of a wall at strictly increasing distance from
    the wall's core; each point carries its word in the P generators."""

    points: tuple
    words: tuple
    distances: tuple

    def verify(self, model, gens, datum, g, sign, core) -> bool:
        if list(self.distances) != sorted(set(self.distances)):
            return False
        for x, w, d in zip(self.points, self.words, self.distances):
            if replay_word(model, gens, w) != x:
                return False
            if translate_side(model, datum, g, x) != sign:
                return False
            if _core_distance(model, x, core) != d:
                return False
        return True


@dataclass(frozen=True)
class Deepness:
    verdict: str  # "deep", "shallow" or "inconclusive"
    certificate: DeepnessCertificate | None = None
    detail: str = ""


# searches

def fixed_point_search(gens, gw: GroupWallspace):
    """Interior vertex fixed by every generator, or Inconclusive."""
    gens = tuple(gens)
    X = gw.complex
    candidates = [v for v in range(len(X.vertices)) if gw.interior(v)]
    if not gens:
        v = candidates[0] if candidates else 0
        return EllipticityCertificate((), v, X.vertices[v])
    for v in candidates:
        if all(gw.fixes(s, v) is True for s in gens):
            return EllipticityCertificate(gens, v, X.vertices[v])
    return Inconclusive("no-fixed-vertex", f"none of {len(candidates)} interior vertices is fixed")


def skewer_search(h, gw: GroupWallspace, n_max: int = DEFAULT_N_MAX, walls=None):
    """First (wall, n, side) with h^n strictly shrinking the side; ``walls``
    restricts the search to those wall indices."""
    m = gw.model
    order = m.order(h)
    if order is not None:
        return Inconclusive("torsion", f"element has order {order}")
    powers = [m.power(h, n) for n in range(1, n_max + 1)]
    for j in (range(len(gw.translates)) if walls is None else walls):
        g, i = gw.translates[j]
        d = gw.data[i]
        for n, hn in enumerate(powers, start=1):
            hg = m.mul(hn, g)
            for sign in (PLUS, MINUS):
                good, wit = _strictly_inside(m, d, hg, g, sign, gw.test_points)
                if good:
                    return SkewerCertificate(h, j, (g, i), i, sign, n, wit)
    searched = len(gw.translates) if walls is None else len(walls)
    return Inconclusive("horizon", f"no nesting for n <= {n_max} on {searched} walls")


def axis_separation_search(h, model, data, points, n_max: int = DEFAULT_N_MAX,
                           conjugator_radius: int = 2, bases=None):
    """Search (H, n, g, side) with h^-n V < V < h^n V for V a side of g.H.

    ``bases`` optionally gives, per datum, the base element the conjugator is
    applied to (default identity), so a specific wall translate can be probed
    with conjugator radius 0.
    """
    order = model.order(h)
    if order is not None:
        return Inconclusive("torsion", f"element has order {order}")
    conjugators = model.ball(conjugator_radius)
    bases = list(bases) if bases is not None else [model.identity] * len(data)
    powers = [(model.power(h, n), model.power(h, -n)) for n in range(1, n_max + 1)]
    for i, d in enumerate(data):
        for n, (hn, hin) in enumerate(powers, start=1):
            for c in conjugators:
                g = model.mul(c, bases[i])
                for sign in (PLUS, MINUS):
                    lower, w1 = _strictly_inside(model, d, model.mul(hin, g), g, sign, points)
                    if not lower:
                        continue
                    upper, w2 = _strictly_inside(model, d, g, model.mul(hn, g), sign, points)
                    if upper:
                        return AxisSepCertificate(h, i, bases[i], c, sign, n, (w1, w2))
    return Inconclusive("horizon", f"no double nesting for n <= {n_max}, conjugators of length <= {conjugator_radius}")


def axis_separation_from_skewer(cert: SkewerCertificate, gw: GroupWallspace):
    """Probe the skewered wall itself with the identity conjugator."""
    g, i = cert.translate
    res = axis_separation_search(cert.element, gw.model, [gw.data[i]], gw.test_points,
                                 n_max=cert.exponent, conjugator_radius=0, bases=[g])
    # the search saw a one-element data list; point back at the real datum
    return replace(res, datum=i) if res.ok else res


def _core(model, datum, g, subgroup):
    """Core of the translate g.H: the coset g.K for syllable data."""
    if isinstance(model, PermutationModel):
        return [x for x in model.points if translate_side(model, datum, g, x) == 0]
    return [model.mul(g, k) for k in subgroup]


def _core_distance(model, x, core) -> int:
    if isinstance(model, PermutationModel):
        return 0 if x in core else 1
    return min(model.length(model.mul(model.inv(c), x)) for c in core)


def deepness(model, P_gens, datum, g, sign, horizon: int = DEFAULT_RADIUS) -> Deepness:
    """Is P deep in the ``sign`` side of the translate g.H?"""
    if horizon < 2:
        raise InputError(f"deepness horizon {horizon} < 2")
    P_gens = list(P_gens)
    K = closure(model, datum.subgroup) if datum.subgroup else {model.identity}
    core = _core(model, datum, g, K)
    if isinstance(model, PermutationModel):
        return Deepness("shallow", detail="finite group")
    # a point at distance d from the core has length <= d + |core|; one extra
    # step keeps parity-restricted subgroups from stalling just short
    reach = horizon + max(model.length(c) for c in core) + 1
    ball = subgroup_ball(model, P_gens, reach)
    inside = []
    for x in ball.elements:
        if translate_side(model, datum, g, x) == sign:
            inside.append((_core_distance(model, x, core), x))
    if ball.closed:
        return Deepness("shallow", detail=f"P is finite ({len(ball.elements)} elements)")
    far = max((d for d, _ in inside), default=0)
    if far >= horizon:
        chosen = {}
        for d, x in sorted(inside, key=lambda t: (t[0], model.sort_key(t[1]))):
            chosen.setdefault(d, x)
        dists = tuple(sorted(chosen))
        pts = tuple(chosen[d] for d in dists)
        cert = DeepnessCertificate(pts, tuple(ball.words[x] for x in pts), dists)
        return Deepness("deep", cert)
    if far < horizon // 2:
        return Deepness("shallow", detail=f"P-points in the side stop at distance {far}")
    return Deepness("inconclusive", detail=f"farthest P-point at distance {far} < horizon {horizon}")


@dataclass(frozen=True)
class EssentialWall:
    datum: int
    translate: Any
    plus: Deepness = field(compare=False)
    minus: Deepness = field(compare=False)


def essential_wall_search(model, P_gens, data, R: int, horizon: int = DEFAULT_RADIUS):
    """P-orbit representatives of translates g.H_i (g.K_i meeting the R-ball)
    that cut P essentially, i.e. P is deep in both sides."""
    P_gens = list(P_gens)
    found = []
    for i, d in enumerate(data):
        K = closure(model, d.subgroup) if d.subgroup else {model.identity}
        seen = set()
        for g in model.ball(max(R - 1, 0)):
            coset = min((model.mul(g, k) for k in K), key=model.sort_key)
            if coset in seen:
                continue
            seen.add(coset)
            plus = deepness(model, P_gens, d, coset, PLUS, horizon)
            if plus.verdict != "deep":
                continue
            minus = deepness(model, P_gens, d, coset, MINUS, horizon)
            if minus.verdict != "deep":
                continue
            found.append(EssentialWall(i, coset, plus, minus))
    # P-orbit representatives: g' ~ g iff g' k g^-1 lies in P for some k in K
    reps = []
    for ew in found:
        K = closure(model, data[ew.datum].subgroup) if data[ew.datum].subgroup else {model.identity}
        same = False
        for rep in reps:
            if rep.datum != ew.datum:
                continue
            radius = model.length(ew.translate) + model.length(rep.translate) + 2
            Pb = subgroup_ball(model, P_gens, radius)
            if any(model.mul(model.mul(ew.translate, k), model.inv(rep.translate)) in Pb for k in K):
                same = True
                break
        if not same:
            reps.append(ew)
    return reps


@dataclass(frozen=True)
class FixedGeodesic:
    path: tuple[int, ...]
    generators: tuple
    index: int
    order: int


def pointwise_fixed_geodesic(K_gens, gw: GroupWallspace, v1: int, v2: int, max_paths: int = 10_000) -> FixedGeodesic:
    """Combinatorial geodesic v1 -> v2 whose pointwise stabiliser in the finite
    group K has the smallest index (ties: lexicographically first path)."""
    model = gw.model
    K_gens = list(K_gens)
    for s in K_gens:
        for v in (v1, v2):
            if gw.fixes(s, v) is not True:
                raise InputError(f"generator {model.format(s)} does not fix vertex {v}")
    K = sorted(closure(model, K_gens), key=model.sort_key)
    X = gw.complex
    dist = X.distances
    adj = X.graph.adjacency
    paths = []

    def extend(path):
        if len(paths) >= max_paths:
            raise ResourceError(f"more than {max_paths} geodesics", {"paths_so_far": len(paths)})
        x = path[-1]
        if x == v2:
            paths.append(tuple(path))
            return
        for y in adj[x]:
            if dist[y, v2] == dist[x, v2] - 1:
                extend(path + [y])

    extend([v1])
    best = None
    for p in sorted(paths):
        stab = [k for k in K if all(gw.fixes(k, v) is True for v in p)]
        if best is None or len(stab) > len(best[1]):
            best = (p, stab)
    path, stab = best
    gens = _greedy_generators(model, stab)
    return FixedGeodesic(path, tuple(gens), len(K) // len(stab), len(stab))


def _greedy_generators(model, elements):
    """Shortlex-greedy generating set of the finite subgroup ``elements``."""
    gens, span = [], {model.identity}
    for g in sorted(elements, key=model.sort_key):
        if g in span:
            continue
        gens.append(g)
        span = closure(model, gens)
    return gens
