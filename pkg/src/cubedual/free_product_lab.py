"""Free products of finite groups: normal forms, Cayley balls, syllable walls.

An element is a tuple of syllables ``(factor, element)``; adjacent syllables
come from different factors and none is the factor identity (index 0).  The
empty tuple is the identity.  Syllable length is word length for the
generating set of all non-trivial factor elements.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError, ResourceError
from .pocset import Wall

DEFAULT_MAX_RADIUS = 8
DEFAULT_MAX_BALL = 200_000


class FiniteGroup:
    """Multiplication table over labels; element 0 must be the identity."""

    def __init__(self, name: str, labels: Sequence[str], table: Sequence[Sequence[int]]):
        self.name = name
        self.labels = tuple(labels)
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self._validate()
        self.inverse = tuple(next(j for j in range(len(self.labels)) if self.table[i][j] == 0)
                             for i in range(len(self.labels)))

    def __len__(self):
        return len(self.labels)

    def _validate(self):
        n = len(self.labels)
        t = self.table
        if n == 0 or len(t) != n or any(len(row) != n for row in t):
            raise InputError(f"factor {self.name}: table is not {n}x{n}")
        if len(set(self.labels)) != n:
            raise InputError(f"factor {self.name}: repeated element labels")
        if any(not 0 <= x < n for row in t for x in row):
            raise InputError(f"factor {self.name}: table entry out of range")
        for i in range(n):
            if t[0][i] != i or t[i][0] != i:
                raise InputError(f"factor {self.name}: element 0 is not an identity")
            if 0 not in t[i]:
                raise InputError(f"factor {self.name}: {self.labels[i]} has no inverse")
            if sorted(t[i]) != list(range(n)):
                raise InputError(f"factor {self.name}: row {self.labels[i]} is not a permutation")
        for a, b, c in itertools.product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise InputError(
                    f"factor {self.name}: not associative at "
                    f"({self.labels[a]}, {self.labels[b]}, {self.labels[c]})")

    def order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.table[y][x]
            k += 1
        return k

    @classmethod
    def cyclic(cls, name: str, n: int, letter: str) -> "FiniteGroup":
        labels = ["e"] + [letter if k == 1 else f"{letter}{k}" for k in range(1, n)]
        return cls(name, labels, [[(i + j) % n for j in range(n)] for i in range(n)])

    @classmethod
    def symmetric3(cls, name: str, letter: str) -> "FiniteGroup":
        perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0)]
        names = ["e", f"{letter}r", f"{letter}rr", f"{letter}s", f"{letter}sr", f"{letter}srr"]
        pos = {p: i for i, p in enumerate(perms)}
        table = [[pos[tuple(p[q[k]] for k in range(3))] for q in perms] for p in perms]
        return cls(name, names, table)

    def to_dict(self) -> dict:
        return {"name": self.name, "elements": list(self.labels), "table": [list(r) for r in self.table]}


def preset_factor(preset: str, name: str, letter: str | None = None) -> FiniteGroup:
    letter = letter or name.lower()
    if preset == "Z2":
        return FiniteGroup.cyclic(name, 2, letter)
    if preset == "Z3":
        return FiniteGroup.cyclic(name, 3, letter)
    if preset == "S3":
        return FiniteGroup.symmetric3(name, letter)
    raise InputError(f"unknown factor preset {preset!r} (known: Z2, Z3, S3)")


class FreeProductModel:
    kind = "free_product"

    def __init__(self, factors: Sequence[FiniteGroup], name: str | None = None):
        if not factors:
            raise InputError("free product needs at least one factor")
        self.factors = tuple(factors)
        self.name = name or "*".join(f.name for f in self.factors)
        self.factor_index = {f.name: i for i, f in enumerate(self.factors)}
        if len(self.factor_index) != len(self.factors):
            raise InputError("factor names must be distinct")
        self.letters = {}
        for fi, f in enumerate(self.factors):
            for ei in range(1, len(f)):
                lab = f.labels[ei]
                if lab in self.letters:
                    raise InputError(f"label {lab!r} used by two factors")
                self.letters[lab] = ((fi, ei),)
        self._by_length = sorted(self.letters, key=len, reverse=True)
        self._compact = all(len(lab) == 1 for lab in self.letters)

    def __repr__(self):
        return f"FreeProductModel({self.name})"

    # group operations
    identity = ()

    def mul(self, g: tuple, h: tuple) -> tuple:
        if not g:
            return h
        if not h:
            return g
        out = list(g)
        i, nh = 0, len(h)
        while i < nh and out and out[-1][0] == h[i][0]:
            f = h[i][0]
            prod = self.factors[f].table[out[-1][1]][h[i][1]]
            out.pop()
            i += 1
            if prod:
                out.append((f, prod))
                break
        return tuple(out) + tuple(h[i:])

    def inv(self, g: tuple) -> tuple:
        return tuple((f, self.factors[f].inverse[e]) for f, e in reversed(g))

    def power(self, g: tuple, n: int) -> tuple:
        if n < 0:
            g, n = self.inv(g), -n
        out = ()
        base = g
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def length(self, g: tuple) -> int:
        return len(g)

    def act_point(self, g, x):
        return self.mul(g, x)

    def order(self, g: tuple) -> int | None:
        """Finite order, or None for infinite order."""
        while len(g) >= 2 and g[0][0] == g[-1][0]:
            first = (g[0],)
            g = self.mul(self.mul(self.inv(first), g), first)
        if not g:
            return 1
        if len(g) == 1:
            f, e = g[0]
            return self.factors[f].order(e)
        return None

    @property
    def generators(self) -> tuple[tuple, ...]:
        return tuple(self.letters[lab] for lab in sorted(self.letters, key=self._letter_order))

    def _letter_order(self, lab):
        return self.letters[lab][0]

    # words and formatting
    def parse(self, word) -> tuple:
        """Normal form of a word given as a label string or sequence of labels."""
        if isinstance(word, tuple) and all(isinstance(s, tuple) for s in word):
            return self.normal_form_syllables(word)
        if isinstance(word, str):
            tokens = self._tokenize(word)
        else:
            tokens = list(word)
        g = ()
        for tok in tokens:
            try:
                g = self.mul(g, self.letters[tok])
            except KeyError:
                raise InputError(f"unknown generator label {tok!r}") from None
        return g

    def _tokenize(self, word: str) -> list[str]:
        word = word.strip()
        if word in ("", "1", "e"):
            return []
        parts = [p for p in word.replace("·", " ").replace(".", " ").replace("*", " ").split() if p]
        tokens = []
        for part in parts:
            i = 0
            while i < len(part):
                for lab in self._by_length:
                    if part.startswith(lab, i):
                        tokens.append(lab)
                        i += len(lab)
                        break
                else:
                    raise InputError(f"cannot parse {word!r} at {part[i:]!r}")
        return tokens

    def normal_form_syllables(self, syllables: Iterable[tuple[int, int]]) -> tuple:
        g = ()
        for f, e in syllables:
            if not 0 <= f < len(self.factors) or not 0 <= e < len(self.factors[f]):
                raise InputError(f"bad syllable {(f, e)!r}")
            if e:
                g = self.mul(g, ((f, e),))
        return g

    def format(self, g: tuple) -> str:
        if not g:
            return "1"
        labels = [self.factors[f].labels[e] for f, e in g]
        return "".join(labels) if self._compact else ".".join(labels)

    def sort_key(self, g: tuple):
        return (len(g), g)

    def first_factor(self, g: tuple) -> int | None:
        return g[0][0] if g else None

    # balls
    def ball(self, r: int, max_radius: int = DEFAULT_MAX_RADIUS,
             max_size: int = DEFAULT_MAX_BALL) -> list[tuple]:
        """All normal forms of syllable length <= r in shortlex order."""
        if r < 0:
            raise InputError(f"negative radius {r}")
        if r > max_radius:
            raise ResourceError(f"radius {r} exceeds the maximum {max_radius}",
                                {"radius": r, "max_radius": max_radius})
        layer = [()]
        out = [()]
        for _ in range(r):
            nxt = []
            for g in layer:
                last = g[-1][0] if g else None
                for f, fac in enumerate(self.factors):
                    if f == last:
                        continue
                    for e in range(1, len(fac)):
                        nxt.append(g + ((f, e),))
            out.extend(nxt)
            if len(out) > max_size:
                raise ResourceError(f"ball of radius {r} exceeds {max_size} elements",
                                    {"radius": r, "elements_so_far": len(out)})
            layer = nxt
        return sorted(out, key=self.sort_key)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "name": self.name, "factors": [f.to_dict() for f in self.factors]}


def normal_form(model: FreeProductModel, word) -> tuple:
    return model.parse(word)


def cayley_ball(model: FreeProductModel, r: int, max_radius: int = DEFAULT_MAX_RADIUS):
    """Points of the radius-r ball and edges ``g -- g*s`` inside it."""
    points = model.ball(r, max_radius=max_radius)
    index = {g: i for i, g in enumerate(points)}
    edges = set()
    for g in points:
        for s in model.generators:
            h = model.mul(g, s)
            j = index.get(h)
            if j is not None and j != index[g]:
                edges.add(tuple(sorted((index[g], j))))
    return points, sorted(edges)


def ball_size_formula(model: FreeProductModel, r: int) -> int:
    """1 + sum over alternating factor sequences of the syllable choices."""
    sizes = [len(f) - 1 for f in model.factors]
    k = len(sizes)
    total = 1
    # counts[f] = number of normal forms of the current length ending in factor f
    counts = sizes[:]
    for _ in range(r):
        total += sum(counts)
        s = sum(counts)
        counts = [(s - counts[f]) * sizes[f] for f in range(k)]
    return total


@dataclass(frozen=True)
class SyllableDatum:
    """Codimension-1 datum with trivial subgroup cut out by first syllables.

    The positive side is every element whose normal form starts in one of
    ``factors``; the identity has no first syllable and forms the core.
    """

    label: str
    factors: frozenset
    subgroup: tuple = ()

    def side(self, x: tuple) -> int:
        if not x:
            return 0
        return 1 if x[0][0] in self.factors else -1

    def translate_side(self, g: tuple, x: tuple) -> int:
        """side(g^-1 x) without multiplying: if x extends g the next syllable
        decides, otherwise g^-1 x starts in the factor of g's last syllable."""
        n = len(g)
        if x[:n] == g:
            if len(x) == n:
                return 0
            return 1 if x[n][0] in self.factors else -1
        return 1 if g[-1][0] in self.factors else -1

    def describe(self, model: FreeProductModel) -> dict:
        return {
            "label": self.label,
            "first_syllable_in": sorted(model.factors[f].name for f in self.factors),
            "subgroup": [model.format(k) for k in self.subgroup],
        }


def syllable_datum(model: FreeProductModel, factor_names: Iterable[str], label: str | None = None) -> SyllableDatum:
    names = list(factor_names)
    try:
        idx = frozenset(model.factor_index[n] for n in names)
    except KeyError as exc:
        raise InputError(f"unknown factor {exc.args[0]!r}") from None
    if not idx or len(idx) == len(model.factors):
        raise InputError("first-syllable factor subset must be non-empty and proper")
    return SyllableDatum(label or "first syllable in " + "*".join(names), idx)


def syllable_wall(model: FreeProductModel, ball: Sequence[tuple], factor_names: Iterable[str]) -> Wall:
    """Wall on ``ball`` split by the first syllable; the identity is the core."""
    datum = syllable_datum(model, factor_names)
    pos = [x for x in ball if datum.side(x) >= 0]
    neg = [x for x in ball if datum.side(x) <= 0]
    return Wall(pos, neg)


# presets
def dihedral() -> FreeProductModel:
    """Z/2 * Z/2 = <a, b>."""
    return FreeProductModel([preset_factor("Z2", "A"), preset_factor("Z2", "B")], "Z2*Z2")


def abc(preset: str = "Z2") -> FreeProductModel:
    """A * B * C with every factor the given preset (labels a, b, c)."""
    return FreeProductModel([preset_factor(preset, n) for n in "ABC"], f"A*B*C ({preset})")


def triple_involutions() -> FreeProductModel:
    return abc("Z2")


def example_walls(model: FreeProductModel) -> list[SyllableDatum]:
    """The two walls with trivial stabiliser from the A*B*C example: first
    syllable in A, and first syllable in A*B."""
    return [syllable_datum(model, ["A"], "K1"), syllable_datum(model, ["A", "B"], "K2")]
