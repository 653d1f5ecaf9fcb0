"""Finite wallspaces.

A wall is a cover of the point set by two sides whose overlap is the *core*.
Order and crossing predicates only look at the strict sides (side minus core),
which makes nesting and crossing mutually exclusive even when cores are
non-empty.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .errors import InputError

PLUS = 1
MINUS = -1


def _sign(sign) -> int:
    if sign in (1, "+"):
        return PLUS
    if sign in (-1, "-", "−"):
        return MINUS
    raise InputError(f"not a side sign: {sign!r}")


@dataclass(frozen=True)
class Wall:
    positive: frozenset
    negative: frozenset

    def __post_init__(self):
        object.__setattr__(self, "positive", frozenset(self.positive))
        object.__setattr__(self, "negative", frozenset(self.negative))

    @property
    def core(self) -> frozenset:
        return self.positive & self.negative

    @property
    def points(self) -> frozenset:
        return self.positive | self.negative

    def side(self, sign) -> frozenset:
        return self.positive if _sign(sign) == PLUS else self.negative

    def strict(self, sign) -> frozenset:
        return self.side(sign) - self.core

    def side_of(self, point) -> int:
        """+1 or -1 for strict sides, 0 for a core point."""
        inp, inn = point in self.positive, point in self.negative
        if inp and inn:
            return 0
        if inp:
            return PLUS
        if inn:
            return MINUS
        raise InputError(f"point {point!r} is not covered by the wall")

    def swapped(self) -> "Wall":
        return Wall(self.negative, self.positive)

    def unordered(self) -> frozenset:
        return frozenset((self.positive, self.negative))


@dataclass(frozen=True)
class Halfspace:
    wall: int
    sign: int
    points: frozenset = field(compare=False)

    def __repr__(self):
        return f"Halfspace(wall={self.wall}, sign={'+' if self.sign > 0 else '-'})"


def crosses(w1: Wall, w2: Wall) -> bool:
    """True iff all four quarters of strict sides are non-empty."""
    if w1.points != w2.points:
        raise InputError("walls belong to different wallspaces")
    return all(
        w1.strict(s) & w2.strict(t)
        for s in (PLUS, MINUS)
        for t in (PLUS, MINUS)
    )


def nests(h1: Halfspace, h2: Halfspace) -> bool:
    """Strict inclusion of strict sides."""
    return h1.points < h2.points


class Wallspace:
    """Finite point set with an ordered list of walls.

    Walls are validated on construction: sides must cover the points, both
    strict sides must be non-empty and no wall may repeat (as an unordered
    pair of sides).
    """

    def __init__(self, points: Iterable[Hashable], walls: Sequence[Wall], name: str | None = None):
        self.points = tuple(points)
        if len(set(self.points)) != len(self.points):
            raise InputError("duplicate point identifiers")
        self.index = {p: i for i, p in enumerate(self.points)}
        self.name = name
        pts = frozenset(self.points)
        seen = {}
        checked = []
        for j, w in enumerate(walls):
            if not isinstance(w, Wall):
                w = Wall(*w)
            if w.points != pts:
                extra = w.points - pts
                if extra:
                    raise InputError(f"wall {j} mentions unknown points {sorted(map(str, extra))}")
                raise InputError(f"wall {j} does not cover every point")
            if not w.strict(PLUS) or not w.strict(MINUS):
                raise InputError(f"wall {j} has an empty strict side")
            key = w.unordered()
            if key in seen:
                raise InputError(f"wall {j} duplicates wall {seen[key]}")
            seen[key] = j
            checked.append(w)
        self.walls = tuple(checked)
        self._masks = None

    def __len__(self):
        return len(self.walls)

    def __repr__(self):
        return f"Wallspace({len(self.points)} points, {len(self.walls)} walls)"

    # bitmask views, bit i <-> points[i]
    def _mask(self, subset) -> int:
        m = 0
        for p in subset:
            m |= 1 << self.index[p]
        return m

    @property
    def masks(self):
        """Per wall: (positive, negative, strict positive, strict negative)."""
        if self._masks is None:
            out = []
            for w in self.walls:
                pos, neg = self._mask(w.positive), self._mask(w.negative)
                core = pos & neg
                out.append((pos, neg, pos & ~core, neg & ~core))
            self._masks = tuple(out)
        return self._masks

    def halfspace(self, wall: int, sign) -> Halfspace:
        s = _sign(sign)
        return Halfspace(wall, s, self.walls[wall].strict(s))

    def halfspaces(self):
        for j in range(len(self.walls)):
            yield self.halfspace(j, PLUS)
            yield self.halfspace(j, MINUS)

    def crosses(self, i: int, j: int) -> bool:
        _, _, pi, ni = self.masks[i]
        _, _, pj, nj = self.masks[j]
        return bool(pi & pj and pi & nj and ni & pj and ni & nj)

    def nests(self, h1: Halfspace, h2: Halfspace) -> bool:
        return nests(h1, h2)

    def _point(self, p) -> int:
        try:
            return self.index[p]
        except KeyError:
            raise InputError(f"unknown point {p!r}") from None

    def wall_separation(self, x, y) -> int:
        """Number of walls with x and y in opposite strict sides."""
        bx, by = 1 << self._point(x), 1 << self._point(y)
        count = 0
        for _, _, sp, sn in self.masks:
            if (sp & bx and sn & by) or (sn & bx and sp & by):
                count += 1
        return count

    def relabeled(self, flips: Iterable[int]) -> "Wallspace":
        flips = set(flips)
        walls = [w.swapped() if j in flips else w for j, w in enumerate(self.walls)]
        return Wallspace(self.points, walls, self.name)

    # file format: {"points": [...], "walls": [{"positive": [...], "negative": [...]}]}
    def to_dict(self) -> dict:
        order = self.index.__getitem__
        d = {
            "points": list(self.points),
            "walls": [
                {"positive": sorted(w.positive, key=order), "negative": sorted(w.negative, key=order)}
                for w in self.walls
            ],
        }
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "Wallspace":
        try:
            points = data["points"]
            walls = [Wall(w["positive"], w["negative"]) for w in data["walls"]]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed wallspace description: {exc}") from None
        points = [tuple(p) if isinstance(p, list) else p for p in points]
        return cls(points, walls, data.get("name"))

    @classmethod
    def load(cls, path) -> "Wallspace":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"{path} is not valid JSON: {exc}") from None
        return cls.from_dict(data)
