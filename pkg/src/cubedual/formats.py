"""File formats: group models, pipeline configs, graphs, JSON and DOT output."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .coarse_geometry import Graph
from .dual_complex import CubeComplex, hyperplane_of
from .errors import InputError
from .free_product_lab import FiniteGroup, FreeProductModel, preset_factor, syllable_datum
from .group_action import PermutationModel, PointSetDatum
from .pocset import Wallspace
from .refinement import Peripheral

CUBE_NAMES = {0: "vertex", 1: "edge", 2: "square", 3: "three-cube"}


def load_json(path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None


def dumps(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_plain(v) for v in obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalars
        return obj.item()
    return obj


@dataclass
class GroupSetup:
    """A group model with its codimension-1 data and peripherals."""

    model: Any
    data: list
    peripherals: list = field(default_factory=list)
    horizons: dict = field(default_factory=dict)
    name: str = ""


def _factor(raw, k) -> FiniteGroup:
    if not isinstance(raw, dict) or "name" not in raw:
        raise InputError(f"factor {k}: expected an object with a name")
    if "preset" in raw:
        return preset_factor(raw["preset"], raw["name"], raw.get("letter"))
    try:
        return FiniteGroup(raw["name"], raw["elements"], raw["table"])
    except KeyError as exc:
        raise InputError(f"factor {raw['name']!r}: missing {exc.args[0]!r}") from None


def parse_group(raw: dict) -> GroupSetup:
    """Build a GroupSetup from a decoded group file."""
    if not isinstance(raw, dict):
        raise InputError("group file must hold an object")
    kind = raw.get("kind")
    if kind in ("free_product", "free_product_of_finite_groups"):
        factors = [_factor(f, k) for k, f in enumerate(raw.get("factors", []))]
        if len(factors) < 2:
            raise InputError("a free product needs at least two factors")
        model = FreeProductModel(factors, raw.get("name"))
        data = []
        for k, w in enumerate(raw.get("walls", [])):
            if "first_syllable_in" not in w:
                raise InputError(f"wall {k}: free product walls are given by 'first_syllable_in'")
            data.append(syllable_datum(model, w["first_syllable_in"], w.get("label", f"H{k}")))
    elif kind in ("finite_permutation_group", "permutation"):
        try:
            model = PermutationModel(raw["points"], raw["generators"], raw.get("name"))
        except KeyError as exc:
            raise InputError(f"permutation group: missing {exc.args[0]!r}") from None
        data = []
        for k, w in enumerate(raw.get("walls", [])):
            pos, neg = frozenset(w.get("positive", ())), frozenset(w.get("negative", ()))
            unknown = (pos | neg) - set(model.points)
            if unknown:
                raise InputError(f"wall {k}: unknown points {sorted(map(str, unknown))}")
            if pos | neg != set(model.points):
                raise InputError(f"wall {k}: sides do not cover the points")
            subgroup = tuple(model.parse(s) for s in w.get("subgroup", ()))
            data.append(PointSetDatum(w.get("label", f"H{k}"), pos, neg, subgroup))
    else:
        raise InputError(f"unknown group kind {kind!r}")
    peripherals = []
    for k, p in enumerate(raw.get("peripherals", [])):
        gens = tuple(model.parse(w) for w in p.get("generators", []))
        peripherals.append(Peripheral(p.get("label", f"P{k}"), gens))
    return GroupSetup(model, data, peripherals, dict(raw.get("horizons", {})), raw.get("name", ""))


def load_group(path) -> GroupSetup:
    return parse_group(load_json(path))


def load_wallspace(path) -> Wallspace:
    ws = Wallspace.from_dict(load_json(path))
    ws.name = ws.name or Path(path).stem
    return ws


def load_graph(path) -> Graph:
    """A graph file: ``{"vertices": n, "edges": [[u, v], ...]}``."""
    raw = load_json(path)
    try:
        return Graph(int(raw["vertices"]), [tuple(e) for e in raw["edges"]])
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: expected 'vertices' and 'edges' ({exc})") from None


def census_line(X: CubeComplex) -> str:
    """Headline such as '8 vertices, 1 three-cube'."""
    census = X.census()
    top = max(census)
    n = census[0]
    head = f"{n} vert{'ex' if n == 1 else 'ices'}"
    if top == 0:
        return head
    name = CUBE_NAMES.get(top, f"{top}-cube")
    count = census[top]
    return f"{head}, {count} {name}{'' if count == 1 else 's'}"


def census_table(X: CubeComplex) -> str:
    lines = ["dimension  count"]
    for k, v in X.census().items():
        lines.append(f"{k:>9}  {v}")
    return "\n".join(lines)


def complex_to_dict(X: CubeComplex) -> dict:
    hyperplanes = []
    for j in range(X.n_walls):
        try:
            h = hyperplane_of(X, j)
        except InputError:
            continue
        hyperplanes.append({"wall": j, "dual_edges": list(h.dual_edges),
                            "plus_side": sorted(h.plus_side), "minus_side": sorted(h.minus_side)})
    return {
        "vertices": ["".join(X.orientation(v).sides) for v in range(len(X.vertices))],
        "edges": [[u, v, j] for u, v, j in X.edges],
        "census": {str(k): v for k, v in X.census().items()},
        "dimension": X.dimension,
        "hyperplanes": hyperplanes,
    }


def complex_to_dot(X: CubeComplex, name: str = "dual") -> str:
    """1-skeleton as an undirected DOT graph; edges carry their wall index."""
    ident = "".join(c if c.isalnum() else "_" for c in name) or "dual"
    lines = [f"graph {ident} {{"]
    for v in range(len(X.vertices)):
        lines.append(f'  {v} [label="{X.orientation(v)}"];')
    for u, v, j in X.edges:
        lines.append(f'  {u} -- {v} [label="w{j}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
