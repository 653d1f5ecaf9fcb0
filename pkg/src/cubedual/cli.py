"""Command-line interface.

Exit statuses: 0 success, 1 verification counterexample, 2 horizon
inconclusive, 3 input or budget error.  Horizon flags may also be set through
CUBEDUAL_RADIUS, CUBEDUAL_N_MAX, CUBEDUAL_MARGIN, CUBEDUAL_WALL_BUDGET and
CUBEDUAL_FORMAT; explicit flags win.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .coarse_geometry import Graph, geometry_report
from .dual_complex import DEFAULT_WALL_BUDGET, build_dual, verify_duality, verify_median_graph
from .errors import CubeDualError, InputError
from .formats import (GroupSetup, census_line, census_table, complex_to_dict, complex_to_dot, dumps, load_group,
                      load_json, load_wallspace)
from .free_product_lab import abc, example_walls
from .group_action import (DEFAULT_MARGIN, DEFAULT_N_MAX, DEFAULT_RADIUS, axis_separation_search,
                           ball_wallspace, skewer_search)
from .pocset import Wallspace
from .refinement import (Peripheral, RefinedStructure, match_factor, refine_structure,
                         relatively_geometric_audit, vertex_stabilizers)

FORMATS = ("human", "structured", "dot")
ENV = "CUBEDUAL_"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _setting(args, name, default, minimum):
    value = getattr(args, name, None)
    source = f"--{name.replace('_', '-')}"
    if value is None:
        env = os.environ.get(ENV + name.upper())
        if env is None or env == "":
            return default
        source = ENV + name.upper()
        try:
            value = int(env)
        except ValueError:
            raise InputError(f"{source}={env!r} is not an integer") from None
    if value < minimum:
        raise InputError(f"{source} must be >= {minimum}, got {value}")
    return value


def _format(args, allowed=("human", "structured")):
    fmt = args.format or os.environ.get(ENV + "FORMAT") or "human"
    if fmt not in FORMATS:
        raise InputError(f"unknown format {fmt!r} (choose from {', '.join(FORMATS)})")
    if fmt not in allowed:
        raise InputError(f"format {fmt!r} is not available for {args.command}")
    return fmt


def _horizons(args):
    return {
        "radius": _setting(args, "radius", DEFAULT_RADIUS, 1),
        "n_max": _setting(args, "n_max", DEFAULT_N_MAX, 1),
        "margin": _setting(args, "margin", DEFAULT_MARGIN, 0),
    }


def _wall_budget(args, default):
    return _setting(args, "wall_budget", default, 1)


# subcommands return (status, human lines, structured dict, dot text or None)

def cmd_build_dual(args):
    fmt = _format(args, FORMATS)
    ws = load_wallspace(args.wallspace)
    X = build_dual(ws, wall_budget=_wall_budget(args, DEFAULT_WALL_BUDGET))
    med = verify_median_graph(X)
    dual = verify_duality(X, ws)
    status = 0 if med.ok and dual.ok else 1
    lines = [
        f"wallspace {ws.name}: {len(ws.points)} points, {len(ws.walls)} walls",
        census_line(X),
        census_table(X),
        f"median graph: {'ok' if med.ok else 'FAILED'} ({med.triples_checked} triples)",
    ]
    if not med.ok:
        lines.append(f"  counterexample triple: {list(med.counterexample)}")
    lines.append(f"duality: {'ok' if dual.ok else 'FAILED'} ({dual.pairs_checked} principal pairs, "
                 f"{dual.separation_pairs} equal to wall separation)")
    if not dual.ok:
        lines.append(f"  counterexample: {list(dual.counterexample)}")
    data = {
        "wallspace": ws.name,
        "complex": complex_to_dict(X),
        "median": {"ok": med.ok, "triples": med.triples_checked,
                   "counterexample": list(med.counterexample) if med.counterexample else None},
        "duality": {"ok": dual.ok, "pairs": dual.pairs_checked, "separation_pairs": dual.separation_pairs,
                    "counterexample": list(dual.counterexample) if dual.counterexample else None},
    }
    return status, lines, data, complex_to_dot(X, ws.name or "dual") if fmt == "dot" else None


def _load_graph_input(path, budget):
    raw = load_json(path)
    if isinstance(raw, dict) and "walls" in raw:
        ws = Wallspace.from_dict(raw)
        X = build_dual(ws, wall_budget=budget)
        return X.graph, X
    if isinstance(raw, dict) and "edges" in raw:
        try:
            return Graph(int(raw["vertices"]), [tuple(e) for e in raw["edges"]]), None
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{path}: malformed graph ({exc})") from None
    raise InputError(f"{path}: expected a wallspace ('walls') or a graph ('vertices', 'edges')")


def cmd_geometry(args):
    fmt = _format(args, FORMATS)
    g, X = _load_graph_input(args.input, _wall_budget(args, DEFAULT_WALL_BUDGET))
    if fmt == "dot" and X is None:
        raise InputError("dot output needs a wallspace input")
    if args.max_circuit < 3:
        raise InputError(f"--max-circuit must be >= 3, got {args.max_circuit}")
    report = geometry_report(g, args.input, range(3, args.max_circuit + 1))
    lines = [
        f"graph {args.input}: {report['vertices']} vertices, {report['edges']} edges",
        f"bottleneck Delta = {report['bottleneck_delta']} (pair {report['bottleneck_witness']})",
        f"hyperbolicity delta = {report['hyperbolicity_delta']} (quadruple {report['hyperbolicity_witness']})",
        f"bound from Delta = {report['hyperbolicity_bound']}: {'ok' if report['within_bound'] else 'EXCEEDED'}",
        f"circuits through edge {report['circuit_edge']}: "
        + ", ".join(f"r={k}: {v}" for k, v in report["circuit_profile"].items()),
    ]
    status = 0 if report["within_bound"] else 1
    return status, lines, report, complex_to_dot(X, "dual") if fmt == "dot" else None


def _group_wallspace(args, setup, h):
    explicit = getattr(args, "wall_budget", None) is not None or os.environ.get(ENV + "WALL_BUDGET")
    budget = _wall_budget(args, 0) if explicit else None
    return ball_wallspace(setup.model, setup.data, h["radius"], h["margin"], budget)


def _element(setup, word):
    if word is None:
        raise InputError("--element is required")
    return setup.model.parse(word)


def cmd_skewer(args):
    _format(args)
    setup = load_group(args.group)
    h = _horizons(args)
    elem = _element(setup, args.element)
    gw = _group_wallspace(args, setup, h)
    cert = skewer_search(elem, gw, h["n_max"])
    model = setup.model
    data = {"element": model.format(elem), "horizons": h, "result": cert.to_dict(model)}
    if not cert.ok:
        return 2, [f"skewer {model.format(elem)}: inconclusive ({cert.reason}): {cert.detail}"], data, None
    replay = cert.verify(gw)
    data["replay"] = replay
    sign = "+" if cert.sign > 0 else "-"
    lines = [
        f"skewer {model.format(elem)}: wall {gw.wall_label(cert.wall)}, side {sign}, n = {cert.exponent}",
        f"  witness point {_fmt_point(model, cert.witness)} lies in the side but not in its h^{cert.exponent}-image",
        f"  replay: {'ok' if replay else 'FAILED'} {_replay_scope(model, gw)}",
    ]
    return (0 if replay else 1), lines, data, None


def _replay_scope(model, gw):
    if hasattr(model, "factors"):
        return "(exact prefix check)"
    return f"on {len(gw.test_points)} points"


def _fmt_point(model, x):
    return repr(x) if not hasattr(model, "factors") else model.format(x)


def cmd_axis_sep(args):
    _format(args)
    setup = load_group(args.group)
    h = _horizons(args)
    if args.conjugator_radius < 0:
        raise InputError(f"--conjugator-radius must be >= 0, got {args.conjugator_radius}")
    elem = _element(setup, args.element)
    gw = _group_wallspace(args, setup, h)
    model = setup.model
    cert = axis_separation_search(elem, model, setup.data, gw.test_points, h["n_max"], args.conjugator_radius)
    data = {"element": model.format(elem), "horizons": h, "result": cert.to_dict(model)}
    if not cert.ok:
        return 2, [f"axis separation {model.format(elem)}: inconclusive ({cert.reason}): {cert.detail}"], data, None
    replay = cert.verify(model, setup.data, gw.test_points)
    data["replay"] = replay
    sign = "+" if cert.sign > 0 else "-"
    w1, w2 = cert.witnesses
    lines = [
        f"axis separation {model.format(elem)}: wall {setup.data[cert.datum].label}, conjugator "
        f"{model.format(cert.conjugator)}, side {sign}, n = {cert.exponent}",
        f"  witnesses {_fmt_point(model, w1)} and {_fmt_point(model, w2)}",
        f"  replay: {'ok' if replay else 'FAILED'} {_replay_scope(model, gw)}",
    ]
    return (0 if replay else 1), lines, data, None


def _refine(setup, h, args):
    if not setup.peripherals:
        raise InputError("the group file lists no peripherals")
    X = _group_wallspace(args, setup, h)
    R = refine_structure(setup.model, setup.peripherals, setup.data, radius=h["radius"], margin=h["margin"],
                         n_max=h["n_max"], horizon=args.peripheral_radius,
                         peripheral_radius=args.peripheral_radius, X=X)
    return X, R


def _refined_lines(model, R: RefinedStructure):
    lines = []
    for e in R.entries:
        gens = ", ".join(model.format(g) for g in e.generators) or "(trivial)"
        conj = f", conjugator {model.format(e.conjugator)}" if e.conjugator != model.identity else ""
        lines.append(f"  {e.name}: <{gens}> {e.classification} {e.source}{conj}")
    for Y in R.duals:
        s = Y.summary(model)
        lines.append(f"  Y({s['peripheral']}) at radius {s['radius']}: {s['vertices']} vertices, "
                     f"{s['edges']} edges, Delta = {s['bottleneck_delta']}, delta = {s['hyperbolicity_delta']} "
                     f"(bound {s['hyperbolicity_bound']}), {s['edge_orbits']} edge orbit(s)")
        lines.append(f"    essential walls: {', '.join(s['essential_walls'])}")
    for label, s in R.verification.get("loxodromic_samples", {}).items():
        lines.append(f"  {label}: {s['sampled']} infinite-order samples, {s['loxodromic']} loxodromic on Y, "
                     f"{s['axis_separated']} axis-separated")
    return lines


def _refined_data(model, R: RefinedStructure):
    return {
        "entries": [{"name": e.name, "generators": [model.format(g) for g in e.generators],
                     "conjugator": model.format(e.conjugator), "source": e.source,
                     "classification": e.classification, "finite": e.finite} for e in R.entries],
        "peripheral_duals": [Y.summary(model) for Y in R.duals],
        "loxodromic_samples": R.verification.get("loxodromic_samples", {}),
        "ellipticity": {k: c.to_dict(model) for k, c in R.verification.get("elliptic", {}).items()},
        "refined_structure": R.names,
    }


def cmd_refine(args):
    _format(args)
    setup = load_group(args.group)
    h = _horizons(args)
    X, R = _refine(setup, h, args)
    model = setup.model
    lines = [f"X: {len(X.translates)} walls at radius {h['radius']}, {census_line(X.complex)}", "refinement:"]
    lines += _refined_lines(model, R)
    lines.append(f"refined structure: {R.describe()}")
    return 0, lines, _refined_data(model, R), None


def _compare_radius(args, radius):
    if args.compare_radius is not None:
        if args.compare_radius < 1:
            raise InputError(f"--compare-radius must be >= 1, got {args.compare_radius}")
        return args.compare_radius
    return radius + 2 if radius < 6 else radius - 2


def _audit_lines(model, rep):
    lines = ["audit:"]
    counts = " vs ".join(f"radius {r}: {c}" for r, c in rep.cocompactness.items())
    lines.append(f"  (1) cell orbits {'ok' if rep.check(1) else 'FAILED'}: {counts}")
    ell = ", ".join(f"{k} fixes vertex {c.vertex}" if c.ok else f"{k} inconclusive"
                    for k, c in rep.ellipticity.items())
    lines.append(f"  (2) ellipticity {'ok' if rep.check(2) else 'FAILED'}: {ell}")
    lines.append(f"  (3) cell stabilisers {'ok' if rep.check(3) else 'FAILED'}:")
    for s in rep.stabilizers:
        where = (f"inside {s['inside']} via {s['conjugator']}, index <= {s['index_bound']}"
                 if "inside" in s else "NOT conjugate into any refined peripheral")
        lines.append(f"      dim {s['dimension']} cell {s['cell']}: <{', '.join(s['generators'])}> "
                     f"({s['classification']}), {where}")
    for f in rep.failures:
        lines.append(f"  failure in check ({f['check']}): {f['reason']}")
    lines.append(f"audit: {'passed' if rep.ok else 'FAILED'}")
    return lines


def _audit_data(model, rep):
    return {
        "cocompactness": rep.cocompactness,
        "ellipticity": {k: c.to_dict(model) for k, c in rep.ellipticity.items()},
        "stabilizers": rep.stabilizers,
        "failures": rep.failures,
        "passed": rep.ok,
    }


def cmd_audit(args):
    _format(args)
    setup = load_group(args.group)
    h = _horizons(args)
    X, R = _refine(setup, h, args)
    if args.drop:
        names = set(R.names)
        for d in args.drop:
            if d not in names:
                raise InputError(f"--drop {d!r}: no refined peripheral of that name (have {sorted(names)})")
        R = RefinedStructure([e for e in R.entries if e.name not in args.drop], R.duals, R.verification)
    model = setup.model
    rep = relatively_geometric_audit(model, R, X, compare_radius=_compare_radius(args, h["radius"]))
    lines = [f"refined structure: {R.describe()}"] + _audit_lines(model, rep)
    data = {"refined": _refined_data(model, R), "audit": _audit_data(model, rep)}
    return (0 if rep.ok else 1), lines, data, None


def cmd_example_abc(args):
    _format(args)
    if args.radius is None and not os.environ.get(ENV + "RADIUS"):
        args.radius = 4
    h = _horizons(args)
    model = abc(args.preset)
    data_walls = example_walls(model)
    a, b, c = (model.parse(x) for x in "abc")
    peripherals = [Peripheral("A*B", (a, b)), Peripheral("C", (c,))]
    setup = GroupSetup(model, data_walls, peripherals, name=model.name)
    X, R = _refine(setup, h, args)
    stabs = vertex_stabilizers(X, model.generators)
    stab_rows = []
    for s in stabs:
        if len(s.elements) <= 1:
            continue
        name, conj = match_factor(model, s.elements, h["radius"])
        stab_rows.append({"vertex": s.vertex, "generators": [model.format(g) for g in s.generators],
                          "classification": s.classification, "conjugate_to": name,
                          "conjugator": model.format(conj)})
    rep = relatively_geometric_audit(model, R, X, compare_radius=_compare_radius(args, h["radius"]))
    lines = [
        f"G = {model.name}, peripherals {{A*B, C}}, walls K1 (first syllable in A) and K2 (first syllable in A*B)",
        f"X: {len(X.translates)} walls at radius {h['radius']}, {census_line(X.complex)}",
        "refinement:",
    ]
    lines += _refined_lines(model, R)
    lines.append("vertex stabilisers of X:")
    for row in stab_rows:
        lines.append(f"  vertex {row['vertex']}: <{', '.join(row['generators'])}> conjugate to "
                     f"{row['conjugate_to']} via {row['conjugator']}")
    lines += _audit_lines(model, rep)
    lines.append(f"refined structure: {R.describe()}")
    data = {"refined": _refined_data(model, R), "vertex_stabilizers": stab_rows,
            "audit": _audit_data(model, rep), "X_census": {str(k): v for k, v in X.complex.census().items()}}
    return (0 if rep.ok else 1), lines, data, None


def _horizon_flags(p, radius=True):
    if radius:
        p.add_argument("--radius", type=int, help=f"ball radius (default {DEFAULT_RADIUS})")
    p.add_argument("--n-max", type=int, help=f"largest exponent tried (default {DEFAULT_N_MAX})")
    p.add_argument("--margin", type=int, help=f"truncation margin (default {DEFAULT_MARGIN})")


def build_parser():
    parser = _Parser(prog="cubedual", description="Dual cube complexes of wallspaces and peripheral refinement.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    def common(p):
        p.add_argument("--format", choices=None, help="human (default), structured or dot")
        p.add_argument("--output", "-o", help="write the report here instead of stdout")
        p.add_argument("--wall-budget", type=int, help="largest number of walls to dualise")

    p = sub.add_parser("build-dual", help="dual cube complex of a wallspace file")
    p.add_argument("wallspace")
    common(p)
    p.set_defaults(func=cmd_build_dual)

    p = sub.add_parser("geometry", help="bottleneck, hyperbolicity and circuit profile")
    p.add_argument("input", help="wallspace (its dual 1-skeleton is used) or graph file")
    p.add_argument("--max-circuit", type=int, default=8)
    common(p)
    p.set_defaults(func=cmd_geometry)

    for name, func, helptext in (("skewer", cmd_skewer, "find h^n W < W"),
                                 ("axis-sep", cmd_axis_sep, "find h^-n V < V < h^n V")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("group")
        p.add_argument("--element", required=False)
        _horizon_flags(p)
        if name == "axis-sep":
            p.add_argument("--conjugator-radius", type=int, default=2)
        common(p)
        p.set_defaults(func=func)

    for name, func, helptext in (("refine", cmd_refine, "refined peripheral structure"),
                                 ("audit", cmd_audit, "refine, then audit relative geometricity")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("group")
        _horizon_flags(p)
        p.add_argument("--peripheral-radius", type=int, default=DEFAULT_RADIUS)
        if name == "audit":
            p.add_argument("--compare-radius", type=int)
            p.add_argument("--drop", action="append", default=[], help="omit a refined peripheral (negative control)")
        common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("example-abc", help="the A*B*C refinement example end to end")
    _horizon_flags(p)
    p.add_argument("--preset", default="Z2", help="factor preset: Z2, Z3 or S3")
    p.add_argument("--peripheral-radius", type=int, default=DEFAULT_RADIUS)
    p.add_argument("--compare-radius", type=int)
    common(p)
    p.set_defaults(func=cmd_example_abc)
    return parser


def _write(text, path):
    if path:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"cannot write {path}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_help()
            return 3
        if getattr(args, "peripheral_radius", 2) < 2:
            raise InputError(f"--peripheral-radius must be >= 2, got {args.peripheral_radius}")
        status, lines, data, dot = args.func(args)
        fmt = args.format or os.environ.get(ENV + "FORMAT") or "human"
        if fmt == "dot":
            text = dot
        elif fmt == "structured":
            text = dumps({"command": args.command, "status": status, **data})
        else:
            text = "\n".join(lines) + "\n"
        _write(text, args.output)
        return status
    except CubeDualError as exc:
        print(f"cubedual: error: {exc}", file=sys.stderr)
        extra = getattr(exc, "progress", None) or getattr(exc, "witness", None)
        if extra:
            print(f"cubedual: details: {extra}", file=sys.stderr)
        return exc.exit_status


if __name__ == "__main__":
    sys.exit(main())
