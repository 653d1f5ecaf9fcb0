"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (lines appear in the "acceptance" summary section) or
directly with ``python tests/test_acceptance.py``.

Pinned tolerances: counts and equalities are exact; runtime limits are
30 s (criterion 1) and 60 s (criteria 3 and 4).
"""
import json
import os
import random
import sys
import time

sys.path.insert(0, os.path.dirname(__file__))

from acceptance_log import record  # noqa: E402
from cubedual.cli import main  # noqa: E402
from cubedual.coarse_geometry import Graph, bottleneck_delta, hyperbolicity_bound, hyperbolicity_delta  # noqa: E402
from cubedual.dual_complex import build_dual, verify_duality, verify_median_graph  # noqa: E402
from cubedual.free_product_lab import abc, dihedral, example_walls, syllable_datum  # noqa: E402
from cubedual.group_action import (Inconclusive, axis_separation_from_skewer, axis_separation_search,  # noqa: E402
                                   ball_wallspace, cube_symmetric_model, single_wall_model, skewer_search,
                                   square_swap_model)
from cubedual.refinement import (Peripheral, RefinedStructure, build_peripheral_dual,  # noqa: E402
                                 essential_wall_search, refine_structure, relatively_geometric_audit)

from gen import crossing, nested, random_wallspace  # noqa: E402

MEDIAN_SECONDS = 30.0
GEOMETRY_SECONDS = 60.0
EXAMPLE_SECONDS = 60.0
PROBES = 100
TORSION_N = 10
LOXODROMIC_SAMPLES = 25


def _dihedral():
    D = dihedral()
    return D, [syllable_datum(D, ["A"], "H")]


def _free_models():
    D, DH = _dihedral()
    out = [(D, DH)]
    for preset in ("Z2", "Z3", "S3"):
        M = abc(preset)
        out.append((M, example_walls(M)))
    return out


def _permutation_models():
    return [single_wall_model(), square_swap_model(), cube_symmetric_model()]


def criterion_1():
    t = time.perf_counter()
    cases = [random_wallspace(seed) for seed in range(25)]
    cases += [crossing(n) for n in range(1, 6)] + [nested(n) for n in range(1, 9)]
    bad = []
    pairs = 0
    for ws in cases:
        X = build_dual(ws)
        med = verify_median_graph(X)
        dual = verify_duality(X, ws)
        pairs += dual.pairs_checked
        if not med.ok or not dual.ok or dual.separation_pairs != dual.pairs_checked:
            bad.append(ws.name or "random")
    dt = time.perf_counter() - t
    ok = not bad and dt < MEDIAN_SECONDS
    detail = f"{len(cases)} wallspaces, {pairs} principal pairs, failures {bad or 'none'}, limit {MEDIAN_SECONDS:.0f}s"
    return record(1, "median graph and duality", ok, detail, dt), ok


def criterion_2():
    t = time.perf_counter()
    bad = []
    for n in range(1, 7):
        census = build_dual(crossing(n)).census()
        if census[0] != 2 ** n or census.get(n) != 1 or max(census) != n:
            bad.append(f"{n}-cube {census}")
    for n in range(1, 11):
        X = build_dual(nested(n))
        degrees = [len(a) for a in X.graph.adjacency]
        if X.census() != {0: n + 1, 1: n} or max(degrees) > 2:
            bad.append(f"chain-{n} {X.census()}")
    dt = time.perf_counter() - t
    ok = not bad
    return record(2, "exact counts", ok, f"crossing n<=6, nested n<=10, mismatches {bad or 'none'}", dt), ok


def criterion_3():
    t = time.perf_counter()
    D, DH = _dihedral()
    G = abc()
    GD = example_walls(G)
    subjects = [
        (D, Peripheral("D", (D.parse("a"), D.parse("b"))), DH),
        (G, Peripheral("A*B", (G.parse("a"), G.parse("b"))), GD),
        (G, Peripheral("A*B*C", (G.parse("a"), G.parse("b"), G.parse("c"))), GD),
    ]
    parts, ok = [], True
    for model, P, data in subjects:
        essential = essential_wall_search(model, P.generators, data, 4)
        deltas = {}
        for r in (4, 6):
            Y = build_peripheral_dual(model, P, data, essential, radius=r)
            deltas[r] = Y.delta
            bound_ok = Y.hyperbolicity <= hyperbolicity_bound(Y.delta) and Y.bound == hyperbolicity_bound(Y.delta)
            ok &= bound_ok
        ok &= deltas[4] == deltas[6]
        parts.append(f"Y({P.label}) Delta {deltas[4]}/{deltas[6]}")
    dt = time.perf_counter() - t
    ok &= dt < GEOMETRY_SECONDS
    return record(3, "quasi-tree certificate", ok, ", ".join(parts) + ", delta within bound", dt), ok


def criterion_4():
    import contextlib
    import io
    t = time.perf_counter()
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        status = main(["example-abc", "--format", "structured"])
    dt = time.perf_counter() - t
    data = json.loads(buf.getvalue())
    refined = data["refined"]["refined_structure"]
    stabs = sorted(s["conjugate_to"] for s in data["vertex_stabilizers"])
    counts = data["audit"]["cocompactness"]
    ok = (status == 0 and sorted(refined) == ["A", "B", "C"] and stabs == ["A", "B", "C"] and data["audit"]["passed"]
          and counts.get("4") == counts.get("6") and dt < EXAMPLE_SECONDS)
    detail = f"refined {refined}, stabilisers {stabs}, orbit counts r4={counts.get('4')} r6={counts.get('6')}"
    return record(4, "A*B*C example end to end", ok, detail, dt), ok


def criterion_5():
    t = time.perf_counter()
    D, DH = _dihedral()
    gw = ball_wallspace(D, DH, 6)
    problems = []
    ab = D.parse("ab")
    sk = skewer_search(ab, gw, n_max=2)
    ax = axis_separation_search(ab, D, DH, gw.test_points)
    certificates = [(sk, lambda c: c.verify(gw)), (ax, lambda c: c.verify(D, DH, gw.test_points))]
    if not sk.ok or sk.exponent > 2:
        problems.append("ab has no skewer with n <= 2")
    if not ax.ok:
        problems.append("ab has no axis separation")
    torsion = 0
    for model, data in _free_models():
        X = ball_wallspace(model, data, 2)
        for h in model.ball(3):
            if model.order(h) is None:
                continue
            torsion += 1
            for n in range(1, TORSION_N + 1):
                r = skewer_search(h, X, n_max=n)
                if not (isinstance(r, Inconclusive) and r.reason == "torsion"):
                    problems.append(f"{model.format(h)} n={n}")
            if axis_separation_search(h, model, data, X.test_points, TORSION_N).reason != "torsion":
                problems.append(f"{model.format(h)} axis")
        # loxodromic samples add more certificates to replay
        loxodromic = [h for h in model.ball(3) if model.order(h) is None][:LOXODROMIC_SAMPLES]
        for h in loxodromic:
            c = skewer_search(h, X)
            if c.ok:
                certificates.append((c, lambda c, X=X: c.verify(X)))
    for model, data in _permutation_models():
        X = ball_wallspace(model, data, 1)
        for h in model.elements:
            torsion += 1
            for n in range(1, TORSION_N + 1):
                r = skewer_search(h, X, n_max=n)
                if not (isinstance(r, Inconclusive) and r.reason == "torsion"):
                    problems.append(f"{model.format(h)} n={n}")
    replayed = sum(1 for c, check in certificates if c.ok and check(c))
    emitted = sum(1 for c, _ in certificates if c.ok)
    if replayed != emitted:
        problems.append(f"{emitted - replayed} certificates fail replay")
    dt = time.perf_counter() - t
    ok = not problems
    detail = (f"ab: skewer n={getattr(sk, 'exponent', '-')}, axis separation {'ok' if ax.ok else 'missing'}; "
              f"{torsion} torsion elements x n<={TORSION_N}; {replayed}/{emitted} certificates replay; "
              f"problems {problems[:3] or 'none'}")
    return record(5, "dynamics suite", ok, detail, dt), ok


def _cyclically_reduced(model, rng):
    """Random normal form of 1 to 6 syllables whose first and last syllables
    lie in different factors (one syllable gives a torsion probe)."""
    while True:
        n = rng.randint(1, 6)
        syl = []
        for _ in range(n):
            f = rng.choice([k for k in range(len(model.factors)) if not syl or k != syl[-1][0]])
            syl.append((f, rng.randrange(1, len(model.factors[f]))))
        if n == 1 or syl[0][0] != syl[-1][0]:
            return tuple(syl)


def criterion_6():
    t = time.perf_counter()
    rng = random.Random(20261016)
    models = [(m, d, ball_wallspace(m, d, 2)) for m, d in _free_models()]
    models += [(m, d, ball_wallspace(m, d, 1)) for m, d in _permutation_models()]
    successes = separated = exceptions = 0
    failures = []
    for k in range(PROBES):
        model, data, X = models[k % len(models)]
        if hasattr(model, "letters"):
            h = _cyclically_reduced(model, rng)
        else:
            h = rng.choice(model.elements)
        # walls through the identity's neighbourhood, so the probe can meet the axis
        near = [j for j, (g, _) in enumerate(X.translates) if not hasattr(model, "letters") or model.length(g) <= 1]
        j = rng.choice(near)
        try:
            sk = skewer_search(h, X, walls=[j])
            if not sk.ok:
                continue
            successes += 1
            ax = axis_separation_from_skewer(sk, X)
            if ax.ok and ax.conjugator == model.identity and ax.verify(model, data, X.test_points):
                separated += 1
            else:
                failures.append(model.format(h))
        except Exception as exc:  # the criterion counts these
            exceptions += 1
            failures.append(f"{model.format(h)}: {type(exc).__name__}")
    dt = time.perf_counter() - t
    ok = successes > 0 and separated == successes and exceptions == 0
    detail = (f"{PROBES} probes over {len(models)} models, {successes} skewered, {separated} axis-separated "
              f"with identity conjugator, {exceptions} exceptions, failures {failures[:3] or 'none'}")
    return record(6, "skewer implies axis separation", ok, detail, dt), ok


def criterion_7():
    t = time.perf_counter()
    G = abc()
    data = example_walls(G)
    X = ball_wallspace(G, data, 4)
    peripherals = [Peripheral("A*B", (G.parse("a"), G.parse("b"))), Peripheral("C", (G.parse("c"),))]
    Q = refine_structure(G, peripherals, data, X=X)
    dropped = RefinedStructure([e for e in Q.entries if e.name != "C"])
    rep = relatively_geometric_audit(G, dropped, X)
    fails3 = [f for f in rep.failures if f["check"] == 3]
    witness = fails3[0]["witness"]["generators"] if fails3 else None
    cycle = Graph(5, [(i, (i + 1) % 5) for i in range(5)])
    med = verify_median_graph(cycle)
    dt = time.perf_counter() - t
    ok = bool(fails3) and bool(witness) and not med.ok and med.counterexample is not None
    detail = f"audit without C fails check 3 with witness {witness}; 5-cycle median counterexample {med.counterexample}"
    return record(7, "negative controls", ok, detail, dt), ok


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7]


def test_criterion_1_median_and_duality():
    line, ok = criterion_1()
    assert ok, line


def test_criterion_2_exact_counts():
    line, ok = criterion_2()
    assert ok, line


def test_criterion_3_quasi_tree_certificate():
    line, ok = criterion_3()
    assert ok, line


def test_criterion_4_abc_example():
    line, ok = criterion_4()
    assert ok, line


def test_criterion_5_dynamics():
    line, ok = criterion_5()
    assert ok, line


def test_criterion_6_skewer_implies_axis_separation():
    line, ok = criterion_6()
    assert ok, line


def test_criterion_7_negative_controls():
    line, ok = criterion_7()
    assert ok, line


if __name__ == "__main__":
    results = [c()[1] for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
