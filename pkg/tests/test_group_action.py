import pytest
from hypothesis import given, settings, strategies as st

from cubedual.dual_complex import principal_orientation
from cubedual.errors import HorizonError, InputError
from cubedual.free_product_lab import abc, dihedral, example_walls, syllable_datum
from cubedual.group_action import (AxisSepCertificate, Inconclusive, PermutationModel, SkewerCertificate,
                                   axis_separation_from_skewer, axis_separation_search, ball_wallspace,
                                   check_datum_invariance, closure, cube_symmetric_model, deepness,
                                   essential_wall_search, fixed_point_search, pointwise_fixed_geodesic,
                                   replay_word, single_wall_model, skewer_search, square_swap_model,
                                   subgroup_ball)

D = dihedral()
DH = [syllable_datum(D, ["A"], "H")]
G = abc()
GW = ball_wallspace(G, example_walls(G), 3)
DW = ball_wallspace(D, DH, 6)

short = st.lists(st.sampled_from(["a", "b", "c"]), max_size=3).map(lambda w: G.parse(w))


@settings(max_examples=50)
@given(short, st.sampled_from(GW.test_points))
def test_principal_orientations_are_equivariant(g, p):
    # defined wherever the image point is still in the truncation
    gp = G.mul(g, p)
    if gp not in GW.wallspace.index:
        return
    image = GW.act_orientation(g, principal_orientation(GW.wallspace, p))
    target = principal_orientation(GW.wallspace, gp)
    assert image.bits & image.full_domain == target.bits & image.full_domain


@settings(max_examples=50)
@given(short, short, st.integers(0, 10 ** 6))
def test_vertex_action_is_functorial(g, h, k):
    X = GW.complex
    v = k % len(X.vertices)
    try:
        once = GW.image_vertex(G.mul(g, h), v)
        twice = GW.image_vertex(g, GW.image_vertex(h, v))
    except HorizonError:
        return
    assert once == twice


def test_identity_acts_trivially():
    X = GW.complex
    assert all(GW.image_vertex((), v) == v for v in range(len(X.vertices)))


def test_point_action_example():
    assert D.format(DW.act_point(D.parse("a"), D.parse("b"))) == "ab"
    with pytest.raises(HorizonError):
        DW.act_point(D.parse("abababa"), D.parse("b"))


def test_fixed_points():
    cert = fixed_point_search([D.parse("a")], DW)
    assert cert.ok and cert.verify(DW)
    assert isinstance(fixed_point_search([D.parse("ab")], DW), Inconclusive)
    # conjugates of a factor fix a vertex too
    assert fixed_point_search([G.parse("bcb")], GW).ok


def test_skewer_example():
    cert = skewer_search(D.parse("ab"), DW)
    assert isinstance(cert, SkewerCertificate) and cert.exponent == 1
    assert cert.verify(DW)
    ax = axis_separation_from_skewer(cert, DW)
    assert isinstance(ax, AxisSepCertificate)
    assert ax.verify(D, DH, DW.test_points)


def test_torsion_is_reported():
    for w in ("a", "aba", "bab"):
        r = skewer_search(D.parse(w), DW)
        assert isinstance(r, Inconclusive) and r.reason == "torsion"
    assert axis_separation_search(D.parse("a"), D, DH, DW.test_points).reason == "torsion"


@settings(max_examples=40)
@given(st.lists(st.sampled_from(["a", "b", "c"]), min_size=1, max_size=6))
def test_certificates_replay_and_torsion_never_skewers(word):
    h = G.parse(word)
    res = skewer_search(h, GW, n_max=10)
    if G.order(h) is not None:
        assert isinstance(res, Inconclusive) and res.reason == "torsion"
    elif res.ok:
        assert res.verify(GW)
        ax = axis_separation_from_skewer(res, GW)
        assert ax.ok and ax.verify(G, GW.data, GW.test_points)


def test_tampered_certificate_fails():
    cert = skewer_search(D.parse("ab"), DW)
    bad = SkewerCertificate(cert.element, cert.wall, cert.translate, cert.datum, -cert.sign,
                            cert.exponent, cert.witness)
    assert not bad.verify(DW)


def test_deepness():
    a, b = G.parse("a"), G.parse("b")
    K1, K2 = example_walls(G)
    assert deepness(G, [a, b], K1, (), 1).verdict == "deep"
    assert deepness(G, [a, b], K1, (), -1).verdict == "deep"
    assert deepness(G, [a, b], K2, (), -1).verdict == "shallow"
    assert deepness(G, [a], K1, (), 1).verdict == "shallow"
    r = deepness(G, [a, b], K1, (), 1)
    c = r.certificate
    assert c.verify(G, [a, b], K1, (), 1, [()])
    with pytest.raises(InputError):
        deepness(G, [a], K1, (), 1, horizon=1)


def test_essential_walls():
    a, b = G.parse("a"), G.parse("b")
    found = essential_wall_search(G, [a, b], example_walls(G), 3)
    assert [(e.datum, e.translate) for e in found] == [(0, ())]
    assert essential_wall_search(G, [a], example_walls(G), 3) == []


def test_subgroup_ball_and_replay():
    ab = subgroup_ball(G, [G.parse("a"), G.parse("b")], 3)
    assert not ab.closed and G.parse("aba") in ab
    for g in ab.elements:
        assert replay_word(G, [G.parse("a"), G.parse("b")], ab.words[g]) == g
    fin = subgroup_ball(G, [G.parse("a")], 3)
    assert fin.closed and len(fin.elements) == 2


def test_permutation_presets():
    for make in (single_wall_model, square_swap_model, cube_symmetric_model):
        m, data = make()
        for d in data:
            assert check_datum_invariance(m, d, m.points) is None
    m, _ = cube_symmetric_model()
    assert m.order(m.parse("t")) == 2 and m.order(m.parse("r")) == 3
    assert len(closure(m, m.generators)) == 6


def test_permutation_model_rejects_bad_generators():
    with pytest.raises(InputError):
        PermutationModel(("p", "q"), {"s": (0, 0)})


def test_single_wall_is_fixed():
    m, data = single_wall_model()
    gw = ball_wallspace(m, data, 1)
    assert len(gw.translates) == 1 and len(gw.complex.vertices) == 2
    assert fixed_point_search(m.generators, gw).verify(gw)


def test_pointwise_fixed_geodesic():
    m, data = square_swap_model()
    gw = ball_wallspace(m, data, 1)
    v1, v2 = gw.principal_vertex("00"), gw.principal_vertex("11")
    fg = pointwise_fixed_geodesic([m.parse("s")], gw, v1, v2)
    # the swap fixes both corners but neither geodesic between them
    assert fg.index == 2 and fg.order == 1
    assert fg.path[0] == v1 and fg.path[-1] == v2 and len(fg.path) == 3
    with pytest.raises(InputError):
        pointwise_fixed_geodesic([m.parse("s")], gw, gw.principal_vertex("01"), v2)


@given(st.sampled_from(["Z2", "Z3", "S3"]), st.data())
def test_direct_translate_side_matches_group_multiplication(preset, data):
    M = abc(preset)
    letters = sorted(M.letters)
    word = st.lists(st.sampled_from(letters), max_size=5).map(M.parse)
    g, x = data.draw(word), data.draw(word)
    for d in example_walls(M):
        assert d.translate_side(g, x) == d.side(M.mul(M.inv(g), x))


def test_nesting_is_not_fooled_by_the_truncation():
    # on a radius-3 ball bc.K1 has no visible positive points; an unguarded
    # check would call that an (empty) nesting inside K1
    res = skewer_search(G.parse("bc"), GW)
    assert not (res.ok and res.translate == ((), 0))
