import pytest
from hypothesis import given, strategies as st

from cubedual.errors import InputError, ResourceError
from cubedual.free_product_lab import (FiniteGroup, FreeProductModel, abc, ball_size_formula, cayley_ball,
                                       dihedral, example_walls, normal_form, preset_factor, syllable_datum,
                                       syllable_wall)

from oracles import reduce_word

MODELS = {
    "dihedral": dihedral(),
    "abc": abc(),
    "z3s3": FreeProductModel([preset_factor("Z3", "A"), preset_factor("S3", "B", "t")]),
}


def letters_of(model):
    return [syl for f, fac in enumerate(model.factors) for syl in [(f, e) for e in range(len(fac))]]


@pytest.mark.parametrize("name", sorted(MODELS))
@given(data=st.data())
def test_normal_form_independent_of_reduction_order(name, data):
    model = MODELS[name]
    pool = letters_of(model)
    word = data.draw(st.lists(st.sampled_from(pool), max_size=12))
    pick = lambda options: options[data.draw(st.integers(0, len(options) - 1))]
    expected = reduce_word(word, lambda f: model.factors[f].table, pick)
    assert model.normal_form_syllables(word) == expected


@pytest.mark.parametrize("name", sorted(MODELS))
@given(data=st.data())
def test_group_laws(name, data):
    model = MODELS[name]
    pool = letters_of(model)
    g, h, k = (model.normal_form_syllables(data.draw(st.lists(st.sampled_from(pool), max_size=6)))
               for _ in range(3))
    assert model.mul(model.mul(g, h), k) == model.mul(g, model.mul(h, k))
    assert model.mul(g, model.inv(g)) == ()
    assert model.power(g, 3) == model.mul(g, model.mul(g, g))
    assert model.power(g, -2) == model.inv(model.mul(g, g))


def test_parse_and_format():
    D = dihedral()
    assert D.format(normal_form(D, "abba")) == "1"
    assert D.format(D.parse("abab")) == "abab"
    assert D.parse("a.b") == D.parse("ab") == D.parse(["a", "b"])
    M = MODELS["z3s3"]
    g = M.parse("a a tr")
    assert M.format(g) == "a2.tr"
    assert M.parse(M.format(g).replace(".", " ")) == g
    with pytest.raises(InputError):
        D.parse("ax")


def test_orders():
    D = dihedral()
    assert D.order(D.parse("a")) == 2
    assert D.order(D.parse("aba")) == 2
    assert D.order(D.parse("ab")) is None
    assert D.order(()) == 1
    M = MODELS["z3s3"]
    assert M.order(M.parse("tr")) == 3
    assert M.order(M.parse("ts")) == 2


def test_ball_sizes_frozen():
    assert len(dihedral().ball(3)) == 7
    assert len(abc().ball(1)) == 4
    assert len(abc().ball(0)) == 1
    assert len(abc().ball(3)) == 1 + 3 + 6 + 12


@pytest.mark.parametrize("name", sorted(MODELS))
def test_ball_size_formula(name):
    model = MODELS[name]
    for r in range(6):
        assert len(model.ball(r)) == ball_size_formula(model, r)


def test_ball_is_shortlex_and_closed_under_prefix():
    model = abc()
    ball = model.ball(3)
    assert ball == sorted(ball, key=model.sort_key)
    s = set(ball)
    assert all(g[:-1] in s for g in ball if g)


def test_cayley_ball_edges():
    pts, edges = cayley_ball(dihedral(), 3)
    # a path: 7 vertices, 6 edges
    assert len(pts) == 7 and len(edges) == 6


def test_ball_limits():
    with pytest.raises(ResourceError):
        abc().ball(40)
    with pytest.raises(InputError):
        abc().ball(-1)


def test_table_validation():
    with pytest.raises(InputError, match="identity"):
        FiniteGroup("X", ["e", "x"], [[1, 0], [0, 1]])
    with pytest.raises(InputError, match="associative"):
        # a loop of order 5 that is not a group
        FiniteGroup("X", list("eabcd"), [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3],
                                         [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]])
    with pytest.raises(InputError, match="permutation"):
        FiniteGroup("X", ["e", "x", "y"], [[0, 1, 2], [1, 0, 0], [2, 2, 0]])
    with pytest.raises(InputError):
        FiniteGroup("X", ["e", "x"], [[0, 1]])
    with pytest.raises(InputError, match="two factors"):
        FreeProductModel([preset_factor("Z2", "A"), preset_factor("Z2", "B", "a")])
    with pytest.raises(InputError):
        preset_factor("Z7", "A")


def test_syllable_sides():
    model = abc()
    K1, K2 = example_walls(model)
    assert K1.side(()) == 0 and K2.side(()) == 0
    assert K1.side(model.parse("ab")) == 1 and K1.side(model.parse("ba")) == -1
    assert K2.side(model.parse("ba")) == 1 and K2.side(model.parse("cab")) == -1


def test_complementary_subsets_swap_sides():
    model = abc()
    H = syllable_datum(model, ["A"])
    Hc = syllable_datum(model, ["B", "C"])
    for g in model.ball(3):
        assert H.side(g) == -Hc.side(g)


def test_syllable_wall_core_is_identity():
    model = abc()
    ball = model.ball(2)
    w = syllable_wall(model, ball, ["A"])
    assert w.core == frozenset({()})


def test_subset_must_be_proper():
    with pytest.raises(InputError):
        syllable_datum(dihedral(), ["A", "B"])
    with pytest.raises(InputError):
        syllable_datum(dihedral(), [])
    with pytest.raises(InputError):
        syllable_datum(dihedral(), ["Q"])
