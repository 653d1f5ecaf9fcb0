from itertools import product

import pytest
from hypothesis import given, strategies as st

from cubedual.errors import InputError
from cubedual.pocset import MINUS, PLUS, Wall, Wallspace, crosses, nests

from gen import crossing, random_wallspace


def square():
    return Wallspace("abcd", [Wall("ab", "cd"), Wall("ac", "bd")])


def test_wall_core_and_sides():
    w = Wall({"a", "b"}, {"b", "c"})
    assert w.core == {"b"}
    assert w.strict(PLUS) == {"a"} and w.strict("-") == {"c"}
    assert w.side_of("b") == 0 and w.side_of("a") == PLUS and w.side_of("c") == MINUS


def test_crossing_examples():
    ws = square()
    assert crosses(*ws.walls)
    assert not crosses(ws.walls[0], ws.walls[0])
    a, b = Wall("a", "bcd"), Wall("ab", "cd")
    assert not crosses(a, b)


def test_crossing_rejects_mismatched_wallspaces():
    with pytest.raises(InputError):
        crosses(Wall("a", "b"), Wall("a", "bc"))


def test_nesting_examples():
    pts = "abcd"
    ws = Wallspace(pts, [Wall("a", "bcd"), Wall("ab", "cd"), Wall("bc", "ad")])
    h_a, h_ab, h_bc = ws.halfspace(0, "+"), ws.halfspace(1, "+"), ws.halfspace(2, "+")
    assert nests(h_a, h_ab)
    assert not nests(h_ab, h_ab)
    assert not nests(h_ab, h_bc)


def test_wall_separation_examples():
    ws = Wallspace("xy", [Wall("x", "y")])
    assert ws.wall_separation("x", "x") == 0
    assert ws.wall_separation("x", "y") == 1
    cube = crossing(3)
    # 000 and 111 are separated by all three coordinate walls
    assert cube.wall_separation(0, 7) == 3
    with pytest.raises(InputError):
        ws.wall_separation("x", "z")


def test_validation():
    with pytest.raises(InputError, match="empty strict side"):
        Wallspace("ab", [Wall("ab", "b")])
    with pytest.raises(InputError, match="duplicates"):
        Wallspace("ab", [Wall("a", "b"), Wall("b", "a")])
    with pytest.raises(InputError, match="cover"):
        Wallspace("abc", [Wall("a", "b")])
    with pytest.raises(InputError, match="unknown"):
        Wallspace("ab", [Wall("a", "bz")])


def test_json_round_trip(tmp_path):
    ws = random_wallspace(3, cores=True)
    path = tmp_path / "w.json"
    import json
    path.write_text(json.dumps(ws.to_dict()))
    back = Wallspace.load(path)
    assert back.points == ws.points and back.walls == ws.walls


def test_separation_with_cores_can_break_the_triangle_inequality():
    ws = Wallspace("xyz", [Wall("xy", "yz")])
    assert ws.wall_separation("x", "z") == 1
    assert ws.wall_separation("x", "y") == ws.wall_separation("y", "z") == 0


@given(st.integers(0, 10_000))
def test_separation_is_a_pseudometric_without_cores(seed):
    ws = random_wallspace(seed, max_points=7, max_walls=6)
    pts = ws.points
    d = {(x, y): ws.wall_separation(x, y) for x, y in product(pts, pts)}
    for x, y in d:
        assert d[x, y] == d[y, x]
        assert d[x, x] == 0
    for x, y, z in product(pts, pts, pts):
        assert d[x, z] <= d[x, y] + d[y, z]


@given(st.integers(0, 10_000))
def test_crossing_excludes_nesting_and_nesting_is_a_partial_order(seed):
    ws = random_wallspace(seed, max_points=7, max_walls=6, cores=True)
    n = len(ws.walls)
    for i in range(n):
        assert not ws.crosses(i, i)
        for j in range(n):
            assert ws.crosses(i, j) == ws.crosses(j, i) == crosses(ws.walls[i], ws.walls[j])
            if ws.crosses(i, j):
                for s, t in product((PLUS, MINUS), repeat=2):
                    h, k = ws.halfspace(i, s), ws.halfspace(j, t)
                    assert not nests(h, k) and not nests(k, h)
    hs = list(ws.halfspaces())
    for h in hs:
        assert not nests(h, h)
        for k in hs:
            if nests(h, k):
                assert not nests(k, h)
            for m in hs:
                if nests(h, k) and nests(k, m):
                    assert nests(h, m)
