import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sslie.catalog import fabrykowski_gupta, grigorchuk, gupta_sidki
from sslie.groups import (
    act_word,
    acts_trivially,
    element,
    element_order,
    group,
    group_lie_polys,
    group_matrix_recursion,
    grigorchuk_group,
    gupta_sidki_group,
    kaloujnine_group,
    leading_monomial,
    lie_from_group,
    make_group,
    parse_word,
    same_structure,
    word_matrix_product,
    word_str,
)
from sslie.ground import StructureError

GRIG, GS = grigorchuk_group(), gupta_sidki_group()


def perm_order(g, n):
    """Order of the permutation g induces on words of length n."""
    p = g.G.p
    verts = list(itertools.product(range(p), repeat=n))
    image = {v: act_word(g, v) for v in verts}
    seen, out = set(), 1
    for v in verts:
        if v in seen:
            continue
        k, w = 0, v
        while True:
            seen.add(w)
            w = image[w]
            k += 1
            if w == v:
                break
        out = out * k // math.gcd(out, k)
    return out


def words(spec, max_len=6):
    letters = [(n, e) for n in spec.names for e in (1, -1)]
    return st.lists(st.sampled_from(letters), max_size=max_len).map(lambda w: word_str(tuple(w)) or "1")


def test_parse_word():
    assert parse_word("a*c^2") == (("a", 1), ("c", 2))
    assert parse_word("1") == ()
    assert word_str(parse_word("a t^-1")) == "a*t^-1"


def test_grigorchuk_action():
    a, b = element(GRIG, "a"), element(GRIG, "b")
    for w in itertools.product(range(2), repeat=3):
        assert act_word(a, (0,) + w) == (1,) + w
    assert act_word(b, (1, 0, 1)) == (1,) + act_word(element(GRIG, "c"), (0, 1))


def test_gs_action():
    t = element(GS, "t")
    for w in itertools.product(range(3), repeat=3):
        assert act_word(t, (2,) + w) == (2,) + act_word(t, w)
        assert act_word(t, (0,) + w) == (0,) + act_word(element(GS, "a"), w)


def test_matrix_recursion_grigorchuk_b():
    M = group_matrix_recursion(element(GRIG, "b"))
    assert M[0][0] == parse_word("a") and M[1][1] == parse_word("c")
    assert M[0][1] is None and M[1][0] is None


@pytest.mark.parametrize("word,order", [("a", 2), ("b", 2), ("a*b", 16), ("a*c", 8), ("a*d", 4)])
def test_grigorchuk_orders(word, order):
    g = element(GRIG, word)
    assert element_order(g).value == order
    assert perm_order(g, 8) == order


@pytest.mark.parametrize("word,order", [("a", 3), ("t", 3), ("a*t", 9)])
def test_gs_orders(word, order):
    g = element(GS, word)
    assert element_order(g).value == order
    assert perm_order(g, 5) == order


def test_order_cap():
    rep = element_order(element(GRIG, "a*b"), cap=2)
    assert not rep.finite and not rep.infinite
    assert 1 <= rep.lower_bound <= 16 and "cap" in rep.reason


def test_infinite_order():
    # the adding machine: an infinite cyclic group
    A = make_group("adding", 2, {"m": (["1", "m"], 1)})
    rep = element_order(element(A, "m"))
    assert rep.infinite and str(rep) == "infinite"


def test_acts_trivially():
    assert acts_trivially(element(GRIG, "b*c*d"), 6)
    assert not acts_trivially(element(GRIG, "a"), 1)


@given(words(GRIG), words(GRIG), st.lists(st.integers(0, 1), max_size=6))
def test_action_is_left_action_grigorchuk(u, v, w):
    g, h = element(GRIG, u), element(GRIG, v)
    assert act_word(g * h, w) == act_word(g, act_word(h, w))


@given(words(GS), words(GS), st.lists(st.integers(0, 2), max_size=5))
def test_action_is_left_action_gs(u, v, w):
    g, h = element(GS, u), element(GS, v)
    assert act_word(g * h, w) == act_word(g, act_word(h, w))
    assert act_word(g.inverse(), act_word(g, w)) == tuple(w)


@given(words(GRIG, 4), words(GRIG, 4))
def test_matrix_recursion_multiplicative(u, v):
    G = group(GRIG)
    g, h = element(GRIG, u), element(GRIG, v)
    lhs = word_matrix_product(G, group_matrix_recursion(g), group_matrix_recursion(h))
    rhs = group_matrix_recursion(g * h)
    for r in range(2):
        for c in range(2):
            assert (lhs[r][c] is None) == (rhs[r][c] is None)
            if lhs[r][c] is not None:
                x, y = element(GRIG, lhs[r][c]), element(GRIG, rhs[r][c])
                for w in itertools.product(range(2), repeat=5):
                    assert act_word(x, w) == act_word(y, w)


@given(words(GRIG, 4), st.sampled_from(["a*b", "a*c", "a*d", "b", "a*d*a*c"]))
def test_order_conjugation_invariant(h, g):
    x, y = element(GRIG, g), element(GRIG, h)
    conj = y * x * y.inverse()
    assert element_order(conj).value == element_order(x).value


def test_lie_from_group_matches_catalog():
    assert same_structure(lie_from_group(GS), gupta_sidki().spec)
    assert same_structure(lie_from_group(GRIG), grigorchuk().spec)
    assert not same_structure(gupta_sidki().spec, fabrykowski_gupta().spec)


def test_group_lie_polys_gs():
    polys = group_lie_polys(GS)
    fs, perm = polys["t"]
    assert perm == 0
    # t = (a, a^-1, t): f_a = x^0 (x+1)^2 - x (x+1) = 1 + x, f_t = x^2
    assert fs["a"] == [1, 1, 0] and fs["t"] == [0, 0, 1]
    assert leading_monomial(fs["a"]) == (1, 1)
    assert leading_monomial([0, 0, 0]) is None


def test_kaloujnine_needs_minpoly_hint():
    K = kaloujnine_group(2, 3)
    spec = lie_from_group(K, lambda_minpoly=(-2, 1))
    assert spec.p == 2 and len(spec.generators) == 3


def test_group_spec_validation():
    with pytest.raises(StructureError):
        make_group("bad", 2, {"a": (["1"], 1)})
    with pytest.raises(StructureError):
        make_group("bad", 2, {"a": (["1", "q"], 1)})
    with pytest.raises(StructureError):
        same_structure(gupta_sidki().spec, grigorchuk().spec.__class__(
            "x", 3, 3, gupta_sidki().spec.generators[:1], False))
