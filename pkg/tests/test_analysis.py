import itertools
from fractions import Fraction

import numpy as np
import pytest

from sslie.analysis import (
    bracket_words,
    branching_witness,
    centralizer_at_level,
    dims_table,
    fit_dims,
    graded_dims,
    hausdorff,
    is_recurrent,
    is_transitive,
    level_image_dim,
    nillity_ladder,
    nucleus,
)
from sslie.catalog import grigorchuk, gupta_sidki, psz
from sslie.core import AlgebraSpec, algebra, bracket, element_degree, make_generator, truncate
from sslie.wtensor import level
from sslie.ground import EchelonBuilder, TruncPoly, matmul_mod, matpow_mod


def closure_oracle(spec, n, restricted):
    """dim of the Lie (p-)algebra generated by the level-n matrices, by plain closure."""
    A = algebra(spec)
    p = spec.p
    B = EchelonBuilder(spec.d ** (2 * n), p)
    basis = []

    def push(M):
        if B.add(M.ravel() % p):
            basis.append(M % p)
            return True
        return False

    for g in A.gens():
        push(truncate(g, n))
    i = 0
    while i < len(basis):
        X = basis[i]
        for Y in list(basis[: i + 1]):
            push(matmul_mod(X, Y, p) - matmul_mod(Y, X, p))
        if restricted:
            push(matpow_mod(X, p, p))
        i += 1
    return len(basis)


@pytest.mark.parametrize(
    "entry,levels",
    [(gupta_sidki, (1, 2, 3)), (grigorchuk, (1, 2, 3, 4)), (lambda: psz(2, 3), (1, 2, 3))],
)
def test_level_dims_match_closure_oracle(entry, levels):
    spec = entry().spec
    for n in levels:
        got = level_image_dim(spec, n)
        assert got == closure_oracle(spec, n, spec.restricted)
        assert got <= (spec.d**n - 1) // (spec.d - 1) * spec.d


def test_gs_dims_and_fit():
    t = dims_table(gupta_sidki().spec, 6, 2)
    assert t.dims() == {2: 3, 3: 7, 4: 19, 5: 55, 6: 163}
    alpha, beta, n0 = fit_dims(t.dims(), 3)
    assert (alpha, beta) == (Fraction(2, 9), 1) and n0 == 2
    assert "n,dim,fitted,residual" in t.to_csv()


def test_hausdorff_values():
    assert hausdorff(grigorchuk().spec).value == Fraction(1, 2)
    rep = hausdorff(gupta_sidki().spec)
    assert rep.value == Fraction(4, 9)
    assert hausdorff(gupta_sidki().spec, relative=False).value == Fraction(4, 27)
    with pytest.raises(ValueError):
        hausdorff(gupta_sidki().spec, (2, 3))


def test_fit_extends_to_later_levels():
    assert fit_dims({1: 1, 2: 2, 3: 4, 4: 8}, 2) == (Fraction(1, 2), 0, 1)
    assert fit_dims({1: 1, 2: 3, 3: 7, 4: 20}, 2) is None


def test_nucleus_gs():
    rep = nucleus(gupta_sidki().spec)
    A = algebra(gupta_sidki().spec)
    assert rep.contracting and rep.dim == 2
    assert {str(e) for e in rep.basis} == {"a", "t"}
    assert rep.min_degree == pytest.approx(1.0)


def test_recurrence():
    rep = is_recurrent(gupta_sidki().spec)
    assert rep.recurrent and set(rep.witnesses) == {"a", "t"}
    assert not is_recurrent(grigorchuk().spec).recurrent


def test_transitivity():
    for n in (1, 2, 3):
        assert is_transitive(gupta_sidki().spec, n)
    g = make_generator(3, 3, "z", [(TruncPoly.monomial(3, 3, 1), [("z", 1)])], None, None)
    trivial = AlgebraSpec("trivial", 3, 3, (g,), False)
    assert not is_transitive(trivial, 1)


def test_bracket_words_are_distinct():
    ws = bracket_words(gupta_sidki().spec, 3)
    assert len({w.key for w in ws}) == len(ws)


def test_branching_unit():
    spec = gupta_sidki().spec
    A = algebra(spec)
    at = A.element("[a,t]")
    rep = branching_witness(spec, A.element("[[a,t],t]"), TruncPoly.monomial(3, 3, 2), at)
    assert rep.up_to_unit and not rep.holds and rep.unit == 2


def test_centralizer_commutes_with_generators():
    spec = gupta_sidki().spec
    A = algebra(spec)
    W = level(3, 3, 2)
    for within in ("W", "L"):
        C = centralizer_at_level(spec, 2, within=within)
        for v in C.matrix():
            for g in A.gens():
                assert not W.bracket(A.coords(g, 2), v).any()
    assert centralizer_at_level(spec, 2, "L") <= centralizer_at_level(spec, 2, "W")
    with pytest.raises(ValueError):
        centralizer_at_level(gupta_sidki().spec, 2, within="Q")


def test_grigorchuk_degree_formula():
    A = algebra(grigorchuk().spec)
    ab = A.element("[a,b]")
    for n in range(0, 5):
        for exps in itertools.product(range(2), repeat=n):
            e = A.tensor_word(exps, ab)
            want = 2 ** (n + 1) - sum(2 ** (k - 1) * i for k, i in enumerate(exps, start=1))
            assert element_degree(e).real == pytest.approx(want)


def test_grigorchuk_graded_dims_small():
    gd = graded_dims(grigorchuk().spec, 20).integer_dims()
    assert all(gd[n] == 1 for n in range(3, 21))


def test_nillity_ladder():
    A = algebra(gupta_sidki().spec)
    assert nillity_ladder(A.gen("a"), A.gen("t"), 1, 0) == []
    lad = nillity_ladder(A.element("[a,t]"), A.gen("t"), 1, 2)
    base = element_degree(A.element("[a,t]"))
    assert len(lad) == 2
    assert element_degree(lad[0] - A.gen("t")) == base.scale_by_lambda() + A.spec.degree_ring().const(-2)
