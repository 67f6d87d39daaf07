from functools import reduce

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sslie.catalog import grigorchuk, gupta_sidki, psz
from sslie.core import algebra, truncate
from sslie.ground import ResourceError, SpecialDerivation, TruncPoly, companion_matrix, matmul_mod
from sslie.wtensor import level

SHAPES = [(2, 2, 3), (3, 3, 2), (2, 4, 2)]


def kron_oracle(W, vec):
    """Sum of c * (m_{x^e1} (x) ... (x) m_{x^ek} (x) x^j D (x) 1 ...) over coordinates."""
    p, d, n = W.p, W.d, W.n
    M = np.zeros((W.size, W.size), dtype=np.int64)
    for idx in np.nonzero(vec % p)[0]:
        k, exps, j = W.decode(int(idx))
        factors = [companion_matrix(TruncPoly.monomial(p, d, e)) for e in exps]
        factors.append(companion_matrix(SpecialDerivation(TruncPoly.monomial(p, d, j))))
        factors.append(np.eye(d ** (n - k - 1), dtype=np.int64))
        M = (M + int(vec[idx]) * reduce(np.kron, factors)) % p
    return M


def vectors(W):
    return st.lists(st.integers(0, W.p - 1), min_size=W.dim, max_size=W.dim).map(np.array)


@pytest.mark.parametrize("p,d,n", SHAPES)
def test_dims(p, d, n):
    assert level(p, d, n).dim == sum(d**k for k in range(1, n + 1))


def test_dim_cap():
    with pytest.raises(ResourceError):
        level(2, 2, 30)


@given(st.sampled_from(SHAPES), st.data())
def test_to_matrix_matches_kron_oracle(shape, data):
    W = level(*shape)
    v = data.draw(vectors(W))
    M = W.to_matrix(v)
    assert (M == kron_oracle(W, v)).all()
    assert (W.coords_of_matrix(M) == v % W.p).all()
    assert (W.to_matrix(v, sparse=True).toarray() == M).all()


@given(st.sampled_from(SHAPES), st.data())
def test_bracket_is_commutator(shape, data):
    W = level(*shape)
    u, v = data.draw(vectors(W)), data.draw(vectors(W))
    A, B = W.to_matrix(u), W.to_matrix(v)
    comm = (matmul_mod(A, B, W.p) - matmul_mod(B, A, W.p)) % W.p
    assert (W.to_matrix(W.bracket(u, v)) == comm).all()
    assert (W.bracket(u, v) == (-W.bracket(v, u)) % W.p).all()
    assert (W.ad_matrix(u) @ v % W.p == W.bracket(u, v)).all()


@given(st.sampled_from(SHAPES), st.data())
def test_p_power_two_routes(shape, data):
    W = level(*shape)
    v = data.draw(vectors(W))
    assert (W.p_power(v) == W.p_power_dense(v)).all()


@given(st.sampled_from(SHAPES), st.data())
def test_restrict_is_a_homomorphism(shape, data):
    W = level(*shape)
    lower = level(W.p, W.d, W.n - 1)
    u, v = data.draw(vectors(W)), data.draw(vectors(W))
    assert (W.restrict(W.bracket(u, v), W.n - 1) == lower.bracket(W.restrict(u, W.n - 1), W.restrict(v, W.n - 1))).all()


@given(st.sampled_from(SHAPES), st.data())
def test_embed_child_is_x_tensor(shape, data):
    W = level(*shape)
    child = level(W.p, W.d, W.n - 1)
    c = data.draw(vectors(child))
    i = data.draw(st.integers(0, W.d - 1))
    want = np.kron(companion_matrix(TruncPoly.monomial(W.p, W.d, i)), child.to_matrix(c)) % W.p
    assert (W.to_matrix(W.embed_child(c, i)) == want).all()


def test_der_vec():
    W = level(3, 3, 2)
    v = W.der_vec([0, 1, 0])
    want = np.kron(companion_matrix(SpecialDerivation(TruncPoly.monomial(3, 3, 1))), np.eye(3, dtype=np.int64))
    assert (W.to_matrix(v) == want).all()
    assert W.label(1) == "x*D"


@pytest.mark.parametrize("entry", [gupta_sidki, grigorchuk, lambda: psz(2, 3)])
def test_core_coordinate_routes_agree(entry):
    A = algebra(entry().spec)
    es = [A.element(s) for s in ("[" + A.spec.names[0] + "," + A.spec.names[1] + "]",)] + A.gens()
    es.append(A.element(f"[[{A.spec.names[0]},{A.spec.names[1]}],{A.spec.names[1]}]"))
    for n in (1, 2, 3):
        W = level(A.p, A.d, n)
        for e in es:
            rec = A.coords(e, n, "recursion")
            assert (rec == A.coords(e, n, "direct")).all()
            assert (W.to_matrix(rec) == truncate(e, n)).all()
