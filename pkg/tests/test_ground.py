import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sslie.ground import (
    DegreeRing,
    EchelonBuilder,
    Scalar,
    SpecialDerivation,
    StructureError,
    Subspace,
    TruncPoly,
    apply_derivation,
    check_prime,
    companion_matrix,
    degree_arith,
    matmul_mod,
    matpow_mod,
    nullspace,
    poly_mul,
    rref,
    solve_mod,
    subspace_ops,
)


def P(p, d, cs):
    return TruncPoly.from_list(p, d, cs)


def test_poly_mul_examples():
    assert poly_mul(P(3, 3, [0, 1]), P(3, 3, [0, 0, 1])).is_zero()
    assert poly_mul(P(3, 3, [1, 1]), P(3, 3, [1, 1])) == P(3, 3, [1, 2, 1])
    q = P(5, 5, [3, 0, 2, 4])
    assert poly_mul(TruncPoly.one(5, 5), q) == q


def test_apply_derivation_examples():
    D3 = SpecialDerivation.partial(3, 3)
    assert apply_derivation(D3, P(3, 3, [0, 0, 1])) == P(3, 3, [0, 2])
    assert apply_derivation(D3, TruncPoly.one(3, 3)).is_zero()
    xD = SpecialDerivation(P(5, 5, [0, 1]))
    assert xD(P(5, 5, [0, 0, 1])) == P(5, 5, [0, 0, 2])


def test_partial_to_the_p_vanishes():
    for p in (2, 3, 5):
        D = SpecialDerivation.partial(p, p)
        assert D.p_power().is_zero()
        assert not matpow_mod(companion_matrix(D), p - 1, p).any() is True or p == 2
        assert not matpow_mod(companion_matrix(D), p, p).any()


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_divided_power_displays(p):
    D = companion_matrix(SpecialDerivation.partial(p, p), "divided")
    assert (D == np.eye(p, k=1, dtype=np.int64)).all()
    X = companion_matrix(P(p, p, [0, 1]), "divided")
    want = np.zeros((p, p), dtype=np.int64)
    for c in range(p - 1):
        want[c + 1, c] = c + 1
    assert (X == want).all()
    assert (companion_matrix(TruncPoly.one(p, p)) == np.eye(p, dtype=np.int64)).all()


def test_monomial_companion_column_convention():
    # entry (r, c) carries x^c to x^r
    M = companion_matrix(P(3, 3, [0, 1]))
    assert M[1, 0] == 1 and M[2, 1] == 1 and M.sum() == 2
    D = companion_matrix(SpecialDerivation.partial(3, 3))
    assert D[0, 1] == 1 and D[1, 2] == 2


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_scalar_field_axioms_exhaustive(p):
    els = [Scalar(i, p) for i in range(p)]
    zero, one = Scalar(0, p), Scalar(1, p)
    for a, b in itertools.product(els, repeat=2):
        assert a + b == b + a and a * b == b * a
        assert (a - b) + b == a
        if b:
            assert (a / b) * b == a
    for a, b, c in itertools.product(els, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
    for a in els:
        assert a + zero == a and a * one == a and a + (-a) == zero
        if a:
            assert a * a.inverse() == one
    with pytest.raises(StructureError):
        Scalar(1, 3) + Scalar(1, 5)


@pytest.mark.parametrize("p", [2, 3])
def test_companion_homomorphism_exhaustive(p):
    d = p
    basis = [TruncPoly.monomial(p, d, i) for i in range(d)]
    polys = [P(p, d, cs) for cs in itertools.product(range(p), repeat=d)]
    for q1 in polys:
        for q2 in basis:
            assert (matmul_mod(companion_matrix(q1), companion_matrix(q2), p) == companion_matrix(q1 * q2)).all()
    for h in polys:
        delta = SpecialDerivation(h)
        Md = companion_matrix(delta)
        for q in basis:
            Mq = companion_matrix(q)
            comm = (matmul_mod(Md, Mq, p) - matmul_mod(Mq, Md, p)) % p
            assert (comm == companion_matrix(delta(q))).all()


@given(st.sampled_from([5, 7]), st.data())
def test_companion_homomorphism_random(p, data):
    cs = st.lists(st.integers(0, p - 1), min_size=p, max_size=p)
    q1, q2, h = (P(p, p, data.draw(cs)) for _ in range(3))
    assert (matmul_mod(companion_matrix(q1), companion_matrix(q2), p) == companion_matrix(q1 * q2)).all()
    Md, Mq = companion_matrix(SpecialDerivation(h)), companion_matrix(q1)
    assert ((matmul_mod(Md, Mq, p) - matmul_mod(Mq, Md, p)) % p == companion_matrix(SpecialDerivation(h)(q1))).all()


def test_derivation_bracket_matches_matrices():
    p = 3
    f, g = SpecialDerivation(P(p, p, [1, 2])), SpecialDerivation(P(p, p, [0, 1, 1]))
    Mf, Mg = companion_matrix(f), companion_matrix(g)
    assert ((matmul_mod(Mf, Mg, p) - matmul_mod(Mg, Mf, p)) % p == companion_matrix(f.bracket(g))).all()
    assert (matpow_mod(Mf, p, p) == companion_matrix(f.p_power())).all()


def test_truncpoly_validation():
    with pytest.raises(StructureError):
        TruncPoly(3, 3, (1, 2))
    with pytest.raises(StructureError):
        P(3, 3, [1]) + P(5, 3, [1])
    with pytest.raises(StructureError):
        check_prime(4)


def test_subspace_examples():
    S = subspace_ops("span", [(1, 0), (1, 1)], 2, 2)
    assert subspace_ops("dim", S) == 2
    I = subspace_ops("intersect", Subspace.span([(1, 0)], 2, 2), Subspace.span([(0, 1)], 2, 2))
    assert I.dim == 0


def _enumerate(S: Subspace):
    vecs = set()
    B = S.matrix()
    for cs in itertools.product(range(S.p), repeat=S.dim):
        v = (np.array(cs, dtype=np.int64) @ B) % S.p if S.dim else np.zeros(S.ambient, dtype=np.int64)
        vecs.add(tuple(int(x) for x in v))
    return vecs


@given(st.sampled_from([2, 3]), st.integers(2, 5), st.data())
def test_subspace_ops_match_enumeration(p, n, data):
    vec = st.lists(st.integers(0, p - 1), min_size=n, max_size=n)
    U = Subspace.span(data.draw(st.lists(vec, max_size=3)), n, p)
    W = Subspace.span(data.draw(st.lists(vec, max_size=3)), n, p)
    eu, ew = _enumerate(U), _enumerate(W)
    assert len(eu) == p**U.dim
    assert _enumerate(U + W) == {tuple((a + b) % p for a, b in zip(u, w)) for u in eu for w in ew}
    assert _enumerate(U.intersect(W)) == eu & ew
    probe = tuple(data.draw(vec))
    assert U.contains(probe) == (probe in eu)


def test_sum_of_dim3_subspaces_f3_5():
    rng = np.random.default_rng(5)
    for _ in range(10):
        U = Subspace.span(rng.integers(0, 3, (3, 5)), 5, 3)
        W = Subspace.span(rng.integers(0, 3, (3, 5)), 5, 3)
        eu, ew = _enumerate(U), _enumerate(W)
        assert _enumerate(U + W) == {tuple((a + b) % 3 for a, b in zip(u, w)) for u in eu for w in ew}


@given(st.sampled_from([2, 3, 5]), st.data())
def test_rref_invariants(p, data):
    rows = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=5, max_size=5), min_size=1, max_size=5))
    R, piv = rref(rows, p)
    assert list(piv) == sorted(set(piv))
    for i, c in enumerate(piv):
        assert R[i, c] == 1
        assert all(R[j, c] == 0 for j in range(len(piv)) if j != i)
        assert R[i].any()
    K = nullspace(np.array(rows), p)
    for k in K:
        assert not (np.array(rows) @ k % p).any()
    assert len(K) + len(piv) == 5


@given(st.sampled_from([2, 3, 5]), st.data())
def test_solve_mod(p, data):
    A = np.array(data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=4, max_size=4), min_size=1, max_size=4)))
    x0 = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=4, max_size=4)))
    b = A @ x0 % p
    x = solve_mod(A, b, p)
    assert x is not None and ((A @ x - b) % p == 0).all()


def test_solve_mod_inconsistent():
    assert solve_mod([[1, 0], [1, 0]], [0, 1], 3) is None


def test_echelon_builder_membership():
    B = EchelonBuilder(4, 3)
    assert B.add([1, 2, 0, 0]) and B.add([0, 1, 1, 0])
    assert not B.add([1, 0, 1, 0]) or B.rank == 3
    assert B.contains([2, 1, 0, 0])
    assert not B.contains([0, 0, 0, 1])


def test_degree_ring_examples():
    R = DegreeRing((-1, -2, 1), (1.5, 4.0))
    assert R.reduce([0, 0, 1]) == (1, 2)
    t = R.degree([-1, 1])
    assert math.isclose(t.real, math.sqrt(2), rel_tol=1e-12)
    assert math.isclose(R.root, 1 + math.sqrt(2), rel_tol=1e-12)
    G = DegreeRing((-2, 1), (1.5, 2.5))
    assert G.rank == 1 and G.root == 2.0
    assert degree_arith("scale_by_lambda", G.const(3)).poly == (6,)
    assert degree_arith("reduce", R, [0, 0, 1]).poly == (1, 2)


@given(st.lists(st.integers(-20, 20), max_size=6), st.lists(st.integers(-20, 20), max_size=6))
def test_degree_reduction_properties(a, b):
    R = DegreeRing((-1, -2, 1), (1.5, 4.0))
    x, y = R.degree(a), R.degree(b)
    assert R.reduce(x.poly) == x.poly
    assert math.isclose((x + y).real, x.real + y.real, abs_tol=1e-12 * (1 + abs(x.real) + abs(y.real)) * 1e3)
    lam = R.root
    direct = sum(c * lam**i for i, c in enumerate(a))
    assert math.isclose(x.real, direct, rel_tol=1e-9, abs_tol=1e-6)
