import dataclasses

import numpy as np
import pytest

from sslie.analysis import graded_dims, level_image_dim
from sslie.catalog import (
    ENTRIES,
    deflate_generators,
    get,
    grigorchuk,
    gupta_sidki,
    inflate,
    kaloujnine,
    psz,
    psz_branching,
    psz_ideal_generators,
    toy_maximal_class,
)
from sslie.core import AlgebraSpec, algebra, equal_to_level, expand, is_zero_to_level, truncate, verify_grading
from sslie.ground import EchelonBuilder, StructureError
from sslie.wtensor import level


@pytest.mark.parametrize("name", sorted(ENTRIES))
def test_entries_build_and_are_graded(name):
    e = get(name)
    assert e.spec is not None or e.group is not None
    if isinstance(e.spec, AlgebraSpec) and e.spec.graded:
        assert verify_grading(e.spec)


def test_unknown_entry():
    with pytest.raises(KeyError):
        get("nope")


@pytest.mark.parametrize("entry", [lambda: psz(2, 2), lambda: psz(2, 3), lambda: kaloujnine(2, 5)])
def test_expected_dims(entry):
    e = entry()
    for n, dim in e.expect["dims"].items():
        assert level_image_dim(e.spec, n) == dim


def test_psz_bad_m():
    with pytest.raises(StructureError):
        psz(1, 2)


def test_psz_ideal_generators_lie_in_the_ideal():
    e = psz(2, 3)
    gens = psz_ideal_generators(e)
    assert len(gens) == 3  # v, [d,v], [d,[d,v]]
    A = algebra(e.spec)
    for g, text in zip(gens, ["v", "[d,v]", "[d,[d,v]]"]):
        assert equal_to_level(g, A.element(text), 4)


def test_psz_branching_shape():
    kp, i, c = psz_branching(psz(2, 3))
    ex = expand(kp)
    assert i == 2
    for j, cj in enumerate(ex.coeffs):
        if j != i:
            assert is_zero_to_level(cj, 3)


def lcs_quotients(spec, n, kmax):
    """dim gamma_k / gamma_{k+1} of the level-n image, from left-normed commutators."""
    A = algebra(spec)
    W = level(spec.p, spec.d, n)
    p = spec.p
    ads = [W.ad_matrix(A.coords(g, n)) for g in A.gens()]
    layers = [[A.coords(g, n) for g in A.gens()]]
    for _ in range(kmax):
        B = EchelonBuilder(W.dim, p)
        nxt = []
        for x in layers[-1]:
            for ad in ads:
                w = (ad @ x) % p
                if w.any() and B.add(w):
                    nxt.append(w)
        layers.append(nxt)
    gam = []
    for k in range(kmax + 1):
        B = EchelonBuilder(W.dim, p)
        for L in layers[k:]:
            for v in L:
                B.add(v)
        gam.append(B.rank)
    return [gam[k] - gam[k + 1] for k in range(kmax)]


@pytest.fixture(scope="module")
def toy_inflated():
    toy = dataclasses.replace(toy_maximal_class().spec, restricted=True)
    return toy, inflate(toy, "u0", ("w0",))


def test_toy_is_maximal_class():
    assert lcs_quotients(toy_maximal_class().spec, 7, 16) == [2] + [1] * 15


def test_inflation_stays_maximal_class(toy_inflated):
    _, inf = toy_inflated
    for n in (7, 8):
        assert lcs_quotients(inf, n, 16) == [2] + [1] * 15
    gd = graded_dims(dataclasses.replace(inf, restricted=False), 16)
    assert gd.certified
    assert gd.integer_dims() == {1: 2, **{k: 1 for k in range(2, 17)}}


def test_s_prime_to_the_p_is_s(toy_inflated):
    _, inf = toy_inflated
    A = algebra(inf)
    from sslie.core import p_power

    ex = expand(p_power(A.gen("u0'")))
    assert ex.der.is_zero()
    assert equal_to_level(ex.coeffs[0], A.gen("u0"), 4)
    assert is_zero_to_level(ex.coeffs[1], 4)


def test_deflate_inflate_generatorwise(toy_inflated):
    toy, inf = toy_inflated
    A = algebra(inf)
    B = algebra(toy)
    defl = deflate_generators(inf, "u0'")
    assert set(defl) == {"u0", "w0"}
    for name, e in defl.items():
        # 1 (x) g acts as the identity on the first letter
        want = np.kron(np.eye(2, dtype=np.int64), truncate(B.gen(name), 2))
        assert (truncate(e, 3) == want).all()


def test_inflate_errors():
    spec = toy_maximal_class().spec
    with pytest.raises(StructureError):
        inflate(spec, "q")
    with pytest.raises(StructureError):
        inflate(spec, "u0", ("u0",))
    with pytest.raises(StructureError):
        inflate(spec, "u0", ())


def test_inflation_of_ungraded_degrees_drops_grading():
    spec = gupta_sidki().spec  # lambda = 1+sqrt2, so the new generators are not degree 1
    inf = inflate(spec, "a")
    assert not inf.graded
