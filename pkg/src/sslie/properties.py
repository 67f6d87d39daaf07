"""Invariant predicates shared by the verification driver and the property tests.

Each predicate returns True when the invariant holds for the given inputs.
`random_element` builds elements from generator bracket words with a caller-owned
random.Random, so runs are reproducible."""

from __future__ import annotations

import random
from typing import Dict, List

import numpy as np

from .core import Element, act, bracket, p_power, psi_hat, span, truncate
from .ground import matmul_mod, matpow_mod
from .nilcert import bounded_norm


def random_element(alg, rng: random.Random, depth: int = 3, terms: int = 2) -> Element:
    gens = alg.gens()
    out = alg.zero()
    for _ in range(terms):
        e = rng.choice(gens)
        for _ in range(rng.randrange(depth)):
            g = rng.choice(gens)
            e = bracket(e, g) if rng.random() < 0.5 else bracket(g, e)
        out = out + e * rng.randrange(1, alg.p)
    return out


def jacobi_at_level(x, y, z, n: int) -> bool:
    j = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
    return not truncate(j, n).any()


def bracket_functorial(x, y, n: int) -> bool:
    p = x.alg.p
    X, Y = truncate(x, n), truncate(y, n)
    comm = (matmul_mod(X, Y, p) - matmul_mod(Y, X, p)) % p
    return bool((truncate(bracket(x, y), n) == comm).all())


def power_functorial(x, n: int) -> bool:
    p = x.alg.p
    return bool((truncate(p_power(x), n) == matpow_mod(truncate(x, n), p, p)).all())


def extendaction(e, v) -> bool:
    """act(e, v (x) 1) = act(e, v) (x) 1."""
    d = e.alg.d
    one = np.zeros(d, dtype=np.int64)
    one[0] = 1
    return bool((act(e, tuple(v) + (0,)) == np.kron(act(e, v), one)).all())


def norm_axioms(a, b) -> bool:
    """||[a,b]|| <= max(||a||,||b||)+1 and ||a^[p]|| <= ||a||+p-1 (vacuous if unbounded)."""
    p = a.alg.p
    na, nb = bounded_norm(a), bounded_norm(b)
    ok = True
    if na.bounded and nb.bounded:
        nab = bounded_norm(bracket(a, b))
        ok = nab.bounded and nab.value <= max(na.value, nb.value) + 1
    if na.bounded and a.alg.spec.restricted:
        npw = bounded_norm(p_power(a))
        ok = ok and npw.bounded and npw.value <= na.value + p - 1
    return ok


def psi_hat_monotone(alg, small: List[Element], extra: List[Element]) -> bool:
    V = span(alg, small)
    W = span(alg, small + extra)
    return psi_hat(W).contains_span(psi_hat(V))


def pbw_count(dims: Dict[int, int], cutoff: int, char: int = 0) -> List[int]:
    """Monomials in a PBW basis counted one by one: nondecreasing words in an ordered
    basis, multiplicities below char when char > 0."""
    basis = [deg for deg in sorted(dims) for _ in range(dims[deg]) if deg <= cutoff]
    counts = [0] * (cutoff + 1)
    limit = char - 1 if char else cutoff

    def walk(start, total):
        counts[total] += 1
        for i in range(start, len(basis)):
            deg = basis[i]
            t, k = total, 0
            while k < limit and t + deg <= cutoff:
                t += deg
                k += 1
                walk(i + 1, t)

    walk(0, 0)
    return counts
