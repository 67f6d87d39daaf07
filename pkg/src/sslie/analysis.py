"""Algebra-level structure: level images, Hausdorff dimension, nucleus, recurrence,
transitivity, branching, centralizers, nillity ladders, graded dimensions, GK estimates.

Level images are computed in W(X)_n coordinates (see wtensor), which encode
truncations to Der(X^{(x)n}) injectively; closures are Krylov spans under the
ad-matrices of the generators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np

from .core import (
    AlgebraSpec,
    Element,
    ElementSpan,
    TRUNC_CAP,
    algebra,
    atom_degree,
    bracket,
    element_degree,
    equal_to_level,
    expand,
    is_zero_to_level,
    p_power,
    psi_hat,
    wlevel_dim,
)
from .ground import EchelonBuilder, ResourceError, Subspace, nullspace, solve_mod
from .wtensor import level as wlevel

CLOSURE_DIM_CAP = 400_000


# ---------------------------------------------------------------------------
# level images


def level_closure(spec: AlgebraSpec, n: int, restricted: Optional[bool] = None):
    """Echelon basis of L_n in W(X)_n coordinates plus the list of inserted vectors."""
    if n < 0:
        raise ValueError("level must be >= 0")
    if wlevel_dim(spec.d, n) > CLOSURE_DIM_CAP:
        raise ResourceError(f"dim W(X)_{n} exceeds the closure cap {CLOSURE_DIM_CAP}")
    restricted = spec.restricted if restricted is None else restricted
    alg = algebra(spec)
    p = spec.p
    W = wlevel(p, spec.d, n)
    B = EchelonBuilder(W.dim, p)
    vectors: list = []
    if n == 0:
        return B, vectors
    gens = [alg.coords(g, n) for g in alg.gens()]
    ads = [W.ad_matrix(g) for g in gens]

    def insert(block):
        if len(block) == 0:
            return np.zeros((0, W.dim), dtype=np.int64)
        block = np.asarray(block, dtype=np.int64) % p
        new = B.add_block(block)
        fresh = block[new]
        vectors.extend(fresh)
        return fresh

    frontier = insert(gens)
    while len(frontier):
        cand = [((A @ frontier.T) % p).T for A in ads]
        if restricted:
            cand.append(np.array([W.p_power(v) for v in frontier]))
        frontier = insert(np.vstack(cand))
    return B, vectors


def level_image_dim(spec: AlgebraSpec, n: int, restricted: Optional[bool] = None) -> int:
    return level_closure(spec, n, restricted)[0].rank


@dataclass
class DimsTable:
    rows: list  # (n, dim)
    restricted: bool
    fit: Optional["HausdorffReport"] = None

    def dims(self) -> Dict[int, int]:
        return dict(self.rows)

    def to_csv(self) -> str:
        lines = ["n,dim,fitted,residual"]
        for n, dim in self.rows:
            if self.fit is not None and self.fit.alpha is not None:
                fitted = self.fit.alpha * self.fit.d**n + self.fit.beta
                lines.append(f"{n},{dim},{fitted},{dim - fitted}")
            else:
                lines.append(f"{n},{dim},,")
        return "\n".join(lines) + "\n"


def dims_table(spec: AlgebraSpec, n_max: int, n_min: int = 1, restricted: Optional[bool] = None) -> DimsTable:
    r = spec.restricted if restricted is None else restricted
    rows = [(n, level_image_dim(spec, n, r)) for n in range(n_min, n_max + 1)]
    return DimsTable(rows, r)


@dataclass
class HausdorffReport:
    d: int
    window: tuple
    relative: bool
    alpha: Optional[Fraction]
    beta: Optional[Fraction]
    fit_start: Optional[int]
    value: Optional[Fraction]
    dims: dict = field(default_factory=dict)

    @property
    def conclusive(self) -> bool:
        return self.value is not None

    def __str__(self):
        return str(self.value) if self.value is not None else "inconclusive"


def fit_dims(dims: Dict[int, int], d: int):
    """First start n0 with an exact fit alpha*d^n+beta on 3 consecutive levels that
    also holds on every later level; (alpha, beta, n0) or None."""
    ns = sorted(dims)
    for s in range(len(ns) - 2):
        n0, n1 = ns[s], ns[s + 1]
        if n1 != n0 + 1 or ns[s + 2] != n0 + 2:
            continue
        alpha = Fraction(dims[n1] - dims[n0], d**n1 - d**n0)
        beta = dims[n0] - alpha * d**n0
        if all(alpha * d**n + beta == dims[n] for n in ns[s:]):
            return alpha, beta, n0
    return None


def hausdorff(spec: AlgebraSpec, window=(2, 6), relative: bool = True, restricted: Optional[bool] = None) -> HausdorffReport:
    a, b = window
    if b - a + 1 < 3:
        raise ValueError("the window needs at least 3 levels")
    dims = {n: level_image_dim(spec, n, restricted) for n in range(a, b + 1)}
    fit = fit_dims(dims, spec.d)
    if fit is None:
        return HausdorffReport(spec.d, window, relative, None, None, None, None, dims)
    alpha, beta, n0 = fit
    dim_p = 1 if relative else spec.d
    value = alpha * (spec.d - 1) / dim_p
    return HausdorffReport(spec.d, window, relative, alpha, beta, n0, value, dims)


# ---------------------------------------------------------------------------
# nucleus


@dataclass
class NucleusReport:
    contracting: bool
    basis: list
    transient: int = 0
    period: int = 0
    rounds: int = 0
    faithful_level: Optional[int] = None
    min_degree: Optional[float] = None
    trace: list = field(default_factory=list)

    @property
    def dim(self):
        return len(self.basis)


def _limit_of_iteration(B: ElementSpan, dim_cap: int, iter_cap: int, trace: list):
    seq = [B]
    for j in range(1, iter_cap + 1):
        nxt = psi_hat(seq[-1])
        if nxt.dim > dim_cap:
            trace.append(f"psi_hat iterate {j} has dimension {nxt.dim} > {dim_cap}")
            return None
        for k, old in enumerate(seq):
            if old.same_as(nxt):
                limit = ElementSpan(B.alg, B.level)
                for s in seq[k:]:
                    for e in s.basis:
                        limit.add(e)
                return limit, k, j - k
        seq.append(nxt)
    trace.append(f"no periodicity within {iter_cap} iterations")
    return None


def nucleus(spec: AlgebraSpec, dim_cap: int = 64, iter_cap: int = 64) -> NucleusReport:
    alg = algebra(spec)
    if alg.nucleus_cache is not None and alg.nucleus_cache[0] == (dim_cap, iter_cap):
        return alg.nucleus_cache[1]
    S = alg.gens()
    N = ElementSpan(alg)
    trace = []
    transient = period = 0
    for rnd in range(1, iter_cap + 1):
        B = N.copy()
        for s in S:
            B.add(s)
        for x in list(N.basis):
            for s in S:
                B.add(bracket(x, s))
        if spec.restricted:
            for x in list(B.basis):
                B.add(p_power(x))
        if B.dim > dim_cap:
            trace.append(f"round {rnd}: dim B = {B.dim} > {dim_cap}")
            return NucleusReport(False, [], rounds=rnd, trace=trace)
        res = _limit_of_iteration(B, dim_cap, iter_cap, trace)
        if res is None:
            return NucleusReport(False, [], rounds=rnd, trace=trace)
        newN, transient, period = res
        trace.append(f"round {rnd}: dim B = {B.dim}, limit dim {newN.dim}, transient {transient}, period {period}")
        if newN.same_as(N):
            rep = NucleusReport(True, list(N.basis), transient, period, rnd, trace=trace)
            rep.faithful_level = _faithful_level(alg, N.basis)
            rep.min_degree = _min_degree(N.basis)
            alg.nucleus_cache = ((dim_cap, iter_cap), rep)
            return rep
        N = newN
    trace.append(f"nucleus did not stabilize in {iter_cap} rounds")
    return NucleusReport(False, [], rounds=iter_cap, trace=trace)


def _faithful_level(alg, basis) -> Optional[int]:
    for k in range(1, alg.work_level() + 1):
        if ElementSpan(alg, k, basis).dim == len(basis):
            return k
    return None


def _min_degree(basis) -> Optional[float]:
    vals = []
    for e in basis:
        for a, _ in e.terms:
            dg = atom_degree(a)
            if dg is None:
                return None
            vals.append(dg.real)
    return min(vals) if vals else None


# ---------------------------------------------------------------------------
# recurrence and transitivity


def bracket_words(spec: AlgebraSpec, depth: int, include_powers: Optional[bool] = None):
    """Left-normed words [g_1,[g_2,...]] of length <= depth, pruned to a spanning set."""
    alg = algebra(spec)
    include_powers = spec.restricted if include_powers is None else include_powers
    S = alg.gens()
    span = ElementSpan(alg)
    layer = []
    for g in S:
        if span.add(g):
            layer.append(g)
    words = list(layer)
    if include_powers and depth > 1:
        # brackets of generators come before their p-th powers
        nxt = []
        for g in S:
            for w in layer:
                e = bracket(g, w)
                if span.add(e):
                    nxt.append(e)
        for g in S:
            e = p_power(g)
            if span.add(e):
                nxt.append(e)
        words.extend(nxt)
        layer = nxt
        depth -= 1
    for _ in range(depth - 1):
        nxt = []
        for g in S:
            for w in layer:
                e = bracket(g, w)
                if span.add(e):
                    nxt.append(e)
        if include_powers:
            for w in layer:
                e = p_power(w)
                if span.add(e):
                    nxt.append(e)
        words.extend(nxt)
        layer = nxt
    return words


@dataclass
class RecurrenceReport:
    recurrent: bool
    witnesses: dict
    missing: list
    depth: int


def is_recurrent(spec: AlgebraSpec, search_depth: int = 3) -> RecurrenceReport:
    """Search k in ker(pi) with (eps (x) 1) psi(k) = g for every generator g."""
    alg = algebra(spec)
    p, d = spec.p, spec.d
    L = alg.work_level()
    words = bracket_words(spec, search_depth)
    rows = []
    for w in words:
        ex = expand(w)
        rows.append(np.concatenate([np.asarray(ex.der.coeffs, dtype=np.int64), alg.coords(ex.coeffs[0], L)]))
    M = np.array(rows, dtype=np.int64).T % p  # columns are words
    witnesses, missing = {}, []
    for name in spec.active_names:
        g = alg.gen(name)
        target = np.concatenate([np.zeros(d, dtype=np.int64), alg.coords(g, L)])
        single = _single_word(M, target, p)
        if single is not None:
            j, u = single
            witnesses[name] = words[j] * u
            continue
        sol = solve_mod(M, target, p) if len(words) else None
        if sol is None:
            missing.append(name)
            continue
        k = alg.zero()
        for c, w in zip(sol, words):
            if c:
                k = k + w * int(c)
        witnesses[name] = k
    return RecurrenceReport(not missing, witnesses, missing, search_depth)


def _single_word(M, target, p):
    """(column j, unit u) with u * M[:, j] = target, preferring early columns."""
    for j in range(M.shape[1]):
        col = M[:, j]
        nz = np.nonzero(target)[0]
        if nz.size == 0 or col[nz[0]] == 0:
            continue
        u = int(target[nz[0]]) * pow(int(col[nz[0]]), p - 2, p) % p
        if not ((u * col - target) % p).any():
            return j, u
    return None


def is_transitive(spec: AlgebraSpec, n: int, cap: int = TRUNC_CAP) -> bool:
    """Does U(L) move theta^{(x)n} onto all of X^{(x)n}?"""
    alg = algebra(spec)
    d, p = spec.d, spec.p
    size = d**n
    if size > cap:
        raise ResourceError(f"d^n = {size} exceeds the cap {cap}")
    mats = [alg.truncate(g, n) for g in alg.gens()]
    theta = np.zeros(size, dtype=np.int64)
    theta[size - 1] = 1  # x^{d-1} (x) ... (x) x^{d-1}
    B = EchelonBuilder(size, p)
    B.add(theta)
    frontier = theta[None, :]
    while len(frontier) and B.rank < size:
        cand = np.vstack([(frontier @ M.T) % p for M in mats])
        new = B.add_block(cand)
        frontier = cand[new]
    return B.rank == size


# ---------------------------------------------------------------------------
# branching


@dataclass
class BranchingReport:
    holds: bool  # exact: psi(k') = mono (x) k
    up_to_unit: bool  # psi(k') = u * mono (x) k for a unit u
    unit: Optional[int]
    level: int
    detail: str = ""


def branching_witness(spec: AlgebraSpec, kprime: Element, mono, k: Element, level: Optional[int] = None) -> BranchingReport:
    alg = algebra(spec)
    L = alg.work_level() if level is None else level
    terms = mono.terms()
    if len(terms) != 1:
        raise ValueError("mono must be a single monomial")
    i, c = terms[0]
    ex = expand(kprime)
    if not ex.der.is_zero():
        return BranchingReport(False, False, None, L, "expansion has a derivation part")
    for j, cj in enumerate(ex.coeffs):
        if j != i and not is_zero_to_level(cj, L - 1):
            return BranchingReport(False, False, None, L, f"nonzero coefficient at x^{j}")
    got = ex.coeffs[i]
    for u in range(1, spec.p):
        if equal_to_level(got, k * (u * c % spec.p), L - 1):
            exact = u == 1
            return BranchingReport(exact, True, u, L, "" if exact else f"coefficient off by the unit {u}")
    return BranchingReport(False, False, None, L, "coefficient is not a multiple of k")


# ---------------------------------------------------------------------------
# centralizers


def centralizer_at_level(spec: AlgebraSpec, n: int, within: str = "L") -> Subspace:
    """Elements of L_n (within='L') or W(X)_n (within='W') commuting with every generator image."""
    alg = algebra(spec)
    p = spec.p
    W = wlevel(p, spec.d, n)
    gens = [alg.coords(g, n) for g in alg.gens()]
    if within == "L":
        B, _ = level_closure(spec, n)
        basis = B.R
    elif within == "W":
        basis = np.eye(W.dim, dtype=np.int64)
    else:
        raise ValueError("within must be 'L' or 'W'")
    if basis.shape[0] == 0:
        return Subspace.zero(W.dim, p)
    # rows of basis b_i; need sum lambda_i [g, b_i] = 0 for every g
    blocks = [((W.ad_matrix(g) @ basis.T) % p) for g in gens]
    M = np.vstack(blocks) if blocks else np.zeros((0, basis.shape[0]), dtype=np.int64)
    lam = nullspace(M, p) if M.shape[0] else np.eye(basis.shape[0], dtype=np.int64)
    vecs = (lam @ basis) % p if lam.shape[0] else np.zeros((0, W.dim), dtype=np.int64)
    return Subspace.span(vecs, W.dim, p)


def k_ideal_witness(spec: AlgebraSpec, a: Element, n: int, level: int) -> bool:
    """Witness test for theta^{(x)n} (x) a in L at the given truncation level."""
    alg = algebra(spec)
    e = alg.tensor_word([spec.d - 1] * n, a)
    B, _ = level_closure(spec, level)
    return B.contains(alg.coords(e, level))


# ---------------------------------------------------------------------------
# nillity ladders


def nillity_ladder(a: Element, b: Element, ell: int, count: int) -> List[Element]:
    """a_0 = a, a_{k+1} = 1^{(x) ell-1} (x) theta (x) a_k + b; returns a_1..a_count."""
    alg = a.alg
    out = []
    cur = a
    prefix = [0] * (ell - 1) + [alg.d - 1]
    for _ in range(count):
        cur = alg.tensor_word(prefix, cur) + b
        out.append(cur)
    return out


# ---------------------------------------------------------------------------
# graded dimensions and growth


@dataclass
class GradedDims:
    dims: dict  # Degree -> int
    lengths: dict  # Degree -> set of generator-word lengths reaching it
    level: int
    certified: bool
    cutoff: float

    def by_real(self):
        return sorted(((dg.real, v) for dg, v in self.dims.items() if v), key=lambda t: t[0])

    def by_length(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for dg, v in self.dims.items():
            ls = self.lengths[dg]
            if len(ls) != 1:
                raise ValueError(f"degree {dg} is reached by words of lengths {sorted(ls)}")
            n = next(iter(ls))
            out[n] = out.get(n, 0) + v
        return dict(sorted(out.items()))

    def integer_dims(self) -> Dict[int, int]:
        out = {}
        for dg, v in self.dims.items():
            if not dg.is_integer():
                raise ValueError("grading is not integral")
            out[dg.poly[0]] = out.get(dg.poly[0], 0) + v
        return dict(sorted(out.items()))


def certified_level(spec: AlgebraSpec, cutoff: float) -> int:
    ring = spec.degree_ring()
    rep = nucleus(spec)
    if not rep.contracting or not rep.min_degree or ring is None or ring.root <= 1:
        raise ValueError("certified level needs a contracting spec graded with lambda > 1")
    nstar = max(0, math.ceil(math.log(cutoff / rep.min_degree) / math.log(ring.root) - 1e-12))
    return nstar + rep.faithful_level + 1


def graded_dims(spec: AlgebraSpec, cutoff: float, by: str = "degree", level: Optional[int] = None,
                restricted: Optional[bool] = None, dim_cap: int = CLOSURE_DIM_CAP) -> GradedDims:
    """Dimensions of homogeneous components of L up to a cutoff.

    by='degree' bounds the real degree; by='length' bounds the generator-word length.
    Independence is decided at `level` (default: the certified depth for the cutoff)."""
    alg = algebra(spec)
    ring = spec.degree_ring()
    if ring is None or not spec.graded:
        raise ValueError("graded_dims needs a declared grading")
    restricted = spec.restricted if restricted is None else restricted
    p, d = spec.p, spec.d
    gens = alg.gens()
    gdeg = [element_degree(g) for g in gens]
    if any(x is None for x in gdeg):
        raise ValueError("generators must be homogeneous")
    real_cut = cutoff if by == "degree" else cutoff * max(x.real for x in gdeg)
    certified = True
    if level is None:
        level = certified_level(spec, real_cut)
        while wlevel_dim(d, level) > dim_cap:
            level -= 1
            certified = False
    W = wlevel(p, d, level)
    gvec = [alg.coords(g, level) for g in gens]
    ads = [W.ad_matrix(v) for v in gvec]
    bins: dict = {}
    lengths: dict = {}

    def within(dg, length):
        if by == "length":
            return length <= cutoff
        return dg.real <= cutoff + 1e-9

    def insert(dg, length, vec):
        b = bins.get(dg)
        if b is None:
            b = bins[dg] = EchelonBuilder(W.dim, p)
        lengths.setdefault(dg, set()).add(length)
        return b.add(vec)

    layers = {1: []}
    for dg, v in zip(gdeg, gvec):
        if within(dg, 1) and insert(dg, 1, v):
            layers[1].append((dg, v))
    length = 1
    while True:
        prev = layers.get(length, [])
        length += 1
        cur = []
        for gi, A in enumerate(ads):
            for dg, v in prev:
                nd = dg + gdeg[gi]
                if not within(nd, length):
                    continue
                w = (A @ v) % p
                if w.any() and insert(nd, length, w):
                    cur.append((nd, w))
        if restricted and length % p == 0:
            for dg, v in layers.get(length // p, []):
                nd = dg.scale(p)
                if within(nd, length):
                    w = W.p_power(v)
                    if w.any() and insert(nd, length, w):
                        cur.append((nd, w))
        layers[length] = cur
        if not cur and all(not layers.get(k) for k in range(length // p + 1, length + 1)):
            # nothing new in this layer and no pending p-power sources
            if not restricted or not any(layers.get(k) for k in range(length // p + 1, length + 1)):
                break
    dims = {dg: b.rank for dg, b in bins.items() if b.rank}
    return GradedDims(dims, {k: lengths[k] for k in dims}, level, certified, cutoff)


@dataclass
class GKEstimate:
    slope: float
    bound: float
    window: tuple
    level: int


def gk_estimate(spec: AlgebraSpec, cutoff: float = 200, window=None, gd: Optional[GradedDims] = None) -> GKEstimate:
    """Least-squares slope of log dim L_{<=D} against log D, next to log(dim X)/log(lambda)."""
    ring = spec.degree_ring()
    gd = gd if gd is not None else graded_dims(spec, cutoff)
    pts = gd.by_real()
    lo, hi = window if window is not None else (cutoff / 8, cutoff)
    reals = np.array([r for r, _ in pts])
    vals = np.array([v for _, v in pts])
    xs, ys = [], []
    for D in np.linspace(lo, hi, 64):
        xs.append(math.log(D))
        ys.append(math.log(max(1, int(vals[reals <= D + 1e-9].sum()))))
    slope = float(np.polyfit(xs, ys, 1)[0])
    bound = math.log(spec.d) / math.log(ring.root)
    return GKEstimate(slope, bound, (lo, hi), gd.level)
