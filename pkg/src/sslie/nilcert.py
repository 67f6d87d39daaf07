"""Nil certificates from boundedness and evanescence, plus truncated nil-index measurements.

The recursion of an element is turned into a labelled graph: nodes are the atoms
reachable through expansions, an edge s -> s' with label i records that s' occurs in
the x^i-coefficient of psi(s). Norms and evanescence are path conditions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import TRUNC_CAP, Element, truncate
from .ground import matpow_mod
from .wtensor import level as wlevel

CERTIFICATE_CITATION = "a Lie algebra generated by bounded, l-evanescent elements is nil"


@dataclass
class StateGraph:
    states: list  # single-atom Elements; the first n_roots are the atoms of the root
    edges: list  # (src, letter, dst)
    ders: list  # TruncPoly per state
    n_roots: int = 1

    @property
    def size(self):
        return len(self.states)

    def der_nodes(self):
        return [i for i, h in enumerate(self.ders) if not h.is_zero()]


def state_graph(e: Element, dim_cap: int = 256) -> Optional[StateGraph]:
    """Atom-level recursion graph rooted at the atoms of e; None if it exceeds dim_cap.

    Working with atoms rather than a span basis keeps every edge a genuine
    coordinate (no spurious edges from rewriting in a basis); cancellations
    between terms are ignored, which only makes the bounds weaker."""
    alg = e.alg
    roots = [a for a, _ in e.terms]
    index = {a: i for i, a in enumerate(roots)}
    states = list(roots)
    edges, ders = [], []
    k = 0
    while k < len(states):
        A = states[k]
        ex = alg.expansion_of_atom(A)
        ders.append(ex.der)
        for i, c in enumerate(ex.coeffs):
            for B, _ in c.terms:
                j = index.get(B)
                if j is None:
                    if len(states) >= dim_cap:
                        return None
                    j = index[B] = len(states)
                    states.append(B)
                edges.append((k, i, j))
        k += 1
    return StateGraph([Element(alg, ((a, 1),)) for a in states], edges, ders, len(roots))


@dataclass
class NormBound:
    value: object  # int or "unbounded"
    trace: list = field(default_factory=list)
    capped: bool = False

    @property
    def bounded(self):
        return self.value != "unbounded" and not self.capped

    def __str__(self):
        return str(self.value)


def _reach(n, edges, start):
    adj = [[] for _ in range(n)]
    for s, _, t in edges:
        adj[s].append(t)
    seen = set(start) if isinstance(start, (set, list, range)) else {start}
    stack = list(seen)
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def bounded_norm(e: Element, depth_cap: int = 64) -> NormBound:
    """Upper bound for the least m with varpi^m e = 0, as 1 + the largest codegree
    sum_j (d-1-i_j) over coordinates i_1..i_n carrying a derivation."""
    alg = e.alg
    d = alg.d
    if e.is_zero():
        return NormBound(0, ["zero element"])
    G = state_graph(e, 4 * depth_cap)
    if G is None:
        return _capped_norm(e, depth_cap)
    n = G.size
    w = lambda letter: d - 1 - letter
    fwd = _reach(n, G.edges, range(G.n_roots))
    rev_edges = [(t, l, s) for s, l, t in G.edges]
    targets = G.der_nodes()
    back = set()
    for t in targets:
        back |= _reach(n, rev_edges, t)
    live = fwd & back
    # longest path (Bellman-Ford style); a positive cycle inside live nodes = unbounded
    NEG = -(10**9)
    best = [NEG] * n
    for r in range(G.n_roots):
        best[r] = 0
    useful = [(s, l, t) for s, l, t in G.edges if s in live and t in live]
    for it in range(n + 1):
        changed = False
        for s, l, t in useful:
            if best[s] > NEG and best[s] + w(l) > best[t]:
                best[t] = best[s] + w(l)
                changed = True
        if not changed:
            break
    else:
        return NormBound("unbounded", ["a cycle with a letter below x^{d-1} feeds a derivation"])
    if changed:
        return NormBound("unbounded", ["a cycle with a letter below x^{d-1} feeds a derivation"])
    vals = [best[t] for t in targets if best[t] > NEG]
    if not vals:
        return NormBound(0, ["no derivation is ever reached"])
    trace = [f"{G.states[t]}: codegree {best[t]}" for t in targets if best[t] > NEG]
    return NormBound(max(vals) + 1, trace)


def _capped_norm(e: Element, depth: int) -> NormBound:
    """Fallback: read the W-coordinates at a fixed depth."""
    alg = e.alg
    n = min(depth, alg.work_level())
    W = wlevel(alg.p, alg.d, n)
    v = alg.coords(e, n)
    best = -1
    for idx in np.nonzero(v)[0]:
        k, exps, _ = W.decode(int(idx))
        best = max(best, sum(alg.d - 1 - x for x in exps))
    return NormBound(best + 1 if best >= 0 else 0, [f"finite-state overflow; coordinates read to depth {n}"], capped=True)


@dataclass
class EvanescenceResult:
    ok: bool
    ell: int
    reason: str = ""

    def __bool__(self):
        return self.ok


def evanescent(e: Element, ell: int, depth_cap: int = 64) -> EvanescenceResult:
    alg = e.alg
    p, d = alg.p, alg.d
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if e.is_zero():
        return EvanescenceResult(True, ell, "zero element")
    G = state_graph(e, 4 * depth_cap)
    if G is None:
        return EvanescenceResult(False, ell, "not finite-state within the cap")
    n = G.size
    fwd = _reach(n, G.edges, range(G.n_roots))
    for i in G.der_nodes():
        if i in fwd and any(c for c in G.ders[i].coeffs[1:]):
            return EvanescenceResult(False, ell, f"state {G.states[i]} has a derivation that is not a multiple of D")
    # T_k: states from which a derivation is reached through k top letters
    T = set(i for i in G.der_nodes())
    for _ in range(ell):
        T = {s for s, l, t in G.edges if l == d - 1 and t in T}
    bad = T & fwd
    if bad:
        s = G.states[min(bad)]
        return EvanescenceResult(False, ell, f"state {s} reaches a derivation through {ell} letters x^{d - 1}")
    return EvanescenceResult(True, ell, "the last letters never all reach x^{d-1}")


@dataclass
class NilCertificate:
    ok: bool
    ell: int
    rows: list  # (generator, NormBound, EvanescenceResult)
    reason: str = ""
    conclusion: str = ""

    def to_text(self) -> str:
        lines = [f"ell: {self.ell}"]
        for g, nb, ev in self.rows:
            lines.append(f"generator: {g}")
            lines.append(f"  norm: {nb.value}")
            lines.append(f"  evanescent: {'yes' if ev.ok else 'no'} ({ev.reason})")
        lines.append(f"result: {'certified' if self.ok else 'failed'}")
        if self.ok:
            lines.append(f"conclusion: nil certified ({self.conclusion})")
        else:
            lines.append(f"reason: {self.reason}")
        return "\n".join(lines) + "\n"


def nil_certificate(spec, gens, ell: int, depth_cap: int = 64) -> NilCertificate:
    if spec.d != spec.p:
        return NilCertificate(False, ell, [], "nil certificates need d = p")
    rows = []
    for g in gens:
        nb = bounded_norm(g, depth_cap)
        ev = evanescent(g, ell, depth_cap)
        rows.append((g, nb, ev))
        if not nb.bounded:
            return NilCertificate(False, ell, rows, f"generator {g} is not bounded ({nb.trace[0] if nb.trace else ''})")
        if not ev.ok:
            return NilCertificate(False, ell, rows, f"generator {g} is not {ell}-evanescent: {ev.reason}")
    return NilCertificate(True, ell, rows, conclusion=CERTIFICATE_CITATION)


# ---------------------------------------------------------------------------
# truncated measurements


@dataclass
class NilIndex:
    value: Optional[int]  # least s, or None when the cap is exceeded
    level: int
    s_cap: int

    @property
    def exceeds_cap(self):
        return self.value is None

    def __str__(self):
        return f">{self.s_cap}" if self.value is None else str(self.value)


def nil_index_at_level(e: Element, n: int, s_cap: int = 16, cap: int = TRUNC_CAP) -> NilIndex:
    """Least s >= 1 with truncate(e, n)^{p^s} = 0."""
    p = e.alg.p
    M = truncate(e, n, cap=cap)
    for s in range(1, s_cap + 1):
        M = matpow_mod(M, p, p)
        if not M.any():
            return NilIndex(s, n, s_cap)
    return NilIndex(None, n, s_cap)


def nil_index_coords(e: Element, n: int, s_cap: int = 16) -> NilIndex:
    """Same measurement through W(X)_n coordinates (no d^n x d^n matrices)."""
    alg = e.alg
    W = wlevel(alg.p, alg.d, n)
    v = alg.coords(e, n)
    for s in range(1, s_cap + 1):
        v = W.p_power(v)
        if not v.any():
            return NilIndex(s, n, s_cap)
    return NilIndex(None, n, s_cap)


def in_varpi2(W, v) -> bool:
    """All coordinates of v have prefix degree >= 2."""
    idx = np.nonzero(np.asarray(v) % W.p)[0]
    return all(sum(W.decode(int(i))[1]) >= 2 for i in idx)


def evanescence_power_check(e: Element, level: int, s_cap: int = 8) -> Optional[int]:
    """Least s >= 1 with e^{p^s} in varpi^2 W(X) at the given level, or None."""
    alg = e.alg
    W = wlevel(alg.p, alg.d, level)
    v = alg.coords(e, level)
    for s in range(1, s_cap + 1):
        v = W.p_power(v)
        if in_varpi2(W, v):
            return s
    return None
