"""Self-similar groups in G wr F_p: words, the action on X^*, orders, the matrix
recursion of the group ring, and the Lie algebra L(G) read off the recursion."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Sequence

import numpy as np

from .core import AlgebraSpec, GeneratorSpec, make_generator
from .ground import StructureError, TruncPoly, check_prime

Word = tuple  # ((name, exponent), ...) with exponents in 1..order-1 after reduction


@dataclass(frozen=True)
class GroupGen:
    name: str
    coords: tuple  # one Word per letter of X = F_p
    perm: int  # pi(x) = x + perm


@dataclass(frozen=True)
class GroupSpec:
    name: str
    p: int
    generators: tuple

    def __post_init__(self):
        check_prime(self.p)
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise StructureError("duplicate generator names")
        for g in self.generators:
            if len(g.coords) != self.p:
                raise StructureError(f"generator {g.name} needs {self.p} coordinates")
            for w in g.coords:
                for s, _ in w:
                    if s not in names:
                        raise StructureError(f"generator {g.name} refers to undeclared {s}")

    @property
    def names(self):
        return [g.name for g in self.generators]

    def generator(self, name) -> GroupGen:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(name)


def parse_word(text: str) -> Word:
    """'1', 'a', 'a^-1', 'a*c', 'a c^2'."""
    text = text.strip()
    if text in ("", "1", "e"):
        return ()
    out = []
    for tok in re.split(r"[*\s]+", text):
        if not tok:
            continue
        m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?", tok)
        if not m:
            raise ValueError(f"bad group word token {tok!r}")
        out.append((m.group(1), int(m.group(2) or 1)))
    return tuple(out)


def word_str(w: Word) -> str:
    if not w:
        return "1"
    return "*".join(s if e == 1 else f"{s}^{e}" for s, e in w)


def make_group(name: str, p: int, gens: dict) -> GroupSpec:
    """gens: name -> (list of coordinate words as strings, permutation exponent)."""
    out = []
    for g, (coords, perm) in gens.items():
        out.append(GroupGen(g, tuple(parse_word(c) for c in coords), perm % p))
    return GroupSpec(name, p, tuple(out))


# ---------------------------------------------------------------------------
# elements


class Group:
    """Word arithmetic for a GroupSpec; exponents are reduced modulo generator orders."""

    def __init__(self, spec: GroupSpec, state_cap: int = 20000):
        self.spec = spec
        self.p = spec.p
        self.state_cap = state_cap
        self._gens = {g.name: g for g in spec.generators}
        self._orders: Dict[str, Optional[int]] = {}
        self._psi: dict = {}
        orders = {}
        for g in spec.names:
            rep = _order_search(self, ((g, 1),), reduce=False)
            orders[g] = rep.value
        self._orders = orders

    def gen_order(self, name) -> Optional[int]:
        return self._orders.get(name)

    def reduce(self, w, use_orders: bool = True) -> Word:
        out: list = []
        for s, e in w:
            if out and out[-1][0] == s:
                e += out.pop()[1]
            o = self._orders.get(s) if use_orders else None
            if o:
                e %= o
            if e:
                out.append((s, e))
        return tuple(out)

    def inverse(self, w: Word) -> Word:
        return self.reduce(tuple((s, -e) for s, e in reversed(w)))

    def mul(self, *ws) -> Word:
        return self.reduce(tuple(x for w in ws for x in w))

    def power(self, w: Word, k: int) -> Word:
        if k < 0:
            return self.power(self.inverse(w), -k)
        return self.reduce(tuple(w) * k)

    def psi(self, w: Word, reduce: bool = True):
        """(coordinates, perm) with (gh)_x = g_{h(x)} h_x (left actions)."""
        key = (w, reduce)
        r = self._psi.get(key)
        if r is not None:
            return r
        p = self.p
        coords = [()] * p
        perm = 0
        for s, e in reversed(w):
            g = self._gens[s]
            step = 1 if e > 0 else -1
            for _ in range(abs(e)):
                if step > 0:
                    gc, gp = g.coords, g.perm
                else:
                    # s^{-1}: pi^{-1}, coordinate at y is (s_{pi^{-1}(y)})^{-1}
                    gp = (-g.perm) % p
                    gc = tuple(_inv_word(g.coords[(y - g.perm) % p]) for y in range(p))
                coords = [gc[(x + perm) % p] + coords[x] for x in range(p)]
                perm = (perm + gp) % p
        red = (lambda u: self.reduce(u)) if reduce else (lambda u: self.reduce(u, use_orders=False))
        r = (tuple(red(c) for c in coords), perm)
        self._psi[key] = r
        return r


def _inv_word(w: Word) -> Word:
    return tuple((s, -e) for s, e in reversed(w))


_GROUPS: dict = {}


def group(spec: GroupSpec) -> Group:
    G = _GROUPS.get(spec)
    if G is None:
        G = _GROUPS[spec] = Group(spec)
    return G


@dataclass(frozen=True)
class GroupElement:
    G: Group
    word: Word

    @classmethod
    def of(cls, G: Group, text_or_word) -> "GroupElement":
        w = parse_word(text_or_word) if isinstance(text_or_word, str) else tuple(text_or_word)
        return cls(G, G.reduce(w))

    def __mul__(self, o: "GroupElement") -> "GroupElement":
        return GroupElement(self.G, self.G.mul(self.word, o.word))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.G, self.G.inverse(self.word))

    def __pow__(self, k: int) -> "GroupElement":
        return GroupElement(self.G, self.G.power(self.word, k))

    def is_identity_word(self) -> bool:
        return not self.word

    def __str__(self):
        return word_str(self.word)


def element(spec: GroupSpec, text) -> GroupElement:
    return GroupElement.of(group(spec), text)


# ---------------------------------------------------------------------------
# action


def act_word(g, w: Sequence[int]) -> tuple:
    """g(x_1 x_2 ... x_n) = pi(x_1) g_{x_1}(x_2 ... x_n)."""
    G, word = g.G, g.word
    out = []
    cur = word
    for x in w:
        coords, perm = G.psi(cur)
        out.append((x + perm) % G.p)
        cur = coords[x]
        if not cur:
            out.extend(w[len(out):])
            break
    return tuple(out)


def acts_trivially(g, depth: int) -> bool:
    """Whether g fixes every word of length <= depth."""
    G = g.G
    seen = {}

    def rec(w, k):
        if not w or k == 0:
            return True
        key = (w, k)
        if key in seen:
            return seen[key]
        coords, perm = G.psi(w)
        r = perm == 0 and all(rec(c, k - 1) for c in coords)
        seen[key] = r
        return r

    return rec(g.word, depth)


# ---------------------------------------------------------------------------
# orders


@dataclass
class OrderReport:
    value: Optional[int]  # the order, or None
    lower_bound: int = 1
    reason: str = ""
    infinite: bool = False

    @property
    def finite(self):
        return self.value is not None

    def __str__(self):
        if self.value is not None:
            return str(self.value)
        if self.infinite:
            return "infinite"
        return f">= {self.lower_bound} ({self.reason})"


def _order_search(G: Group, w: Word, reduce: bool = True, cap: Optional[int] = None) -> OrderReport:
    """Order through the state graph g -> g_x (perm 0) or g -> (g^p)_0 with factor p.

    The order is the least fixed point of o(g) = factor(g) * lcm(o(children)); a cycle
    through a factor-p edge means infinite order."""
    p = G.p
    cap = cap or G.state_cap
    red = (lambda u: G.reduce(u)) if reduce else (lambda u: G.reduce(u, use_orders=False))
    start = red(w)
    if not start:
        return OrderReport(1)
    factor, children = {}, {}
    order = [start]
    k = 0
    while k < len(order):
        g = order[k]
        k += 1
        if not g:
            factor[g], children[g] = 1, []
            continue
        coords, perm = G.psi(g, reduce)
        if perm == 0:
            factor[g], kids = 1, list(coords)
        else:
            gp = red(tuple(g) * p)
            cp, pp = G.psi(gp, reduce)
            factor[g], kids = p, [cp[0]]
        kids = [c for c in dict.fromkeys(kids)]
        children[g] = kids
        for c in kids:
            if c not in factor and c not in order[k:]:
                order.append(c)
                if len(order) > cap:
                    return OrderReport(None, p, f"state cap {cap} exceeded")
    # cycles through factor-p nodes
    for g in order:
        if factor.get(g, 1) > 1 and _reaches(children, g, g):
            return OrderReport(None, p, f"the recursion of {word_str(g)} returns to itself through a p-th power", True)
    o = {g: 1 for g in order}
    for _ in range(len(order) + 2):
        changed = False
        for g in reversed(order):
            v = factor[g]
            l = 1
            for c in children[g]:
                l = l * o[c] // math.gcd(l, o[c])
            v *= l
            if v != o[g]:
                o[g], changed = v, True
        if not changed:
            break
    return OrderReport(o[start], o[start])


def _reaches(children, src, dst) -> bool:
    stack, seen = list(children[src]), set()
    while stack:
        u = stack.pop()
        if u == dst:
            return True
        if u in seen:
            continue
        seen.add(u)
        stack.extend(children.get(u, ()))
    return False


def element_order(g, cap: int = 20000) -> OrderReport:
    return _order_search(g.G, g.word, cap=cap)


# ---------------------------------------------------------------------------
# matrix recursion of the group ring


def group_matrix_recursion(g):
    """p x p table of words: entry (pi(x), x) holds g_x (column convention), so that
    the recursion of gh is the matrix product of the recursions of g and h."""
    G = g.G
    p = G.p
    coords, perm = G.psi(g.word)
    M = [[None] * p for _ in range(p)]
    for x in range(p):
        M[(x + perm) % p][x] = coords[x]
    return M


def word_matrix_product(G: Group, M, N):
    """Product of two monomial word matrices (None = 0)."""
    p = len(M)
    out = [[None] * p for _ in range(p)]
    for r in range(p):
        for c in range(p):
            for k in range(p):
                if M[r][k] is not None and N[k][c] is not None:
                    if out[r][c] is not None:
                        raise StructureError("not a monomial matrix")
                    out[r][c] = G.mul(M[r][k], N[k][c])
    return out


# ---------------------------------------------------------------------------
# group -> Lie algebra


def _poly_mul_list(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def _basis_poly(p: int, i: int) -> list:
    """x^i (x+1)^(p-1-i) as a coefficient list of length p."""
    f = [0] * i + [1]
    for _ in range(p - 1 - i):
        f = _poly_mul_list(f, [1, 1], p)
    return (f + [0] * p)[:p]


def group_lie_polys(gspec: GroupSpec, names: Optional[Sequence[str]] = None) -> dict:
    """name -> ({target: f_target coefficient list}, perm) before taking leading monomials."""
    p = gspec.p
    S = list(names) if names is not None else gspec.names
    out = {}
    for nm in S:
        g = gspec.generator(nm)
        fs: Dict[str, list] = {}
        for i, w in enumerate(g.coords):
            if not w:
                continue
            letters = {s for s, _ in w}
            if len(letters) != 1 or next(iter(letters)) not in S:
                raise StructureError(f"coordinate {word_str(w)} of {nm} is not a power of an element of {S}")
            s = next(iter(letters))
            n_i = sum(e for _, e in w) % p
            if n_i == 0:
                continue
            f = fs.setdefault(s, [0] * p)
            b = _basis_poly(p, i)
            for k in range(p):
                f[k] = (f[k] + n_i * b[k]) % p
        out[nm] = ({s: f for s, f in fs.items() if any(f)}, g.perm)
    return out


def leading_monomial(f: Sequence[int]):
    """(degree, coefficient) of the highest nonzero term."""
    for k in range(len(f) - 1, -1, -1):
        if f[k]:
            return k, f[k]
    return None


def lie_from_group(gspec: GroupSpec, names: Optional[Sequence[str]] = None, name: Optional[str] = None,
                   restricted: bool = False, grading: bool = True,
                   lambda_minpoly: Optional[Sequence[int]] = None) -> AlgebraSpec:
    """The graded self-similar Lie algebra L(G) on X = F_p[x]/(x^p)."""
    p = gspec.p
    polys = group_lie_polys(gspec, names)
    gens_raw = {}
    for nm, (fs, perm) in polys.items():
        terms = []
        for s in sorted(fs):
            lm = leading_monomial(fs[s])
            terms.append((lm[0], s, lm[1]))
        gens_raw[nm] = (terms, perm)
    degrees, minpoly, interval = (None, None, None)
    if grading:
        degrees, minpoly, interval = solve_grading(gens_raw, p, lambda_minpoly)
    gens = []
    for nm, (terms, perm) in gens_raw.items():
        tl = [(_mono_list(p, k), {s: c}) for k, s, c in terms]
        gens.append(make_generator(p, p, nm, terms=tl, der=[perm] if perm else None,
                                   degree=degrees[nm] if degrees else None))
    return AlgebraSpec(name or f"L({gspec.name})", p, p, tuple(gens), restricted=restricted,
                       lambda_minpoly=minpoly, lambda_interval=interval)


def _mono_list(p, k):
    f = [0] * p
    f[k] = 1
    return f


# exact grading solve over Q[lambda]


def _pnorm(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _padd(a, b):
    n = max(len(a), len(b))
    return _pnorm([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _pscale(a, c):
    return _pnorm([c * x for x in a])


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _pnorm(out)


def _pdivmod(a, b):
    a = [Fraction(x) for x in _pnorm(a)]
    b = [Fraction(x) for x in _pnorm(b)]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] -= c * y
        a = _pnorm(a)
    return _pnorm(q), a


def _pgcd(a, b):
    a, b = _pnorm(a), _pnorm(b)
    while b:
        a, b = b, _pdivmod(a, b)[1]
    if a:
        a = [x / a[-1] for x in a]
    return a


def solve_grading(gens_raw: dict, p: int, minpoly: Optional[Sequence[int]] = None):
    """Degrees deg(s) in Z[lambda] with deg(s) = lambda*deg(s_i) - k for every term
    x^k (x) s_i and deg(s) = 1 when s carries a multiple of D.

    Returns (degrees, minpoly constant-first, root interval) or raises StructureError."""
    deg: Dict[str, list] = {}
    for nm, (terms, perm) in gens_raw.items():
        if perm:
            deg[nm] = [Fraction(1)]
    if not deg:
        raise StructureError("no generator carries a derivation; no grading anchor")
    changed = True
    while changed:
        changed = False
        for nm, (terms, perm) in gens_raw.items():
            if nm in deg:
                continue
            for k, s, _ in terms:
                if s in deg:
                    deg[nm] = _padd(_pmul([Fraction(0), Fraction(1)], deg[s]), [Fraction(-k)])
                    changed = True
                    break
    missing = [nm for nm in gens_raw if nm not in deg]
    if missing:
        raise StructureError(f"cannot grade generators {missing}")
    cons = []
    for nm, (terms, perm) in gens_raw.items():
        if perm:
            cons.append(_padd(deg[nm], [Fraction(-1)]))
        for k, s, _ in terms:
            cons.append(_padd(deg[nm], _pscale(_padd(_pmul([Fraction(0), Fraction(1)], deg[s]), [Fraction(-k)]), -1)))
    g = []
    for c in cons:
        if c:
            g = _pgcd(g, c) if g else [x / c[-1] for x in c]
    if minpoly is not None:
        given = [Fraction(x) for x in minpoly]
        if g and _pdivmod(g, given)[1] and _pdivmod(given, g)[1]:
            raise StructureError("the given dilation polynomial is incompatible with the recursion")
        g = [x / given[-1] for x in given]
    if not g:
        raise StructureError("the dilation is not determined by the recursion; pass lambda_minpoly")
    roots = [r.real for r in np.roots([float(x) for x in reversed(g)]) if abs(r.imag) < 1e-9 and r.real > 1 + 1e-9]
    if not roots:
        raise StructureError("no dilation > 1 is compatible with the recursion")
    lam = max(roots)
    if abs(round(lam) - lam) < 1e-9 and _is_root(g, round(lam)):
        minpoly = [Fraction(-round(lam)), Fraction(1)]
    else:
        # drop integer roots; lam is irrational here
        minpoly = g
        for r in range(-64, 65):
            while len(minpoly) > 2 and _is_root(minpoly, r):
                minpoly = _pdivmod(minpoly, [Fraction(-r), Fraction(1)])[0]
    den = 1
    for x in minpoly:
        den = den * x.denominator // math.gcd(den, x.denominator)
    mp = tuple(int(x * den) for x in minpoly)
    others = [abs(r - lam) for r in np.roots([float(x) for x in reversed(minpoly)]) if abs(r - lam) > 1e-9]
    delta = min([0.25] + [o / 3 for o in others])
    degrees = {}
    for nm, poly in deg.items():
        r = _pdivmod(poly, minpoly)[1]
        if any(x.denominator != 1 for x in r):
            raise StructureError(f"degree of {nm} is not integral")
        degrees[nm] = tuple(int(x) for x in r) or (0,)
    return degrees, mp, (lam - delta, lam + delta)


def _is_root(poly, r) -> bool:
    return sum(c * r**i for i, c in enumerate(poly)) == 0


# ---------------------------------------------------------------------------
# structural comparison


def _structure(spec: AlgebraSpec) -> dict:
    p = spec.p
    out = {}
    for g in spec.generators:
        acc: Dict[str, np.ndarray] = {}
        for poly, targets in g.psi:
            for s, c in targets:
                v = acc.setdefault(s, np.zeros(spec.d, dtype=np.int64))
                acc[s] = (v + c * np.asarray(poly.coeffs, dtype=np.int64)) % p
        psi = {s: tuple(int(x) for x in v) for s, v in acc.items() if v.any()}
        der = tuple(int(x) % p for x in g.der.coeffs) if g.der is not None else (0,) * spec.d
        out[g.name] = (psi, der)
    return out


def same_structure(spec1: AlgebraSpec, spec2: AlgebraSpec, rename: Optional[dict] = None) -> bool:
    """Generator-wise equality of the recursions (exact coefficients), after renaming
    generators of spec1 by `rename`."""
    if (spec1.p, spec1.d) != (spec2.p, spec2.d):
        return False
    rename = rename or {}
    a = _structure(spec1)
    b = _structure(spec2)
    a = {rename.get(k, k): ({rename.get(s, s): f for s, f in psi.items()}, der) for k, (psi, der) in a.items()}
    if set(a) != set(b):
        raise StructureError(f"unmatched generators: {sorted(set(a) ^ set(b))}")
    return all(a[k] == b[k] for k in a)


# ---------------------------------------------------------------------------
# the groups of the catalog


def grigorchuk_group() -> GroupSpec:
    return make_group("grigorchuk_group", 2, {
        "a": (["1", "1"], 1),
        "b": (["a", "c"], 0),
        "c": (["a", "d"], 0),
        "d": (["1", "b"], 0),
    })


def gupta_sidki_group() -> GroupSpec:
    return make_group("gupta_sidki_group", 3, {
        "a": (["1", "1", "1"], 1),
        "t": (["a", "a^-1", "t"], 0),
    })


def kaloujnine_group(p: int, depth: int = 6) -> GroupSpec:
    """tau_0 = ((1,..,1), 1), tau_k = ((1,..,1,tau_{k-1}), 0): generators of W_p at finite depth."""
    gens = {"tau0": (["1"] * p, 1)}
    for k in range(1, depth):
        gens[f"tau{k}"] = (["1"] * (p - 1) + [f"tau{k - 1}"], 0)
    return make_group(f"kaloujnine_group_{p}", p, gens)
