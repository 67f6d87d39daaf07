"""Self-similar Lie algebras: specs, interned elements, the expansion psi, brackets,
p-th powers, the natural action, truncations and gradings."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Sequence

import numpy as np

from .ground import (
    Degree,
    DegreeRing,
    ResourceError,
    SpecialDerivation,
    StructureError,
    TruncPoly,
    check_prime,
    companion_matrix,
    inv_mod,
    matmul_mod,
    matpow_mod,
)
from .wtensor import level as wlevel

TRUNC_CAP = 3**8  # largest d^n for dense truncation matrices
WORK_DIM = 1200  # working level for element spans: largest n with dim W(X)_n below this


class RestrictedError(ValueError):
    """p-th powers requested on an unrestricted algebra."""


# ---------------------------------------------------------------------------
# specs


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    # tuple of (TruncPoly, ((generator name, coefficient), ...))
    psi: tuple = ()
    der: Optional[TruncPoly] = None
    degree: Optional[tuple] = None  # lambda-polynomial, constant first


@dataclass(frozen=True)
class AlgebraSpec:
    name: str
    p: int
    d: int
    generators: tuple
    restricted: bool = False
    lambda_minpoly: Optional[tuple] = None
    lambda_interval: Optional[tuple] = None
    active: Optional[tuple] = None  # generators of the algebra; the others are states only
    family: tuple = ()  # (state name, shift position) for non-self-similar chains

    def __post_init__(self):
        check_prime(self.p)
        d = self.d
        k = d
        while k > 1 and k % self.p == 0:
            k //= self.p
        if k != 1:
            raise StructureError(f"d={d} must be a power of p={self.p} for D to be a derivation")
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise StructureError("duplicate generator names")
        for g in self.generators:
            for poly, combo in g.psi:
                if (poly.p, poly.d) != (self.p, self.d):
                    raise StructureError(f"generator {g.name}: coefficient over wrong alphabet")
                for n, _ in combo:
                    if n not in names:
                        raise StructureError(f"generator {g.name} references undeclared generator {n!r}")
        for n in self.active or ():
            if n not in names:
                raise StructureError(f"active generator {n!r} is undeclared")

    @property
    def names(self):
        return tuple(g.name for g in self.generators)

    @property
    def active_names(self):
        return tuple(self.active) if self.active else self.names

    def generator(self, name: str) -> GeneratorSpec:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(f"undeclared generator {name!r}")

    @property
    def graded(self) -> bool:
        return self.lambda_minpoly is not None and all(g.degree is not None for g in self.generators)

    def degree_ring(self) -> Optional[DegreeRing]:
        if self.lambda_minpoly is None:
            return None
        return _degree_ring(self.lambda_minpoly, self.lambda_interval or (1.0, float(self.d * self.p + 1)))


_RINGS: dict = {}


def _degree_ring(mp, interval):
    key = (tuple(mp), tuple(interval))
    if key not in _RINGS:
        _RINGS[key] = DegreeRing(mp, interval)
    return _RINGS[key]


def make_generator(p: int, d: int, name: str, terms=(), der=None, degree=None) -> GeneratorSpec:
    """Convenience builder. terms: iterable of (poly coefficient list, {name: coeff} or name)."""
    psi = []
    for poly, target in terms:
        tp = poly if isinstance(poly, TruncPoly) else TruncPoly.from_list(p, d, poly)
        if isinstance(target, str):
            target = {target: 1}
        combo = tuple(sorted((n, c % p) for n, c in dict(target).items() if c % p))
        psi.append((tp, combo))
    dr = None
    if der is not None:
        dr = der if isinstance(der, TruncPoly) else TruncPoly.from_list(p, d, der)
    return GeneratorSpec(name, tuple(psi), dr, tuple(degree) if degree is not None else None)


# ---------------------------------------------------------------------------
# atoms and elements


class Atom:
    __slots__ = ("alg", "kind", "args", "key", "uid")

    def __init__(self, alg, kind, args, key, uid):
        self.alg, self.kind, self.args, self.key, self.uid = alg, kind, args, key, uid

    def __repr__(self):
        return self.key

    def __lt__(self, o):
        return self.key < o.key


class Element:
    """A finite F_p-combination of interned atoms."""

    __slots__ = ("alg", "terms", "_hash")

    def __init__(self, alg, terms):
        p = alg.p
        acc: Dict[Atom, int] = {}
        for a, c in terms:
            c %= p
            if c:
                acc[a] = (acc.get(a, 0) + c) % p
        self.alg = alg
        self.terms = tuple(sorted(((a, c) for a, c in acc.items() if c), key=lambda t: t[0].key))
        self._hash = None

    # arithmetic
    def __add__(self, o: "Element") -> "Element":
        self._same(o)
        return Element(self.alg, self.terms + o.terms)

    def __sub__(self, o: "Element") -> "Element":
        self._same(o)
        return Element(self.alg, self.terms + tuple((a, -c) for a, c in o.terms))

    def __neg__(self):
        return Element(self.alg, tuple((a, -c) for a, c in self.terms))

    def __mul__(self, c: int) -> "Element":
        return Element(self.alg, tuple((a, c * v) for a, v in self.terms))

    __rmul__ = __mul__

    def _same(self, o):
        if not isinstance(o, Element) or o.alg is not self.alg:
            raise StructureError("elements of different algebras")

    def is_zero(self) -> bool:
        """Syntactic zero; use equal_to_level for semantic comparisons."""
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, o):
        return isinstance(o, Element) and o.alg is self.alg and o.key == self.key

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key)
        return self._hash

    @property
    def key(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for a, c in self.terms:
            parts.append(a.key if c == 1 else f"{c}*{a.key}")
        return " + ".join(parts)

    def __str__(self):
        return self.key

    __repr__ = __str__

    def atoms(self):
        return [a for a, _ in self.terms]

    # structure
    def bracket(self, o: "Element") -> "Element":
        return bracket(self, o)

    def p_power(self) -> "Element":
        return p_power(self)

    def expand(self) -> "Expansion":
        return expand(self)


@dataclass(frozen=True)
class Expansion:
    """psi(a) = sum_i x^i (x) coeffs[i] + der*D."""

    alg: object
    coeffs: tuple
    der: TruncPoly

    @classmethod
    def zero(cls, alg) -> "Expansion":
        z = alg.zero()
        return cls(alg, (z,) * alg.d, TruncPoly.zero(alg.p, alg.d))

    def __add__(self, o: "Expansion") -> "Expansion":
        return Expansion(self.alg, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)), self.der + o.der)

    def __sub__(self, o):
        return self + o.scale(-1)

    def scale(self, c: int) -> "Expansion":
        return Expansion(self.alg, tuple(a * c for a in self.coeffs), self.der.scale(c))

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.coeffs) and self.der.is_zero()

    def bracket(self, o: "Expansion") -> "Expansion":
        alg = self.alg
        d, p = alg.d, alg.p
        out = [[] for _ in range(d)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(o.coeffs):
                if b.is_zero() or i + j >= d:
                    continue
                out[i + j].append(bracket(a, b))
        delta, eps = SpecialDerivation(self.der), SpecialDerivation(o.der)
        for j, b in enumerate(o.coeffs):
            if b.is_zero() or delta.is_zero():
                continue
            for k, c in delta(TruncPoly.monomial(p, d, j)).terms():
                out[k].append(b * c)
        for i, a in enumerate(self.coeffs):
            if a.is_zero() or eps.is_zero():
                continue
            for k, c in eps(TruncPoly.monomial(p, d, i)).terms():
                out[k].append(a * (-c))
        coeffs = tuple(_sum(alg, parts) for parts in out)
        return Expansion(alg, coeffs, delta.bracket(eps).coeff)

    def summands(self):
        alg = self.alg
        z = alg.zero()
        out = []
        for i, a in enumerate(self.coeffs):
            if not a.is_zero():
                cs = [z] * alg.d
                cs[i] = a
                out.append(Expansion(alg, tuple(cs), TruncPoly.zero(alg.p, alg.d)))
        if not self.der.is_zero():
            out.append(Expansion(alg, (z,) * alg.d, self.der))
        return out

    def p_power(self) -> "Expansion":
        """Restricted p-th power in X (x) L + Der X."""
        alg = self.alg
        parts = self.summands()
        if not parts:
            return self

        def base(s: Expansion) -> Expansion:
            if not s.der.is_zero():
                return Expansion(alg, (alg.zero(),) * alg.d, SpecialDerivation(s.der).p_power().coeff)
            i = next(k for k, a in enumerate(s.coeffs) if not a.is_zero())
            cs = [alg.zero()] * alg.d
            if i * alg.p < alg.d:
                cs[i * alg.p] = p_power(s.coeffs[i])
            return Expansion(alg, tuple(cs), TruncPoly.zero(alg.p, alg.d))

        return _jacobson_power(parts, base, lambda u, v: u.bracket(v), alg.p)

    def pairs(self):
        """(TruncPoly, Element) pairs merged by atom, in key order."""
        alg = self.alg
        by_atom: dict = {}
        for i, a in enumerate(self.coeffs):
            for atom, c in a.terms:
                cs = by_atom.setdefault(atom, [0] * alg.d)
                cs[i] = (cs[i] + c) % alg.p
        out = []
        for atom in sorted(by_atom, key=lambda t: t.key):
            out.append((TruncPoly(alg.p, alg.d, tuple(by_atom[atom])), Element(alg, ((atom, 1),))))
        return out

    def __str__(self):
        parts = []
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            parts.append(f"{mono}#({a})")
        if not self.der.is_zero():
            parts.append(f"({self.der})*D")
        return " + ".join(parts) if parts else "0"


def _sum(alg, parts):
    terms = []
    for e in parts:
        terms.extend(e.terms)
    return Element(alg, tuple(terms))


def _jacobson_terms(a, b, p, br, add, scale):
    """sum_{i=1}^{p-1} s_i(a, b) where i*s_i is the T^{i-1} coefficient of ad(Ta+b)^{p-1}(a)."""
    poly = [a]
    for _ in range(p - 1):
        new = [None] * (len(poly) + 1)
        for k, c in enumerate(poly):
            if c is None:
                continue
            t = br(b, c)
            new[k] = t if new[k] is None else add(new[k], t)
            u = br(a, c)
            new[k + 1] = u if new[k + 1] is None else add(new[k + 1], u)
        poly = new
    total = None
    for i in range(1, p):
        c = poly[i - 1]
        if c is None:
            continue
        s = scale(c, inv_mod(i, p))
        total = s if total is None else add(total, s)
    return total


def _jacobson_power(parts, base, br, p):
    """(sum of parts)^[p] from the p-th powers of the parts."""
    acc = parts[0]
    acc_pow = base(parts[0])
    for s in parts[1:]:
        extra = _jacobson_terms(acc, s, p, br, lambda u, v: u + v, lambda u, c: u.scale(c) if hasattr(u, "scale") else u * c)
        acc_pow = acc_pow + base(s)
        if extra is not None:
            acc_pow = acc_pow + extra
        acc = acc + s
    return acc_pow


# ---------------------------------------------------------------------------
# the algebra context


class SelfSimilarAlgebra:
    """Interning table, memoized expansions, coordinates and truncations for one spec."""

    def __init__(self, spec: AlgebraSpec):
        self.spec = spec
        self.p, self.d = spec.p, spec.d
        self._atoms: Dict[str, Atom] = {}
        self._expansions: Dict[Atom, Expansion] = {}
        self._coords: dict = {}
        self._trunc: dict = {}
        self._act: dict = {}
        self._zero = Element(self, ())
        self._gen_psi = {}
        self.nucleus_cache = None

    def __repr__(self):
        return f"SelfSimilarAlgebra({self.spec.name})"

    # construction
    def _intern(self, kind, args, key) -> Atom:
        a = self._atoms.get(key)
        if a is None:
            a = Atom(self, kind, args, key, len(self._atoms))
            self._atoms[key] = a
        return a

    def zero(self) -> Element:
        return self._zero

    def gen(self, name: str) -> Element:
        self.spec.generator(name)
        return Element(self, ((self._intern("gen", (name,), name), 1),))

    def gens(self):
        return [self.gen(n) for n in self.spec.active_names]

    def __getitem__(self, name):
        return self.gen(name)

    def tensor(self, i: int, e: Element) -> Element:
        """x^i (x) e as an element of W(X)."""
        if i >= self.d or e.is_zero():
            return self._zero
        key = f"x^{i}#({e.key})"
        return Element(self, ((self._intern("tensor", (i, e), key), 1),))

    def tensor_word(self, exps: Sequence[int], e: Element) -> Element:
        """x^{e_1} (x) ... (x) x^{e_k} (x) e."""
        out = e
        for i in reversed(list(exps)):
            out = self.tensor(i, out)
        return out

    def der(self, coeffs) -> Element:
        poly = coeffs if isinstance(coeffs, TruncPoly) else TruncPoly.from_list(self.p, self.d, coeffs)
        if poly.is_zero():
            return self._zero
        key = "D(" + ",".join(str(c) for c in poly.coeffs) + ")"
        return Element(self, ((self._intern("der", (poly,), key), 1),))

    def element(self, text: str) -> Element:
        return parse_element(self, text)

    # expansions
    def expansion_of_atom(self, a: Atom) -> Expansion:
        ex = self._expansions.get(a)
        if ex is not None:
            return ex
        p, d = self.p, self.d
        if a.kind == "gen":
            g = self.spec.generator(a.args[0])
            coeffs = [[] for _ in range(d)]
            for poly, combo in g.psi:
                target = Element(self, tuple((self._intern("gen", (n,), n), c) for n, c in combo))
                for i, c in poly.terms():
                    coeffs[i].append(target * c)
            der = g.der if g.der is not None else TruncPoly.zero(p, d)
            ex = Expansion(self, tuple(_sum(self, c) for c in coeffs), der)
        elif a.kind == "br":
            A, B = a.args
            ex = self.expansion_of_atom(A).bracket(self.expansion_of_atom(B))
        elif a.kind == "pow":
            ex = self.expansion_of_atom(a.args[0]).p_power()
        elif a.kind == "tensor":
            i, e = a.args
            cs = [self._zero] * d
            cs[i] = e
            ex = Expansion(self, tuple(cs), TruncPoly.zero(p, d))
        elif a.kind == "der":
            ex = Expansion(self, (self._zero,) * d, a.args[0])
        else:  # pragma: no cover
            raise AssertionError(a.kind)
        self._expansions[a] = ex
        return ex

    # coordinates in W(X)_n
    def coords(self, e: Element, n: int, route: str = "recursion") -> np.ndarray:
        W = wlevel(self.p, self.d, n)
        out = W.zero()
        for a, c in e.terms:
            out = (out + c * self.atom_coords(a, n, route)) % self.p
        return out

    def atom_coords(self, a: Atom, n: int, route: str = "recursion") -> np.ndarray:
        key = (a, n, route)
        v = self._coords.get(key)
        if v is not None:
            return v
        W = wlevel(self.p, self.d, n)
        if n == 0:
            v = W.zero()
        elif route == "direct" and a.kind == "br":
            v = W.bracket(self.atom_coords(a.args[0], n, route), self.atom_coords(a.args[1], n, route))
        elif route == "direct" and a.kind == "pow":
            v = W.p_power(self.atom_coords(a.args[0], n, route))
        else:
            ex = self.expansion_of_atom(a)
            v = W.der_vec(ex.der.coeffs)
            for i, ci in enumerate(ex.coeffs):
                if ci.is_zero():
                    continue
                v = (v + W.embed_child(self.coords(ci, n - 1, route), i)) % self.p
        v.setflags(write=False)
        self._coords[key] = v
        return v

    # truncations
    def truncate(self, e: Element, n: int, route: str = "default", cap: int = TRUNC_CAP) -> np.ndarray:
        if n < 0:
            raise ValueError("level must be >= 0")
        size = self.d**n
        if size > cap:
            raise ResourceError(f"truncation at level {n} needs {size}x{size} matrices; cap is d^n <= {cap}")
        out = np.zeros((size, size), dtype=np.int64)
        for a, c in e.terms:
            out = (out + c * self.atom_truncate(a, n, route, cap)) % self.p
        return out

    def atom_truncate(self, a: Atom, n: int, route: str = "default", cap: int = TRUNC_CAP) -> np.ndarray:
        key = (a, n, route)
        M = self._trunc.get(key)
        if M is not None:
            return M
        p, d = self.p, self.d
        if n == 0:
            M = np.zeros((1, 1), dtype=np.int64)
        elif route == "default" and a.kind == "br":
            A = self.atom_truncate(a.args[0], n, route, cap)
            B = self.atom_truncate(a.args[1], n, route, cap)
            M = (matmul_mod(A, B, p) - matmul_mod(B, A, p)) % p
        elif route == "default" and a.kind == "pow":
            M = matpow_mod(self.atom_truncate(a.args[0], n, route, cap), p, p)
        else:
            ex = self.expansion_of_atom(a)
            M = np.kron(companion_matrix(SpecialDerivation(ex.der)), np.eye(d ** (n - 1), dtype=np.int64))
            for i, ci in enumerate(ex.coeffs):
                if ci.is_zero():
                    continue
                M = M + np.kron(companion_matrix(TruncPoly.monomial(p, d, i)), self.truncate(ci, n - 1, route, cap))
            M %= p
        M.setflags(write=False)
        if d**n <= 729:
            self._trunc[key] = M
        return M

    # natural action on basis tensors
    def act(self, e: Element, v: Sequence[int]) -> np.ndarray:
        out = np.zeros(self.d ** len(v), dtype=np.int64)
        for a, c in e.terms:
            out = (out + c * self._act_atom(a, tuple(v))) % self.p
        return out

    def _act_atom(self, a: Atom, v: tuple) -> np.ndarray:
        key = (a, v)
        r = self._act.get(key)
        if r is not None:
            return r
        d, p = self.d, self.p
        n = len(v)
        out = np.zeros((d, d ** (n - 1)) if n else (1,), dtype=np.int64)
        if n:
            j, rest = v[0], v[1:]
            ex = self.expansion_of_atom(a)
            for i, ci in enumerate(ex.coeffs):
                if ci.is_zero() or i + j >= d:
                    continue
                out[i + j] += self.act(ci, rest)
            if not ex.der.is_zero():
                img = SpecialDerivation(ex.der)(TruncPoly.monomial(p, d, j))
                ridx = _tensor_index(rest, d)
                for k, c in img.terms():
                    out[k, ridx] += c
            out = out.reshape(-1) % p
        out.setflags(write=False)
        self._act[key] = out
        return out

    # working level for spans
    def work_level(self) -> int:
        n = 1
        while wlevel_dim(self.d, n + 1) <= WORK_DIM:
            n += 1
        return n


def wlevel_dim(d: int, n: int) -> int:
    return d * (d**n - 1) // (d - 1) if d > 1 else n


def _tensor_index(v: Sequence[int], d: int) -> int:
    idx = 0
    for e in v:
        idx = idx * d + int(e)
    return idx


_ALGEBRAS: Dict[AlgebraSpec, SelfSimilarAlgebra] = {}


def algebra(spec: AlgebraSpec) -> SelfSimilarAlgebra:
    alg = _ALGEBRAS.get(spec)
    if alg is None:
        alg = SelfSimilarAlgebra(spec)
        _ALGEBRAS[spec] = alg
    return alg


# ---------------------------------------------------------------------------
# operations


def expand(e: Element) -> Expansion:
    alg = e.alg
    out = Expansion.zero(alg)
    for a, c in e.terms:
        out = out + alg.expansion_of_atom(a).scale(c)
    return out


def _bracket_atoms(A: Atom, B: Atom) -> Element:
    alg = A.alg
    if A is B:
        return alg.zero()
    if B.key < A.key:
        return -_bracket_atoms(B, A)
    key = f"[{A.key},{B.key}]"
    return Element(alg, ((alg._intern("br", (A, B), key), 1),))


def bracket(e: Element, f: Element) -> Element:
    e._same(f)
    terms = []
    for A, a in e.terms:
        for B, b in f.terms:
            for atom, c in _bracket_atoms(A, B).terms:
                terms.append((atom, a * b * c))
    return Element(e.alg, tuple(terms))


def p_power(e: Element) -> Element:
    alg = e.alg
    if not alg.spec.restricted:
        raise RestrictedError(f"algebra {alg.spec.name} is not restricted")
    if e.is_zero():
        return e
    p = alg.p
    if len(e.terms) == 1:
        A, c = e.terms[0]
        cp = pow(c, p, p)
        if A.kind == "der":
            return alg.der(SpecialDerivation(A.args[0]).p_power().coeff) * cp
        if A.kind == "tensor":
            i, sub = A.args
            if i * p >= alg.d:
                return alg.zero()
            return alg.tensor(i * p, p_power(sub)) * cp
        key = f"({A.key})^[{p}]"
        return Element(alg, ((alg._intern("pow", (A,), key), cp),))
    parts = [Element(alg, (t,)) for t in e.terms]
    return _jacobson_power(parts, p_power, bracket, p)


def truncate(e: Element, n: int, route: str = "default", cap: int = TRUNC_CAP) -> np.ndarray:
    return e.alg.truncate(e, n, route, cap)


def act(e: Element, v: Sequence[int]) -> np.ndarray:
    return e.alg.act(e, v)


def equal_to_level(e: Element, f: Element, n: int) -> bool:
    """Exact comparison of the images in Der(X^{(x)n}) through their W(X)_n coordinates."""
    e._same(f)
    return not e.alg.coords(e - f, n).any()


def is_zero_to_level(e: Element, n: int) -> bool:
    return not e.alg.coords(e, n).any()


# ---------------------------------------------------------------------------
# spans of elements


class ElementSpan:
    """A subspace of the algebra, with independence decided at a fixed working level."""

    def __init__(self, alg: SelfSimilarAlgebra, level: Optional[int] = None, elements: Iterable[Element] = ()):
        from .ground import EchelonBuilder

        self.alg = alg
        self.level = level if level is not None else alg.work_level()
        self._W = wlevel(alg.p, alg.d, self.level)
        self._builder = EchelonBuilder(self._W.dim, alg.p)
        self.basis: list = []
        for e in elements:
            self.add(e)

    def vector(self, e: Element) -> np.ndarray:
        return self.alg.coords(e, self.level)

    def add(self, e: Element) -> bool:
        if self._builder.add(self.vector(e)):
            self.basis.append(e)
            return True
        return False

    def contains(self, e: Element) -> bool:
        return self._builder.contains(self.vector(e))

    def contains_span(self, o: "ElementSpan") -> bool:
        return all(self.contains(e) for e in o.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def copy(self) -> "ElementSpan":
        return ElementSpan(self.alg, self.level, self.basis)

    def __add__(self, o: "ElementSpan") -> "ElementSpan":
        s = self.copy()
        for e in o.basis:
            s.add(e)
        return s

    def same_as(self, o: "ElementSpan") -> bool:
        return self.dim == o.dim and self.contains_span(o)

    def signature(self):
        return tuple(tuple(int(x) for x in row) for row in self._builder.R)

    def __repr__(self):
        return "span{" + ", ".join(str(e) for e in self.basis) + "}"


def span(alg, elements, level=None) -> ElementSpan:
    return ElementSpan(alg, level, elements)


def psi_hat(V: ElementSpan) -> ElementSpan:
    out = ElementSpan(V.alg, V.level)
    for e in V.basis:
        for c in expand(e).coeffs:
            if not c.is_zero():
                out.add(c)
    return out


def finite_state(e: Element, dim_cap: int = 64, level: Optional[int] = None):
    """Basis of sum_n psi_hat^n(k e), or None on overflow."""
    S = ElementSpan(e.alg, level, [e])
    frontier = list(S.basis)
    while frontier:
        new = []
        for b in frontier:
            for c in expand(b).coeffs:
                if not c.is_zero() and S.add(c):
                    new.append(c)
                    if S.dim > dim_cap:
                        return None
        frontier = new
    return S


# ---------------------------------------------------------------------------
# gradings


def atom_degree(a: Atom) -> Optional[Degree]:
    alg = a.alg
    spec = alg.spec
    ring = spec.degree_ring()
    if ring is None:
        return None
    if a.kind == "gen":
        g = spec.generator(a.args[0])
        return ring.degree(g.degree) if g.degree is not None else None
    if a.kind == "br":
        x, y = atom_degree(a.args[0]), atom_degree(a.args[1])
        return None if x is None or y is None else x + y
    if a.kind == "pow":
        x = atom_degree(a.args[0])
        return None if x is None else x.scale(alg.p)
    if a.kind == "tensor":
        i, e = a.args
        x = element_degree(e)
        return None if x is None else ring.const(-i) + x.scale_by_lambda()
    if a.kind == "der":
        poly = a.args[0]
        terms = poly.terms()
        if len(terms) != 1:
            return None
        return ring.const(1 - terms[0][0])
    return None


def element_degree(e: Element) -> Optional[Degree]:
    """The degree of a homogeneous element, None when non-homogeneous or ungraded."""
    degs = set()
    for a, _ in e.terms:
        x = atom_degree(a)
        if x is None:
            return None
        degs.add(x)
    if len(degs) != 1:
        return None
    return degs.pop()


def homogeneous_components(e: Element):
    """Split e by atom degree; returns {Degree: Element} (None for ungraded atoms)."""
    groups: dict = {}
    for a, c in e.terms:
        groups.setdefault(atom_degree(a), []).append((a, c))
    return {k: Element(e.alg, tuple(v)) for k, v in groups.items()}


def grading_report(spec: AlgebraSpec):
    """List of (generator, term, expected, found) mismatches; empty when compatible."""
    ring = spec.degree_ring()
    if ring is None or not spec.graded:
        return [("*", "grading", "declared", "missing")]
    bad = []
    deg = {g.name: ring.degree(g.degree) for g in spec.generators}
    lam = ring.lam()
    for g in spec.generators:
        D = deg[g.name]
        for poly, combo in g.psi:
            for i, _ in poly.terms():
                for n, _c in combo:
                    found = ring.const(-i) + deg[n].scale_by_lambda()
                    if found != D:
                        bad.append((g.name, f"x^{i}#{n}", str(D), str(found)))
        if g.der is not None:
            for j, _ in g.der.terms():
                found = ring.const(1 - j)
                if found != D:
                    bad.append((g.name, f"x^{j}D", str(D), str(found)))
    del lam
    return bad


def verify_grading(spec: AlgebraSpec) -> bool:
    return not grading_report(spec)


# ---------------------------------------------------------------------------
# certified equality


@dataclass
class Certification:
    verdict: str  # "yes" | "no" | "unknown"
    level: Optional[int]
    reason: str
    assumption: str = (
        "depth bound n* = ceil(log_lambda(D/eps)) plus nucleus margin k0; "
        "sufficiency of the margin is an assumption"
    )


def certified_equal(e: Element, f: Element, level_cap: int = TRUNC_CAP) -> Certification:
    alg = e.alg
    e._same(f)
    diff = e - f
    if diff.is_zero():
        return Certification("yes", 0, "syntactically equal")
    work = alg.work_level()
    if not is_zero_to_level(diff, work):
        return Certification("no", work, f"images differ at level {work}")
    spec = alg.spec
    ring = spec.degree_ring()
    if ring is None or not spec.graded or ring.root <= 1:
        return Certification("unknown", work, "equal to level but the spec is not graded with lambda > 1")
    comps = homogeneous_components(diff)
    if None in comps:
        return Certification("unknown", work, "element has atoms without degree")
    from .analysis import nucleus  # local import: analysis builds on core

    rep = nucleus(spec)
    if not getattr(rep, "contracting", False):
        return Certification("unknown", work, "no nucleus found within caps")
    eps = rep.min_degree
    if eps is None or eps <= 0:
        return Certification("unknown", work, "nucleus degrees not positive")
    k0 = rep.faithful_level
    worst = 0
    for D in comps:
        if D.real <= 0:
            return Certification("unknown", work, "non-positive degree component")
        nstar = max(0, math.ceil(math.log(D.real / eps) / math.log(ring.root) - 1e-12))
        worst = max(worst, nstar + k0 + 1)
    if alg.d**worst > level_cap and wlevel_dim(alg.d, worst) > 400_000:
        return Certification("unknown", worst, f"needed level {worst} exceeds the cap")
    if is_zero_to_level(diff, max(worst, 1)):
        return Certification("yes", max(worst, 1), f"equal at the certified level {max(worst, 1)}")
    return Certification("no", max(worst, 1), f"images differ at level {max(worst, 1)}")


# ---------------------------------------------------------------------------
# parsing element expressions such as "2*[a,t] + (a+t)^[3] - x^2#c"

_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9']*|\^\[|\]|\[|\(|\)|,|\+|-|\*|#|\^)")


def parse_element(alg: SelfSimilarAlgebra, text: str) -> Element:
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse element at {text[pos:]!r}")
        toks.append(m.group(1))
        pos = m.end()
    toks.append(None)
    i = 0

    def peek():
        return toks[i]

    def take(expected=None):
        nonlocal i
        t = toks[i]
        if expected is not None and t != expected:
            raise ValueError(f"expected {expected!r} but found {t!r} in {text!r}")
        i += 1
        return t

    def expr():
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        out = term() * sign
        while peek() in ("+", "-"):
            s = -1 if take() == "-" else 1
            out = out + term() * s
        return out

    def term():
        c = 1
        if peek() is not None and peek().isdigit():
            c = int(take())
            if peek() == "*":
                take()
            else:
                return alg.zero() if c % alg.p == 0 else _const_error(c)
        return factor() * c

    def factor():
        t = peek()
        if t == "[":
            take()
            a = expr()
            take(",")
            b = expr()
            take("]")
            out = bracket(a, b)
        elif t == "(":
            take()
            out = expr()
            take(")")
        elif t is not None and t.startswith("x") and toks[i + 1] in ("#", "^") and _is_letter_power(t):
            take()
            k = 1
            if peek() == "^":
                take()
                k = int(take())
            take("#")
            out = alg.tensor(k, factor())
        elif t is not None and re.match(r"[A-Za-z_]", t):
            take()
            if t == "one" and peek() == "#":
                take()
                out = alg.tensor(0, factor())
            else:
                out = alg.gen(t)
        else:
            raise ValueError(f"unexpected token {t!r} in {text!r}")
        while peek() == "^[":
            take()
            k = int(take())
            take("]")
            if k != alg.p:
                raise ValueError(f"only p-th powers ^[{alg.p}] are available")
            out = p_power(out)
        return out

    out = expr()
    if peek() is not None:
        raise ValueError(f"trailing input {toks[i:-1]} in {text!r}")
    return out


def _is_letter_power(t):
    return t == "x"


def _const_error(c):
    raise ValueError(f"bare scalar {c} is not a Lie element")
