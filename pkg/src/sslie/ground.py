"""Scalars mod p, the alphabet X = F_p[x]/(x^d), its derivations,
companion matrices, subspaces over F_p and the degree ring Z[lambda]/(f)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

SUPPORTED_PRIMES = (2, 3, 5, 7, 11, 13, 17)


class StructureError(ValueError):
    """Operands live over different fields or alphabets."""


class ResourceError(RuntimeError):
    """A configured size cap would be exceeded."""


def check_prime(p: int) -> int:
    if p not in SUPPORTED_PRIMES:
        raise StructureError(f"unsupported characteristic {p}; need a prime in {SUPPORTED_PRIMES}")
    return p


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("inverse of 0 mod p")
    return pow(a, p - 2, p)


@dataclass(frozen=True)
class Scalar:
    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _other(self, o) -> int:
        if isinstance(o, Scalar):
            if o.p != self.p:
                raise StructureError("scalars over different fields")
            return o.value
        return int(o)

    def __add__(self, o):
        return Scalar(self.value + self._other(o), self.p)

    __radd__ = __add__

    def __sub__(self, o):
        return Scalar(self.value - self._other(o), self.p)

    def __rsub__(self, o):
        return Scalar(self._other(o) - self.value, self.p)

    def __mul__(self, o):
        return Scalar(self.value * self._other(o), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(-self.value, self.p)

    def inverse(self) -> "Scalar":
        return Scalar(inv_mod(self.value, self.p), self.p)

    def __truediv__(self, o):
        return self * Scalar(self._other(o), self.p).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Scalar(pow(self.value, k, self.p), self.p)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


# ---------------------------------------------------------------------------
# the alphabet


@dataclass(frozen=True)
class TruncPoly:
    """An element of F_p[x]/(x^d); coeffs[i] is the coefficient of x^i."""

    p: int
    d: int
    coeffs: tuple

    def __post_init__(self):
        cs = tuple(int(c) % self.p for c in self.coeffs)
        if len(cs) != self.d:
            raise StructureError(f"TruncPoly needs exactly {self.d} coefficients, got {len(cs)}")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_list(cls, p: int, d: int, coeffs: Sequence[int]) -> "TruncPoly":
        cs = list(coeffs)[:d]
        cs += [0] * (d - len(cs))
        return cls(p, d, tuple(cs))

    @classmethod
    def monomial(cls, p: int, d: int, i: int, c: int = 1) -> "TruncPoly":
        cs = [0] * d
        if i < d:
            cs[i] = c
        return cls(p, d, tuple(cs))

    @classmethod
    def zero(cls, p: int, d: int) -> "TruncPoly":
        return cls(p, d, (0,) * d)

    @classmethod
    def one(cls, p: int, d: int) -> "TruncPoly":
        return cls.monomial(p, d, 0)

    def _check(self, o: "TruncPoly"):
        if (o.p, o.d) != (self.p, self.d):
            raise StructureError(f"mismatched alphabets (p,d)={self.p, self.d} vs {o.p, o.d}")

    def __add__(self, o: "TruncPoly") -> "TruncPoly":
        self._check(o)
        return TruncPoly(self.p, self.d, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    def __sub__(self, o: "TruncPoly") -> "TruncPoly":
        self._check(o)
        return TruncPoly(self.p, self.d, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __neg__(self):
        return TruncPoly(self.p, self.d, tuple(-a for a in self.coeffs))

    def scale(self, c: int) -> "TruncPoly":
        return TruncPoly(self.p, self.d, tuple(c * a for a in self.coeffs))

    def __mul__(self, o):
        if isinstance(o, TruncPoly):
            return poly_mul(self, o)
        return self.scale(int(o))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TruncPoly":
        out = TruncPoly.one(self.p, self.d)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def terms(self):
        """Nonzero (exponent, coefficient) pairs in increasing degree."""
        return [(i, c) for i, c in enumerate(self.coeffs) if c]

    def degree(self) -> int:
        """Highest exponent with a nonzero coefficient; -1 for zero."""
        for i in range(self.d - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    def leading_monomial(self) -> "TruncPoly":
        k = self.degree()
        if k < 0:
            return self
        return TruncPoly.monomial(self.p, self.d, k, self.coeffs[k])

    def derivative(self) -> "TruncPoly":
        cs = [(i * self.coeffs[i]) for i in range(1, self.d)] + [0]
        return TruncPoly(self.p, self.d, tuple(cs))

    def augmentation(self) -> int:
        return self.coeffs[0]

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in self.terms():
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if c == 1:
                parts.append(mono)
            elif i == 0:
                parts.append(str(c))
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)


def poly_mul(p1: TruncPoly, p2: TruncPoly) -> TruncPoly:
    p1._check(p2)
    d, p = p1.d, p1.p
    out = [0] * d
    for i, a in enumerate(p1.coeffs):
        if not a:
            continue
        for j in range(d - i):
            out[i + j] += a * p2.coeffs[j]
    return TruncPoly(p, d, tuple(out))


@dataclass(frozen=True)
class SpecialDerivation:
    """coeff * d/dx as an element of Der X."""

    coeff: TruncPoly

    @property
    def p(self):
        return self.coeff.p

    @property
    def d(self):
        return self.coeff.d

    @classmethod
    def partial(cls, p: int, d: int) -> "SpecialDerivation":
        return cls(TruncPoly.one(p, d))

    @classmethod
    def zero(cls, p: int, d: int) -> "SpecialDerivation":
        return cls(TruncPoly.zero(p, d))

    def __call__(self, q: TruncPoly) -> TruncPoly:
        return apply_derivation(self, q)

    def __add__(self, o):
        return SpecialDerivation(self.coeff + o.coeff)

    def __sub__(self, o):
        return SpecialDerivation(self.coeff - o.coeff)

    def __neg__(self):
        return SpecialDerivation(-self.coeff)

    def scale(self, c: int):
        return SpecialDerivation(self.coeff.scale(c))

    def is_zero(self):
        return self.coeff.is_zero()

    def bracket(self, o: "SpecialDerivation") -> "SpecialDerivation":
        # [f d, g d] = (f g' - g f') d
        f, g = self.coeff, o.coeff
        return SpecialDerivation(f * g.derivative() - g * f.derivative())

    def p_power(self) -> "SpecialDerivation":
        """The operator p-th power, again a derivation; determined by its value on x."""
        q = TruncPoly.monomial(self.p, self.d, 1)
        for _ in range(self.p):
            q = self(q)
        return SpecialDerivation(q)

    def __str__(self):
        return f"({self.coeff})*D" if len(self.coeff.terms()) != 1 or self.coeff.coeffs[0] != 1 else "D"


def apply_derivation(delta: SpecialDerivation, q: TruncPoly) -> TruncPoly:
    delta.coeff._check(q)
    return delta.coeff * q.derivative()


# ---------------------------------------------------------------------------
# companion matrices (column convention: M[i, j] = coefficient of basis_i in image of basis_j)

BASES = ("monomial", "divided")


def _divided_scale(p: int, d: int):
    """Entry j is j! mod p: the divided power x^(j) = x^j / j!."""
    if d > p:
        raise StructureError("divided powers need d <= p")
    return [math.factorial(j) % p for j in range(d)]


def companion_matrix(obj, basis: str = "monomial") -> np.ndarray:
    if basis not in BASES:
        raise ValueError(f"unknown basis {basis!r}; choose from {BASES}")
    if isinstance(obj, SpecialDerivation):
        p, d = obj.p, obj.d
        images = [obj(TruncPoly.monomial(p, d, j)) for j in range(d)]
    elif isinstance(obj, TruncPoly):
        p, d = obj.p, obj.d
        images = [obj * TruncPoly.monomial(p, d, j) for j in range(d)]
    else:
        raise TypeError("companion_matrix needs a TruncPoly or SpecialDerivation")
    M = np.zeros((d, d), dtype=np.int64)
    for j, img in enumerate(images):
        M[:, j] = img.coeffs
    if basis == "divided":
        # change of basis: monomial coordinates -> divided-power coordinates
        s = _divided_scale(p, d)
        S = np.diag([inv_mod(v, p) for v in s])  # divided -> monomial
        Sinv = np.diag(s)
        M = (Sinv @ M @ S) % p
    return M % p


def companion_matrices(p: int, d: int, basis: str = "monomial"):
    """(m_{x^0}, ..., m_{x^{d-1}}) and m_D."""
    ms = [companion_matrix(TruncPoly.monomial(p, d, i), basis) for i in range(d)]
    return ms, companion_matrix(SpecialDerivation.partial(p, d), basis)


# ---------------------------------------------------------------------------
# dense linear algebra mod p


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Exact product mod p through float BLAS while sums stay below 2^53."""
    k = A.shape[1]
    bound = k * (p - 1) ** 2
    if bound < 2**24:
        C = np.asarray(A, dtype=np.float32) @ np.asarray(B, dtype=np.float32)
    elif bound < 2**53:
        C = np.asarray(A, dtype=np.float64) @ np.asarray(B, dtype=np.float64)
    else:
        return (np.asarray(A, dtype=object) @ np.asarray(B, dtype=object)) % p
    return np.rint(C).astype(np.int64) % p


def matpow_mod(A: np.ndarray, k: int, p: int) -> np.ndarray:
    out = np.eye(A.shape[0], dtype=np.int64)
    base = np.asarray(A, dtype=np.int64) % p
    while k:
        if k & 1:
            out = matmul_mod(out, base, p)
        k >>= 1
        if k:
            base = matmul_mod(base, base, p)
    return out


def _inv_table(p: int) -> np.ndarray:
    t = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        t[a] = inv_mod(a, p)
    return t


def rref(rows, p: int):
    """Reduced row echelon form mod p. Returns (R, pivots)."""
    A = np.array(rows, dtype=np.int64, ndmin=2) % p
    if A.size == 0:
        return A.reshape(0, A.shape[1] if A.ndim == 2 else 0), []
    inv = _inv_table(p)
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = (A[r] * inv[A[r, c]]) % p
        col = A[:, c].copy()
        col[r] = 0
        idx = np.nonzero(col)[0]
        if idx.size:
            A[idx] = (A[idx] - np.outer(col[idx], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def nullspace(M, p: int) -> np.ndarray:
    """Basis (as rows) of {v : M v = 0} over F_p."""
    M = np.array(M, dtype=np.int64, ndmin=2) % p
    n = M.shape[1]
    R, piv = rref(M, p)
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for i, pc in enumerate(piv):
            out[k, pc] = (-R[i, f]) % p
    return out


class EchelonBuilder:
    """Incrementally maintained reduced echelon basis; rows are kept fully reduced."""

    def __init__(self, ambient: int, p: int):
        self.ambient = ambient
        self.p = p
        self._inv = _inv_table(p)
        self.R = np.zeros((0, ambient), dtype=np.int64)
        self.pivots: list = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.p
        if not self.pivots:
            return v
        c = v[self.pivots]
        if not c.any():
            return v
        return (v - matmul_mod(c[None, :], self.R, self.p)[0]) % self.p

    def reduce_block(self, V) -> np.ndarray:
        V = np.asarray(V, dtype=np.int64) % self.p
        if not self.pivots or V.shape[0] == 0:
            return V
        return (V - matmul_mod(V[:, self.pivots], self.R, self.p)) % self.p

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def add(self, v) -> bool:
        """Insert v; True iff it enlarged the span."""
        r = self.reduce(v)
        nz = np.nonzero(r)[0]
        if nz.size == 0:
            return False
        self._insert_reduced(r, nz[0])
        return True

    def _insert_reduced(self, r, c):
        p = self.p
        r = (r * self._inv[r[c]]) % p
        if self.pivots:
            col = self.R[:, c].copy()
            idx = np.nonzero(col)[0]
            if idx.size:
                self.R[idx] = (self.R[idx] - np.outer(col[idx], r)) % p
        pos = int(np.searchsorted(np.array(self.pivots, dtype=np.int64), c))
        self.R = np.insert(self.R, pos, r, axis=0)
        self.pivots.insert(pos, int(c))

    def add_block(self, V):
        """Insert all rows of V; returns the indices of rows that were new
        (each relative to the span of its predecessors)."""
        V = self.reduce_block(V)
        new = []
        for i in range(V.shape[0]):
            r = self.reduce(V[i]) if new else V[i]
            nz = np.nonzero(r)[0]
            if nz.size == 0:
                continue
            self._insert_reduced(r, nz[0])
            new.append(i)
        return new


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^ambient held in reduced row echelon form."""

    basis: tuple  # tuple of tuples of ints
    ambient: int
    p: int

    @classmethod
    def span(cls, vectors, ambient: int, p: int) -> "Subspace":
        vs = [list(v) for v in vectors]
        for v in vs:
            if len(v) != ambient:
                raise StructureError(f"vector of length {len(v)} in ambient dimension {ambient}")
        if not vs:
            return cls((), ambient, p)
        R, _ = rref(vs, p)
        return cls(tuple(tuple(int(x) for x in row) for row in R), ambient, p)

    @classmethod
    def zero(cls, ambient: int, p: int) -> "Subspace":
        return cls((), ambient, p)

    @classmethod
    def full(cls, ambient: int, p: int) -> "Subspace":
        return cls.span(np.eye(ambient, dtype=np.int64), ambient, p)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> np.ndarray:
        if not self.basis:
            return np.zeros((0, self.ambient), dtype=np.int64)
        return np.array(self.basis, dtype=np.int64)

    def pivots(self):
        return [next(i for i, x in enumerate(row) if x) for row in self.basis]

    def _check(self, o: "Subspace"):
        if o.ambient != self.ambient or o.p != self.p:
            raise StructureError("ambient mismatch")

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64) % self.p
        if len(v) != self.ambient:
            raise StructureError("ambient mismatch")
        if not self.basis:
            return not v.any()
        R = self.matrix()
        piv = self.pivots()
        r = (v - (v[piv] @ R)) % self.p
        return not r.any()

    def contains_subspace(self, o: "Subspace") -> bool:
        self._check(o)
        return all(self.contains(v) for v in o.basis)

    def sum(self, o: "Subspace") -> "Subspace":
        self._check(o)
        return Subspace.span(list(self.basis) + list(o.basis), self.ambient, self.p)

    __add__ = sum

    def intersect(self, o: "Subspace") -> "Subspace":
        """Zassenhaus-style kernel construction: solve sum a_i u_i = sum b_j w_j."""
        self._check(o)
        if not self.basis or not o.basis:
            return Subspace.zero(self.ambient, self.p)
        U, W = self.matrix(), o.matrix()
        M = np.concatenate([U, (-W) % self.p], axis=0).T  # ambient x (k+l)
        K = nullspace(M, self.p)
        vecs = [(k[: U.shape[0]] @ U) % self.p for k in K]
        return Subspace.span(vecs, self.ambient, self.p)

    def __eq__(self, o):
        return isinstance(o, Subspace) and (self.basis, self.ambient, self.p) == (o.basis, o.ambient, o.p)

    def __hash__(self):
        return hash((self.basis, self.ambient, self.p))

    def __le__(self, o):
        return o.contains_subspace(self)


def subspace_ops(op: str, *args):
    """Dispatch for span / contains / sum / intersect / dim."""
    if op == "span":
        return Subspace.span(*args)
    if op == "contains":
        return args[0].contains(args[1])
    if op == "sum":
        return args[0].sum(args[1])
    if op == "intersect":
        return args[0].intersect(args[1])
    if op == "dim":
        return args[0].dim
    raise ValueError(f"unknown subspace operation {op!r}")


# ---------------------------------------------------------------------------
# degrees in Z[lambda]/(f)


class DegreeRing:
    """Z[lambda] modulo a monic integer polynomial, with a chosen real root.

    minpoly is given constant-first: (c_0, ..., c_{k-1}, 1)."""

    def __init__(self, minpoly: Sequence[int], interval: tuple):
        mp = [int(c) for c in minpoly]
        while len(mp) > 1 and mp[-1] == 0:
            mp.pop()
        if len(mp) < 2 or mp[-1] != 1:
            raise ValueError("lambda minimal polynomial must be monic of degree >= 1")
        self.minpoly = tuple(mp)
        self.interval = (float(interval[0]), float(interval[1]))
        self.root = self._find_root()

    def _find_root(self) -> float:
        lo, hi = self.interval
        roots = np.roots(list(reversed(self.minpoly)))
        real = sorted(r.real for r in roots if abs(r.imag) < 1e-9 and lo - 1e-12 <= r.real <= hi + 1e-12)
        if not real:
            raise ValueError(f"minimal polynomial {self.minpoly} has no real root in [{lo}, {hi}]")
        # polish by bisection when the interval brackets a sign change
        f = lambda t: sum(c * t**i for i, c in enumerate(self.minpoly))
        r = real[0]
        a, b = lo, hi
        if f(a) * f(b) < 0 and len(real) == 1:
            for _ in range(200):
                m = (a + b) / 2
                if f(a) * f(m) <= 0:
                    b = m
                else:
                    a = m
            r = (a + b) / 2
        return float(r)

    @property
    def rank(self) -> int:
        return len(self.minpoly) - 1

    def reduce(self, coeffs: Sequence[int]) -> tuple:
        cs = [int(c) for c in coeffs]
        k = self.rank
        while len(cs) > k:
            top = cs.pop()
            if top:
                shift = len(cs) - k
                for i in range(k):
                    cs[shift + i] -= top * self.minpoly[i]
        cs += [0] * (k - len(cs))
        return tuple(cs)

    def degree(self, coeffs: Sequence[int]) -> "Degree":
        return Degree(self, self.reduce(coeffs))

    def zero(self) -> "Degree":
        return Degree(self, (0,) * self.rank)

    def const(self, c: int) -> "Degree":
        return self.degree([c])

    def lam(self) -> "Degree":
        return self.degree([0, 1])

    def __eq__(self, o):
        return isinstance(o, DegreeRing) and self.minpoly == o.minpoly and self.interval == o.interval

    def __hash__(self):
        return hash((self.minpoly, self.interval))

    def __repr__(self):
        return f"DegreeRing({self.minpoly}, root={self.root:.12g})"


class Degree:
    __slots__ = ("ring", "poly", "real")

    def __init__(self, ring: DegreeRing, poly: tuple):
        self.ring = ring
        self.poly = tuple(poly)
        self.real = float(sum(c * ring.root**i for i, c in enumerate(self.poly)))

    def _same(self, o):
        if not isinstance(o, Degree) or o.ring != self.ring:
            raise StructureError("degrees from different rings")

    def __add__(self, o: "Degree") -> "Degree":
        self._same(o)
        return Degree(self.ring, tuple(a + b for a, b in zip(self.poly, o.poly)))

    def __sub__(self, o: "Degree") -> "Degree":
        self._same(o)
        return Degree(self.ring, tuple(a - b for a, b in zip(self.poly, o.poly)))

    def __neg__(self):
        return Degree(self.ring, tuple(-a for a in self.poly))

    def scale(self, k: int) -> "Degree":
        return Degree(self.ring, tuple(k * a for a in self.poly))

    def scale_by_lambda(self, times: int = 1) -> "Degree":
        cs = list(self.poly)
        for _ in range(times):
            cs = self.ring.reduce([0] + list(cs))
        return Degree(self.ring, tuple(cs))

    def real_value(self) -> float:
        return self.real

    def is_integer(self) -> bool:
        return all(c == 0 for c in self.poly[1:])

    def __eq__(self, o):
        return isinstance(o, Degree) and o.ring == self.ring and o.poly == self.poly

    def __hash__(self):
        return hash(self.poly)

    def __lt__(self, o):
        self._same(o)
        return self.poly != o.poly and self.real < o.real

    def __le__(self, o):
        return self == o or self < o

    def __str__(self):
        terms = []
        for i, c in enumerate(self.poly):
            if not c:
                continue
            mono = "" if i == 0 else ("l" if i == 1 else f"l^{i}")
            if i == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{mono}")
        return " + ".join(terms).replace("+ -", "- ") or "0"

    def __repr__(self):
        return f"Degree({self}, {self.real:.6g})"


def degree_arith(op: str, *args):
    """Dispatch for reduce / add / scale_by_lambda / real_value."""
    if op == "reduce":
        ring, coeffs = args
        return ring.degree(coeffs)
    if op == "add":
        return args[0] + args[1]
    if op == "scale_by_lambda":
        return args[0].scale_by_lambda(*args[1:])
    if op == "real_value":
        return args[0].real
    raise ValueError(f"unknown degree operation {op!r}")


def exact_linear_fit(points: Iterable[tuple], base: int):
    """Exact (alpha, beta) with y = alpha*base^n + beta through the first two points."""
    pts = list(points)
    (n0, y0), (n1, y1) = pts[0], pts[1]
    alpha = Fraction(y1 - y0, base**n1 - base**n0)
    beta = Fraction(y0) - alpha * base**n0
    return alpha, beta


def solve_mod(A, b, p: int):
    """One solution x of A x = b over F_p (free variables set to 0), or None."""
    A = np.array(A, dtype=np.int64, ndmin=2) % p
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1) % p
    n = A.shape[1]
    R, piv = rref(np.hstack([A, b]), p)
    if n in piv:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = R[i, n]
    return x
