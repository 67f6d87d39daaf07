"""Associative self-similar algebras carried by a d x d matrix recursion.

Elements are F_p-combinations of words in letters.  A letter is either an atom of a
self-similar Lie algebra (its recursion comes from the expansion psi) or a symbol of
an algebra given directly by its matrices.  No normal form for U(L) is attempted:
two elements are compared through their action on X^{(x)n}.

Matrices use the column convention of the companion matrices: entry (r, c) of
psi'(u) is the coefficient carried from x^c to x^r.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from .core import TRUNC_CAP, Atom, Element, SelfSimilarAlgebra, algebra, atom_degree
from .ground import (
    ResourceError,
    SpecialDerivation,
    StructureError,
    TruncPoly,
    companion_matrix,
    inv_mod,
    matmul_mod,
    matpow_mod,
)


def _letter_key(x) -> str:
    return x.key if isinstance(x, Atom) else str(x)


def _word_key(w) -> tuple:
    return (len(w), tuple(_letter_key(x) for x in w))


class AssocElement:
    __slots__ = ("A", "terms")

    def __init__(self, A: "AssocAlgebra", terms):
        p = A.p
        acc: Dict[tuple, int] = {}
        for w, c in (terms.items() if isinstance(terms, dict) else terms):
            c %= p
            if c:
                acc[w] = (acc.get(w, 0) + c) % p
        self.A = A
        self.terms = tuple(sorted(((w, c) for w, c in acc.items() if c), key=lambda t: _word_key(t[0])))

    def _coerce(self, o) -> "AssocElement":
        if isinstance(o, AssocElement):
            if o.A is not self.A:
                raise StructureError("elements of different associative algebras")
            return o
        if isinstance(o, int):
            return self.A.scalar(o)
        return NotImplemented

    def __add__(self, o):
        o = self._coerce(o)
        return AssocElement(self.A, self.terms + o.terms)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._coerce(o)
        return AssocElement(self.A, self.terms + tuple((w, -c) for w, c in o.terms))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __neg__(self):
        return AssocElement(self.A, tuple((w, -c) for w, c in self.terms))

    def __mul__(self, o):
        if isinstance(o, int):
            return AssocElement(self.A, tuple((w, c * o) for w, c in self.terms))
        o = self._coerce(o)
        out = {}
        p = self.A.p
        for w1, c1 in self.terms:
            for w2, c2 in o.terms:
                w = w1 + w2
                out[w] = (out.get(w, 0) + c1 * c2) % p
        return AssocElement(self.A, out)

    def __rmul__(self, o):
        if isinstance(o, int):
            return self * o
        return self._coerce(o) * self

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out, base = self.A.one(), self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, o):
        if isinstance(o, int):
            o = self.A.scalar(o)
        return isinstance(o, AssocElement) and o.A is self.A and o.terms == self.terms

    def __hash__(self):
        return hash(self.terms)

    def augmentation(self) -> int:
        for w, c in self.terms:
            if not w:
                return c
        return 0

    def words(self):
        return [w for w, _ in self.terms]

    def __str__(self):
        if not self.terms:
            return "0"
        p = self.A.p
        parts = []
        for w, c in self.terms:
            body = self.A.word_str(w)
            if not w:
                parts.append(str(c if c <= p // 2 else c - p))
            elif c == 1:
                parts.append(body)
            elif c == p - 1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


class AssocAlgebra:
    """A self-similar associative algebra on letters with a d x d recursion each.

    Either `lie` is a SelfSimilarAlgebra (letters are its atoms and psi' is built from
    the expansion), or `recursion` maps each letter to a d x d table whose entries are
    {word: coefficient} dictionaries, words being strings of single-character letters
    or tuples of letters."""

    def __init__(self, p: int, d: int, name: str = "", lie: Optional[SelfSimilarAlgebra] = None,
                 recursion: Optional[dict] = None):
        if (lie is None) == (recursion is None):
            raise ValueError("give exactly one of lie= or recursion=")
        self.p, self.d, self.name = p, d, name
        self.lie = lie
        self._raw = recursion
        self._psi_letter: dict = {}
        self._psi_word: dict = {}
        self._trunc_letter: dict = {}

    def __repr__(self):
        return f"AssocAlgebra({self.name or 'anonymous'}, p={self.p}, d={self.d})"

    # constructors
    def scalar(self, c: int) -> AssocElement:
        return AssocElement(self, (((), c),))

    def one(self) -> AssocElement:
        return self.scalar(1)

    def zero(self) -> AssocElement:
        return AssocElement(self, ())

    def letter(self, x) -> AssocElement:
        if self.lie is None and x not in self._raw:
            raise KeyError(f"unknown letter {x!r}")
        return AssocElement(self, (((x,), 1),))

    def word(self, letters) -> AssocElement:
        if isinstance(letters, str) and self.lie is None:
            letters = tuple(letters)
        for x in letters:
            if self.lie is None and x not in self._raw:
                raise KeyError(f"unknown letter {x!r}")
        return AssocElement(self, ((tuple(letters), 1),))

    def word_str(self, w) -> str:
        if self.lie is None:
            return "".join(str(x) for x in w) if all(len(str(x)) == 1 for x in w) else "*".join(map(str, w))
        out = []
        for x in w:
            s = x.key
            out.append(s if x.kind == "gen" else f"({s})")
        return "*".join(out)

    # the recursion
    def letter_psi(self, x):
        M = self._psi_letter.get(x)
        if M is not None:
            return M
        d, p = self.d, self.p
        if self.lie is not None:
            ex = self.lie.expansion_of_atom(x)
            M = [[self.zero() for _ in range(d)] for _ in range(d)]
            cd = companion_matrix(SpecialDerivation(ex.der)) if not ex.der.is_zero() else None
            for r in range(d):
                for c in range(d):
                    acc = self.zero()
                    if cd is not None and cd[r, c]:
                        acc = acc + int(cd[r, c])
                    i = r - c
                    if 0 <= i < d and not ex.coeffs[i].is_zero():
                        acc = acc + lift_into(self, ex.coeffs[i])
                    M[r][c] = acc
        else:
            raw = self._raw[x]
            if len(raw) != d or any(len(row) != d for row in raw):
                raise StructureError(f"recursion of {x!r} is not {d}x{d}")
            M = [[self._from_raw(raw[r][c]) for c in range(d)] for r in range(d)]
        self._psi_letter[x] = M
        return M

    def _from_raw(self, entry) -> AssocElement:
        if isinstance(entry, AssocElement):
            return entry
        if isinstance(entry, int):
            return self.scalar(entry)
        terms = []
        for w, c in entry.items():
            terms.append((tuple(w), c))
        return AssocElement(self, terms)

    def word_psi(self, w: tuple):
        M = self._psi_word.get(w)
        if M is not None:
            return M
        d = self.d
        if not w:
            M = [[self.one() if r == c else self.zero() for c in range(d)] for r in range(d)]
        elif len(w) == 1:
            M = self.letter_psi(w[0])
        else:
            h = len(w) // 2
            M = mat_mul(self.word_psi(w[:h]), self.word_psi(w[h:]))
        if len(w) <= 64:
            self._psi_word[w] = M
        return M

    def letter_truncate(self, x, n: int, cap: int = TRUNC_CAP) -> np.ndarray:
        key = (x, n)
        M = self._trunc_letter.get(key)
        if M is not None:
            return M
        d, p = self.d, self.p
        if d**n > cap:
            raise ResourceError(f"truncation at level {n} needs {d**n}x{d**n} matrices; cap is {cap}")
        if n == 0:
            M = np.zeros((1, 1), dtype=np.int64)
        else:
            M = _block_assemble(self.letter_psi(x), lambda u: assoc_truncate(u, n - 1, cap=cap), d, n, p)
        M.setflags(write=False)
        if d**n <= 729:
            self._trunc_letter[key] = M
        return M


def mat_mul(X, Y):
    d = len(X)
    out = []
    for r in range(d):
        row = []
        for c in range(d):
            acc = X[r][0] * Y[0][c]
            for k in range(1, d):
                if X[r][k] and Y[k][c]:
                    acc = acc + X[r][k] * Y[k][c]
            row.append(acc)
        out.append(row)
    return out


def _block_assemble(table, trunc, d, n, p) -> np.ndarray:
    size = d ** (n - 1)
    M = np.zeros((d * size, d * size), dtype=np.int64)
    for r in range(d):
        for c in range(d):
            u = table[r][c]
            if u.is_zero():
                continue
            M[r * size:(r + 1) * size, c * size:(c + 1) * size] = trunc(u)
    return M % p


# ---------------------------------------------------------------------------
# lifts of Lie elements

_ENVELOPES: dict = {}


def envelope(alg_or_spec) -> AssocAlgebra:
    """The associative algebra of lifted Lie atoms for an algebra (cached)."""
    alg = alg_or_spec if isinstance(alg_or_spec, SelfSimilarAlgebra) else algebra(alg_or_spec)
    A = _ENVELOPES.get(id(alg))
    if A is None or A.lie is not alg:
        A = _ENVELOPES[id(alg)] = AssocAlgebra(alg.p, alg.d, alg.spec.name, lie=alg)
    return A


def lift_into(A: AssocAlgebra, e: Element) -> AssocElement:
    return AssocElement(A, tuple(((a,), c) for a, c in e.terms))


def lift(e: Element) -> AssocElement:
    return lift_into(envelope(e.alg), e)


def psi(u: AssocElement):
    """psi'(u) as a d x d table of AssocElements."""
    A = u.A
    d = A.d
    out = [[A.zero() for _ in range(d)] for _ in range(d)]
    for w, c in u.terms:
        M = A.word_psi(w)
        for r in range(d):
            for s in range(d):
                if M[r][s]:
                    out[r][s] = out[r][s] + M[r][s] * c
    return out


def psi_display(u: AssocElement, basis: str = "monomial"):
    """psi'(u) as strings; basis="divided" uses x^(i) = x^i / i!."""
    A = u.A
    p, d = A.p, A.d
    M = psi(u)
    rows = []
    for r in range(d):
        row = []
        for c in range(d):
            e = M[r][c]
            if basis == "divided":
                e = e * (math.factorial(r) * inv_mod(math.factorial(c) % p, p))
            row.append(str(e))
        rows.append(row)
    return rows


def is_lower_triangular(M) -> bool:
    d = len(M)
    return all(M[r][c].is_zero() for r in range(d) for c in range(r + 1, d))


# ---------------------------------------------------------------------------
# truncation


def assoc_truncate(u: AssocElement, n: int, route: str = "product", cap: int = TRUNC_CAP) -> np.ndarray:
    """The action of u on X^{(x)n}, a d^n x d^n matrix (level 0 is the augmentation).

    route="product" multiplies the truncations of the letters; route="recursion"
    truncates the entries of psi'(u) one level down."""
    A = u.A
    d, p = A.d, A.p
    if n < 0:
        raise ValueError("level must be >= 0")
    size = d**n
    if size > cap:
        raise ResourceError(f"truncation at level {n} needs {size}x{size} matrices; cap is d^n <= {cap}")
    if n == 0:
        return np.array([[u.augmentation()]], dtype=np.int64)
    if route == "recursion":
        return _block_assemble(psi(u), lambda e: assoc_truncate(e, n - 1, "recursion", cap), d, n, p)
    if route != "product":
        raise ValueError(f"unknown route {route!r}")
    out = np.zeros((size, size), dtype=np.int64)
    for w, c in u.terms:
        M = np.eye(size, dtype=np.int64)
        for x in w:
            M = matmul_mod(M, A.letter_truncate(x, n, cap), p)
            if not M.any():
                break
        out = (out + c * M) % p
    return out


def truncate_power(u: AssocElement, k: int, n: int, cap: int = TRUNC_CAP) -> np.ndarray:
    return matpow_mod(assoc_truncate(u, n, cap=cap), k, u.A.p)


@dataclass
class AssocNilIndex:
    value: Optional[int]  # least k with M^k = 0; None if M is not nilpotent at this level
    level: int
    size: int

    @property
    def nilpotent(self):
        return self.value is not None

    def __str__(self):
        return str(self.value) if self.value is not None else f"not nilpotent at level {self.level}"


def assoc_nil_index_at_level(u: AssocElement, n: int, cap: int = TRUNC_CAP) -> AssocNilIndex:
    """Least k with truncate(u, n)^k = 0, by squaring then bisection."""
    p = u.A.p
    M = assoc_truncate(u, n, cap=cap)
    N = M.shape[0]
    if not M.any():
        return AssocNilIndex(1, n, N)
    squares = [M]  # squares[j] = M^(2^j)
    while (1 << (len(squares) - 1)) < N:
        S = matmul_mod(squares[-1], squares[-1], p)
        squares.append(S)
        if not S.any():
            break
    if squares[-1].any():
        return AssocNilIndex(None, n, N)
    # M^(2^(J-1)) != 0 = M^(2^J); find least k in (2^(J-1), 2^J]
    J = len(squares) - 1
    k, P = 1 << (J - 1), squares[J - 1]
    for j in range(J - 2, -1, -1):
        Q = matmul_mod(P, squares[j], p)
        if Q.any():
            k, P = k + (1 << j), Q
    return AssocNilIndex(k + 1, n, N)


@dataclass
class PowerReport:
    base: int
    level: int
    nonzero: list  # exponents s with M^(base^s) != 0
    first_zero: Optional[int]

    @property
    def lower_bound(self):
        """Order lower bound: base^(largest s seen nonzero) + 1."""
        return self.base ** max(self.nonzero) + 1 if self.nonzero else 1


def power_nonvanishing(u: AssocElement, n: int, s_max: int, base: Optional[int] = None,
                       cap: int = TRUNC_CAP) -> PowerReport:
    """Which of u^(base^s), s = 0..s_max, truncate to nonzero at level n."""
    p = u.A.p
    base = base or p
    M = assoc_truncate(u, n, cap=cap)
    seen = []
    for s in range(s_max + 1):
        if not M.any():
            return PowerReport(base, n, seen, s)
        seen.append(s)
        if s < s_max:
            M = matpow_mod(M, base, p)
    return PowerReport(base, n, seen, None)


# ---------------------------------------------------------------------------
# PSZ non-nil witness


@dataclass
class WitnessReport:
    status: str  # "verified" | "inapplicable" | "failed"
    alpha: Optional[int] = None
    beta: Optional[int] = None
    element: Optional[AssocElement] = None
    detail: str = ""

    def __bool__(self):
        return self.status == "verified"


def _psz_root(m: int, p: int) -> Optional[int]:
    a = 1
    while a**m - a ** (m - 1) + 1 <= p:
        if a**m - a ** (m - 1) + 1 == p:
            return a
        a += 1
    return None


def _sort_runs(w, movable) -> tuple:
    """Sort maximal runs of pairwise commuting letters (a normal form modulo those relations)."""
    out, run = [], []
    for x in w:
        if x in movable:
            run.append(x)
        else:
            out += sorted(run, key=_letter_key) + [x]
            run = []
    return tuple(out + sorted(run, key=_letter_key))


def _equal_mod_commuting(u: AssocElement, v: AssocElement, movable) -> bool:
    A = u.A
    norm = lambda e: AssocElement(A, tuple((_sort_runs(w, movable), c) for w, c in e.terms))
    return norm(u) == norm(v)


def psz_non_nil_witness(m: int, p: int, reading: str = "corrected") -> WitnessReport:
    """Exact check that psi'(x^beta) is triangular with a multiple of x at (p, p), 1-based.

    reading="literal": alpha solves p = alpha^m - alpha^(m-1) + 1, beta = alpha + 1,
    x = d_1^(alpha beta^(m-2)) ... d_(m-1)^alpha v, lower triangular with x itself.
    reading="corrected": beta solves p = beta^m - beta^(m-1) + 1, alpha = beta - 1 and
    x = v d_(m-1)^alpha ... d_1^(alpha beta^(m-2)); the matrix is then upper triangular
    in the column convention (lower after transposing) and the corner entry is -x.
    The d_i commute in L, so entries are compared modulo reordering runs of d's."""
    from .catalog import psz, psz_names
    from .core import bracket, expand

    if reading not in ("literal", "corrected"):
        raise ValueError(f"unknown reading {reading!r}")
    r = _psz_root(m, p)
    if r is None:
        return WitnessReport("inapplicable", detail=f"no integer root of t^{m} - t^{m - 1} + 1 = {p}")
    alpha, beta = (r, r + 1) if reading == "literal" else (r - 1, r)
    alg = algebra(psz(m, p).spec)
    A = envelope(alg)
    names = psz_names(m)
    ds = [alg.gen(nm) for nm in names]
    for i in range(len(ds)):
        for j in range(i + 1, len(ds)):
            if not expand(bracket(ds[i], ds[j])).is_zero():
                raise StructureError("the d_i are expected to commute")
    letters = []
    for i, nm in enumerate(names):
        letters += [ds[i].terms[0][0]] * (alpha * beta ** (m - 2 - i))
    letters.append(alg.gen("v").terms[0][0])
    if reading == "corrected":
        letters.reverse()
    x = A.word(tuple(letters))
    M = psi(x**beta)
    lower = is_lower_triangular(M)
    upper = all(M[r_][c].is_zero() for r_ in range(p) for c in range(r_))
    corner = M[p - 1][p - 1]
    movable = {g.terms[0][0] for g in ds}
    if reading == "literal":
        if not lower:
            return WitnessReport("failed", alpha, beta, x, "an entry above the diagonal survives")
        if corner != x:
            return WitnessReport("failed", alpha, beta, x, f"entry ({p},{p}) is {corner}")
        return WitnessReport("verified", alpha, beta, x, f"psi'(x^{beta}) is lower triangular with x at ({p},{p})")
    if not (upper or lower):
        return WitnessReport("failed", alpha, beta, x, "psi'(x^beta) is not triangular")
    for c in range(1, p):
        if _equal_mod_commuting(corner, x * c, movable):
            shape = "upper" if upper else "lower"
            sc = c if c <= p // 2 else c - p
            return WitnessReport("verified", alpha, beta, x,
                                 f"psi'(x^{beta}) is {shape} triangular with {sc if sc != -1 else '-'}x at ({p},{p})")
    return WitnessReport("failed", alpha, beta, x, f"entry ({p},{p}) is {corner}")


# ---------------------------------------------------------------------------
# Poincare series of U(L)


@dataclass
class PowerSeries:
    coeffs: list
    label: str = ""

    @property
    def cutoff(self):
        return len(self.coeffs) - 1

    def partial_sums(self):
        return list(itertools.accumulate(self.coeffs))

    def to_csv(self) -> str:
        lines = ["degree,coefficient"]
        lines += [f"{k},{c}" for k, c in enumerate(self.coeffs)]
        if self.label:
            lines.insert(0, f"# {self.label}")
        return "\n".join(lines) + "\n"


def bin_degrees(dims_by_real: dict) -> dict:
    """Bin real degrees with width 1 (degree r goes to ceil(r)); integers stay put."""
    out: Dict[int, int] = {}
    for r, k in dims_by_real.items():
        b = int(math.ceil(float(r) - 1e-9))
        out[b] = out.get(b, 0) + k
    return out


def poincare_u(dims: dict, cutoff: int, char: int = 0) -> PowerSeries:
    """Truncated Hilbert series of U(L) from the graded dims of L.

    char 0: prod (1 - x^n)^(-dim L_n); char p: the same divided by its value at x^p,
    i.e. prod ((1 - x^(pn)) / (1 - x^n))^dim L_n."""
    label = ""
    if any(float(k) != int(k) for k in dims):
        dims = bin_degrees(dims)
        label = "real degrees binned with width 1"
    if any(int(k) < 1 for k in dims):
        raise ValueError("degrees must be positive")
    if char:
        f = _poincare_char_p(dims, cutoff, char)
    else:
        f = [0] * (cutoff + 1)
        f[0] = 1
        for deg in sorted(dims):
            n = int(deg)
            for _ in range(dims[deg] if n <= cutoff else 0):
                for j in range(n, cutoff + 1):
                    f[j] += f[j - n]
    return PowerSeries(f, label)


def _poincare_char_p(dims, cutoff, p):
    f = [0] * (cutoff + 1)
    f[0] = 1
    for deg in sorted(dims):
        n = int(deg)
        if n > cutoff:
            continue
        for _ in range(dims[deg]):
            g = [0] * (cutoff + 1)
            for j in range(cutoff + 1):
                if f[j]:
                    for t in range(p):
                        if j + t * n > cutoff:
                            break
                        g[j + t * n] += f[j]
            f = g
    return f


# ---------------------------------------------------------------------------
# dual gradings


def conjugate_roots(spec) -> list:
    """Real roots of the dilation polynomial other than the chosen dilation."""
    ring = spec.degree_ring()
    if ring is None:
        raise StructureError("ungraded algebra")
    coeffs = [float(c) for c in reversed(spec.lambda_minpoly)]
    roots = np.roots(coeffs)
    out = []
    for r in roots:
        if abs(r.imag) < 1e-9 and abs(r.real - ring.root) > 1e-6:
            out.append(float(r.real))
    return sorted(out, key=lambda r: -abs(r))


def mu_degree(x, mu: float) -> float:
    """deg_mu of a letter / word / homogeneous Lie element, the lambda-degree evaluated at mu."""
    if isinstance(x, Atom):
        deg = atom_degree(x)
        if deg is None:
            raise StructureError(f"{x} is not homogeneous")
        return float(sum(c * mu**i for i, c in enumerate(deg.poly)))
    if isinstance(x, Element):
        vals = {round(mu_degree(a, mu), 9) for a, _ in x.terms}
        if len(vals) != 1:
            raise StructureError(f"{x} is not homogeneous")
        return vals.pop()
    if isinstance(x, tuple):
        return sum(mu_degree(a, mu) for a in x)
    raise TypeError(type(x))


def mu_classify(monomial, spec, mu: Optional[float] = None) -> str:
    """'+', '0' or '-' according to the sign of deg_mu of a PBW monomial.

    `monomial` is a word (tuple of atoms) or an AssocElement with a single word; mu
    defaults to the largest conjugate root of the dilation polynomial."""
    if isinstance(monomial, AssocElement):
        if len(monomial.terms) != 1:
            raise ValueError("a single monomial is needed")
        monomial = monomial.terms[0][0]
    if mu is None:
        roots = conjugate_roots(spec)
        if not roots:
            raise ValueError("unsupported: only one grading is available")
        mu = roots[0]
    v = mu_degree(tuple(monomial), mu)
    if abs(v) < 1e-9:
        return "0"
    return "+" if v > 0 else "-"


# ---------------------------------------------------------------------------
# presentations


@dataclass
class Presentation:
    alphabet: dict  # letter -> AssocElement
    relators: list  # strings: words, or sums of words joined by '+'
    substitution: dict = field(default_factory=dict)  # letter -> word
    iterated: list = field(default_factory=list)  # relators whose sigma^n images are checked
    iterations: int = 0

    def substitute(self, w: str, times: int = 1) -> str:
        for _ in range(times):
            w = "".join(self.substitution.get(ch, ch) for ch in w)
        return w

    def element(self, text: str) -> AssocElement:
        out = None
        for part in text.split("+"):
            part = part.strip()
            u = None
            for ch in part:
                g = self.alphabet[ch]
                u = g if u is None else u * g
            out = u if out is None else out + u
        return out

    def all_relators(self):
        rows = [(r, r) for r in self.relators]
        for r in self.iterated:
            for n in range(self.iterations + 1):
                name = r if n == 0 else f"sigma^{n}({r})"
                rows.append((name, self.substitute(r, n)))
        return rows


def verify_monomial_relations(pres: Presentation, n: int, cap: int = TRUNC_CAP) -> dict:
    """Relator name -> whether it truncates to 0 at level n."""
    out = {}
    for name, text in pres.all_relators():
        out[name] = not assoc_truncate(pres.element(text), n, cap=cap).any()
    return out


GRIGORCHUK_R0 = ["AA", "BB", "CC", "DD", "B+C+D", "BC", "CB", "BD", "DB", "CD", "DC", "DAD"]
GRIGORCHUK_SIGMA = {"A": "ACA", "B": "D", "C": "B", "D": "C"}


def grigorchuk_presentation(iterations: int = 3) -> Presentation:
    from .catalog import grigorchuk

    alg = algebra(grigorchuk().spec)
    letters = {ch: lift(alg.gen(ch.lower())) for ch in "ABCD"}
    return Presentation(letters, list(GRIGORCHUK_R0), dict(GRIGORCHUK_SIGMA), ["CACACAC", "DACACAD"], iterations)


def sidki_monomial_algebra() -> AssocAlgebra:
    """s -> [[0,0],[1,0]], t -> [[0,t],[0,s]] over F_2."""
    rec = {
        "s": [[{}, {}], [{(): 1}, {}]],
        "t": [[{}, {("t",): 1}], [{}, {("s",): 1}]],
    }
    return AssocAlgebra(2, 2, "sidki_monomial", recursion=rec)


def vanishing_monomials(A: AssocAlgebra, letters: Sequence, max_len: int, n: int, minimal: bool = True):
    """Words of length <= max_len that truncate to 0 at level n (only minimal ones by default)."""
    zero = []
    for L in range(1, max_len + 1):
        for w in itertools.product(letters, repeat=L):
            if minimal and any(_is_factor(z, w) for z in zero):
                continue
            if not assoc_truncate(A.word(w), n).any():
                zero.append(w)
    return zero


def _is_factor(z, w) -> bool:
    k = len(z)
    return any(w[i:i + k] == z for i in range(len(w) - k + 1))
