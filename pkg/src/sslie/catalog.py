"""Constructors for the example algebras and groups, with their expected data."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import AlgebraSpec, GeneratorSpec, algebra, bracket, make_generator
from .ground import StructureError, TruncPoly, check_prime


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    spec: Optional[AlgebraSpec] = None
    group: object = None
    expect: dict = field(default_factory=dict, compare=False, hash=False)
    extra: dict = field(default_factory=dict, compare=False, hash=False)


def _mono(p, d, i, c=1):
    return TruncPoly.monomial(p, d, i, c)


def _ad_power(x, y, k):
    """[[x^k, y]] = ad(x)^k y."""
    for _ in range(k):
        y = bracket(x, y)
    return y


# ---------------------------------------------------------------------------
# Lie algebras


def gupta_sidki(p: int = 3) -> CatalogEntry:
    check_prime(p)
    if p == 2:
        raise StructureError("the Gupta-Sidki recursion needs p >= 3")
    a = make_generator(p, p, "a", der=[1], degree=(1,))
    t = make_generator(p, p, "t", terms=[(_mono(p, p, 1), "a"), (_mono(p, p, p - 1), "t")], degree=(-1, 1))
    spec = AlgebraSpec(
        f"gupta_sidki_{p}", p, p, (a, t), restricted=True,
        lambda_minpoly=(2 - p, -2, 1), lambda_interval=(1.5, float(p + 1)),
    )
    expect = {
        "nucleus": ["a", "t"],
        "gk_bound": "log(p)/log(1+sqrt(p-1))",
    }
    if p == 3:
        expect.update(
            dims={n: 2 * 3 ** (n - 2) + 1 for n in range(2, 7)} | {1: 1},
            hausdorff=Fraction(4, 9),
            branching=("[[a,t],t]", 2, "[a,t]"),
            nil_gens=["t", "[t,a]", "[[t,a],a]"],
            nil_ell=1,
        )
    return CatalogEntry(spec.name, spec, expect=expect)


def grigorchuk(restricted: bool = False) -> CatalogEntry:
    p = d = 2
    x = _mono(2, 2, 1)
    gens = (
        make_generator(2, 2, "a", der=[1], degree=(1,)),
        make_generator(2, 2, "b", terms=[(x, {"a": 1, "c": 1})], degree=(1,)),
        make_generator(2, 2, "c", terms=[(x, {"a": 1, "d": 1})], degree=(1,)),
        make_generator(2, 2, "d", terms=[(x, "b")], degree=(1,)),
    )
    name = "grigorchuk_restricted" if restricted else "grigorchuk"
    spec = AlgebraSpec(name, p, d, gens, restricted=restricted, lambda_minpoly=(-2, 1), lambda_interval=(1.5, 2.5))
    if restricted:
        dims = {n: 2 ** (n - 1) + n for n in range(3, 10)}
    else:
        dims = {n: 2 ** (n - 1) + 3 for n in range(3, 10)}
    expect = {
        "dims": dims,
        "hausdorff": Fraction(1, 2),
        "nucleus": ["a", "b", "d"],
        "branching": ("[[b,e],b]", 1, "[b,e]"),
        "nil_gens": ["b", "c", "[b,a]", "[c,a]"],
        "nil_ell": 3,
        "gk_bound": 1.0,
    }
    return CatalogEntry(name, spec, expect=expect, extra={"e": "a+c", "f": "a+d"})


def grigorchuk_prime() -> CatalogEntry:
    """L' = <b, e, f, f^2> with e = a+c and f = a+d, written self-similarly."""
    x = _mono(2, 2, 1)
    gens = (
        make_generator(2, 2, "b", terms=[(x, "e")], degree=(1,)),
        make_generator(2, 2, "e", terms=[(x, "f")], der=[1], degree=(1,)),
        make_generator(2, 2, "f", terms=[(x, "b")], der=[1], degree=(1,)),
    )
    spec = AlgebraSpec("grigorchuk_prime", 2, 2, gens, restricted=True, lambda_minpoly=(-2, 1), lambda_interval=(1.5, 2.5))
    return CatalogEntry(spec.name, spec, expect={"recurrence": {"b": "f^[2]", "e": "[b,e]"}})


def grigorchuk_omega(prefix=(), period=((0, 1), (1, 0), (1, 1)), p: int = 2, lift_names=("u", "w")) -> CatalogEntry:
    """L_omega for an eventually periodic omega given by explicit lifts.

    Each lift is the pair (omega_i(u), omega_i(w)) on the basis u, w of k^2.
    State names are u0, w0, u1, w1, ...; the algebra is generated by u0, w0."""
    check_prime(p)
    lifts = list(prefix) + list(period)
    if not period:
        raise StructureError("omega needs a nonempty period")
    for lf in lifts:
        if len(lf) != 2 or not any(c % p for c in lf):
            raise StructureError("each lift must be a nonzero map k^2 -> k")
    npos = len(lifts)
    nxt = lambda i: i + 1 if i + 1 < npos else len(prefix)
    top = _mono(p, p, p - 1)
    gens = []
    family = []
    for i, lf in enumerate(lifts):
        for k, base in enumerate(lift_names):
            name = f"{base}{i}"
            der = [lf[k] % p] if lf[k] % p else None
            gens.append(make_generator(p, p, name, terms=[(top, f"{base}{nxt(i)}")], der=der, degree=(1,)))
            family.append((name, i))
    spec = AlgebraSpec(
        "grigorchuk_omega", p, p, tuple(gens), restricted=False,
        lambda_minpoly=(-p, 1), lambda_interval=(p - 0.5, p + 0.5),
        active=tuple(f"{b}0" for b in lift_names), family=tuple(family),
    )
    return CatalogEntry(spec.name, spec, expect={"maximal_class": True})


def fabrykowski_gupta(p: int = 3) -> CatalogEntry:
    check_prime(p)
    gens = (
        make_generator(p, p, "a", der=[1], degree=(1,)),
        make_generator(p, p, "t", terms=[(_mono(p, p, p - 1), {"a": 1, "t": 1})], degree=(1,)),
    )
    spec = AlgebraSpec(f"fabrykowski_gupta_{p}", p, p, gens, restricted=True,
                       lambda_minpoly=(-p, 1), lambda_interval=(p - 0.5, p + 0.5))
    return CatalogEntry(spec.name, spec, expect={"non_nil": "a+t", "power_image": (0, -1)})


def psz_names(m: int):
    return ["d"] if m == 2 else [f"d{i}" for i in range(1, m)]


def psz(m: int = 2, p: int = 2, restricted: bool = False) -> CatalogEntry:
    check_prime(p)
    if m < 2:
        raise StructureError("PSZ needs m >= 2")
    ds = psz_names(m)
    one = _mono(p, p, 0)
    gens = [make_generator(p, p, ds[0], der=[1], degree=(1,))]
    for n in range(1, m - 1):
        deg = [0] * n + [1]
        gens.append(make_generator(p, p, ds[n], terms=[(one, ds[n - 1])], degree=tuple(deg)))
    vdeg = [0] * (m - 1) + [1]
    gens.append(make_generator(p, p, "v", terms=[(one, ds[-1]), (_mono(p, p, p - 1), "v")], degree=tuple(vdeg)))
    minpoly = [1 - p] + [0] * (m - 2) + [-1, 1]
    spec = AlgebraSpec(f"psz_{m}_{p}" + ("_r" if restricted else ""), p, p, tuple(gens), restricted=restricted,
                       lambda_minpoly=tuple(minpoly), lambda_interval=(1.0 + 1e-9, float(p + 1)))
    expect = {"nucleus": ds + ["v"], "nil_ell": m}
    if m == 2:
        expect["dims"] = {n: (p - 1) * p ** (n - 3) + 2 for n in range(3, 7 if p == 2 else 6)}
        expect["hausdorff"] = Fraction((p - 1) ** 2, p**3)
    return CatalogEntry(spec.name, spec, expect=expect)


def psz_ideal_generators(entry: CatalogEntry):
    """Generators of <v>: ad(d_1)^{i_1}...ad(d_{m-1})^{i_{m-1}} v with exponents < p."""
    spec = entry.spec
    alg = algebra(spec)
    ds = [n for n in spec.names if n != "v"]
    out = [alg.gen("v")]
    for dname in ds:
        dd = alg.gen(dname)
        grown = []
        for e in out:
            cur = e
            for _ in range(spec.p - 1):
                cur = bracket(dd, cur)
                grown.append(cur)
        out = out + grown
    return out


def psz_branching(entry: CatalogEntry):
    """(k', mono exponent, k) with c = [v,[d,v]]."""
    spec = entry.spec
    alg = algebra(spec)
    p = spec.p
    d = alg.gen(psz_names(2)[0] if len(spec.names) == 2 else spec.names[0])
    v = alg.gen("v")
    c = bracket(v, bracket(d, v))
    if p == 2:
        kp = bracket(v, c)
    else:
        kp = bracket(bracket(d, v), _ad_power(d, c, p - 3))
    return kp, p - 1, c


def kaloujnine(p: int = 2, depth: int = 6) -> CatalogEntry:
    """Finite-depth model of the full special-derivation (tableau) algebra:
    tau_0 = D, tau_{k+1} = x^{p-1} (x) tau_k; enough generators for levels <= depth."""
    check_prime(p)
    top = _mono(p, p, p - 1)
    gens = [make_generator(p, p, "tau0", der=[1], degree=(1,))]
    for k in range(1, depth):
        gens.append(make_generator(p, p, f"tau{k}", terms=[(top, f"tau{k - 1}")], degree=(1,)))
    spec = AlgebraSpec(f"kaloujnine_{p}", p, p, tuple(gens), restricted=False,
                       lambda_minpoly=(-p, 1), lambda_interval=(p - 0.5, p + 0.5))
    from .groups import kaloujnine_group

    return CatalogEntry(spec.name, spec, group=kaloujnine_group(p, depth),
                        expect={"dims": {n: (p**n - 1) // (p - 1) for n in range(1, depth + 1)}})


def toy_maximal_class() -> CatalogEntry:
    """The 2-periodic L_omega over F_2 with lifts (1,0), (0,1)."""
    return grigorchuk_omega(prefix=(), period=((1, 0), (0, 1)), p=2)


# ---------------------------------------------------------------------------
# inflation and deflation


def inflate(spec: AlgebraSpec, s: str, ideal=None) -> AlgebraSpec:
    """Subalgebra of L wr k d_eps generated by M (x) 1 and s' = 1 (x) d_eps - s (x) eps^{p-1}.

    Realized self-similarly over the alphabet k[eps]/(eps^p) through its degree-1
    generators: m' -> eps^{p-1} (x) m for the generators m of M, and
    s' -> -eps^{p-1} (x) s + d_eps. Since ad(s')^{p-1} m' = (p-1)! (x) m = -1 (x) m, the
    subalgebra contains M (x) 1. `ideal` lists the generators of L lying in M (default:
    all but s). The grading is kept when the new generators come out in degree 1."""
    p = spec.p
    if spec.d != p:
        raise StructureError("inflation needs d = p")
    names = spec.names
    if s not in names:
        raise StructureError(f"{s!r} is not a generator")
    members = tuple(ideal) if ideal is not None else tuple(n for n in names if n != s)
    if s in members:
        raise StructureError("s must lie outside the ideal M")
    if not members:
        raise StructureError("selector defines no codimension-1 ideal")
    ring = spec.degree_ring() if spec.graded else None
    graded = ring is not None
    if graded:
        one_deg = ring.const(1)
        for m in members + (s,):
            g = spec.generator(m)
            if ring.const(1 - p) + ring.degree(g.degree).scale_by_lambda() != one_deg:
                graded = False
    old = [g if graded else GeneratorSpec(g.name, g.psi, g.der, None) for g in spec.generators]
    top = _mono(p, p, p - 1)
    deg1 = (1,) if graded else None
    new = [make_generator(p, p, f"{m}'", terms=[(top, m)], degree=deg1) for m in members]
    new.append(make_generator(p, p, f"{s}'", terms=[(_mono(p, p, p - 1, -1), s)], der=[1], degree=deg1))
    return AlgebraSpec(
        f"inflate_{spec.name}", p, p, tuple(old) + tuple(new), restricted=spec.restricted,
        lambda_minpoly=spec.lambda_minpoly if graded else None,
        lambda_interval=spec.lambda_interval if graded else None,
        active=tuple(f"{m}'" for m in members) + (f"{s}'",),
    )


def deflate_generators(spec: AlgebraSpec, s_prime: str):
    """Generators of (L')^down = k (s')^p + sum_n (L')_{pn}: (s')^[p] for s and
    -ad(s')^{p-1} m' for the other generators.

    Returns Elements of the inflated algebra whose expansions are 1 (x) (original generator)."""
    from .core import p_power

    alg = algebra(spec)
    sp = alg.gen(s_prime)
    out = {s_prime.rstrip("'"): p_power(sp)}
    for n in spec.active_names:
        if n != s_prime:
            e = alg.gen(n)
            for _ in range(spec.p - 1):
                e = bracket(sp, e)
            out[n.rstrip("'")] = -e
    return out


# ---------------------------------------------------------------------------

def sidki_monomial():
    from .envelope import sidki_monomial_algebra

    return CatalogEntry("sidki_monomial", None, group=sidki_monomial_algebra(), expect={"relators": ["s^2"]})


def gupta_sidki_group_entry():
    from .groups import gupta_sidki_group

    return CatalogEntry("gupta_sidki_group", None, group=gupta_sidki_group(),
                        expect={"orders": {"a": 3, "t": 3, "at": 9}})


def grigorchuk_group_entry():
    from .groups import grigorchuk_group

    return CatalogEntry("grigorchuk_group", None, group=grigorchuk_group(),
                        expect={"orders": {"a": 2, "b": 2, "c": 2, "d": 2, "ab": 16}})


ENTRIES = {
    "gupta_sidki": lambda: gupta_sidki(3),
    "grigorchuk": lambda: grigorchuk(False),
    "grigorchuk_restricted": lambda: grigorchuk(True),
    "grigorchuk_prime": grigorchuk_prime,
    "grigorchuk_omega": grigorchuk_omega,
    "fabrykowski_gupta": lambda: fabrykowski_gupta(3),
    "psz": lambda: psz(2, 2),
    "psz_2_3": lambda: psz(2, 3),
    "psz_3_2": lambda: psz(3, 2),
    "psz_3_3": lambda: psz(3, 3),
    "kaloujnine": lambda: kaloujnine(2),
    "kaloujnine_3": lambda: kaloujnine(3),
    "sidki_monomial": sidki_monomial,
    "gupta_sidki_group": gupta_sidki_group_entry,
    "grigorchuk_group": grigorchuk_group_entry,
}


def get(name: str) -> CatalogEntry:
    try:
        return ENTRIES[name]()
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(sorted(ENTRIES))}") from None
