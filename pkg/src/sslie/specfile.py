"""Line-based text format for algebra and group specs.

    kind: algebra
    name: gupta_sidki_3
    p: 3
    d: 3
    restricted: true
    lambda_minpoly: -1, -2, 1
    lambda_root_interval: 1.5, 4.0
    generator: a
      degree: 1
      der: 1, 0, 0
    generator: t
      degree: -1, 1
      psi: 0, 1, 0 -> a
      psi: 0, 0, 1 -> t

Groups use `kind: group`, and each generator carries `perm: n` and
`coords: w_0 | w_1 | ...`.  Blank lines and lines starting with '#' are ignored.
dump() writes the canonical form, so parse(dump(s)) == s and dump(parse(t)) == t for
canonical t.
"""

from __future__ import annotations

import re
from typing import List, Optional, Tuple

from .core import AlgebraSpec, GeneratorSpec
from .ground import StructureError, TruncPoly
from .groups import GroupGen, GroupSpec, parse_word, word_str


class SpecFileError(ValueError):
    def __init__(self, line: int, key: str, msg: str):
        super().__init__(f"line {line}: key '{key}': {msg}")
        self.line, self.key = line, key


TOP_ALGEBRA = ("kind", "name", "p", "d", "restricted", "lambda_minpoly", "lambda_root_interval", "active", "family")
GEN_ALGEBRA = ("degree", "der", "psi")
TOP_GROUP = ("kind", "name", "p")
GEN_GROUP = ("perm", "coords")


def _lines(text: str):
    for i, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        indented = raw[:1] in (" ", "\t")
        if ":" not in raw:
            raise SpecFileError(i, raw.strip(), "expected 'key: value'")
        key, _, val = raw.strip().partition(":")
        yield i, indented, key.strip(), val.strip()


def _ints(i, key, val) -> List[int]:
    try:
        return [int(x) for x in val.replace(",", " ").split()]
    except ValueError:
        raise SpecFileError(i, key, f"expected integers, got {val!r}") from None


def _floats(i, key, val) -> List[float]:
    try:
        return [float(x) for x in val.replace(",", " ").split()]
    except ValueError:
        raise SpecFileError(i, key, f"expected numbers, got {val!r}") from None


def _bool(i, key, val) -> bool:
    if val.lower() in ("true", "yes", "1"):
        return True
    if val.lower() in ("false", "no", "0"):
        return False
    raise SpecFileError(i, key, f"expected true/false, got {val!r}")


_TERM = re.compile(r"^(-?)\s*(?:(\d+)\s*\*\s*)?([A-Za-z_][A-Za-z_0-9']*)$")


def _combo(i, key, text, p) -> tuple:
    out = {}
    text = re.sub(r"\s*-\s*", " + -", text.strip())
    for part in re.split(r"\s*\+\s*", text):
        part = part.strip()
        if not part:
            continue
        m = _TERM.match(part)
        if not m:
            raise SpecFileError(i, key, f"bad linear combination term {part!r}")
        c = int(m.group(2)) if m.group(2) else 1
        if m.group(1):
            c = -c
        out[m.group(3)] = (out.get(m.group(3), 0) + c) % p
    if not out:
        raise SpecFileError(i, key, "empty linear combination")
    return tuple(sorted((n, c) for n, c in out.items() if c))


def parse(text: str):
    """AlgebraSpec or GroupSpec."""
    items = list(_lines(text))
    if not items:
        raise SpecFileError(1, "kind", "empty spec")
    i0, _, k0, v0 = items[0]
    if k0 != "kind":
        raise SpecFileError(i0, k0, "the first key must be 'kind'")
    if v0 == "algebra":
        return _parse_algebra(items)
    if v0 == "group":
        return _parse_group(items)
    raise SpecFileError(i0, "kind", f"unknown kind {v0!r} (algebra or group)")


def _split(items, top_keys, gen_keys):
    top, gens = {}, []
    for i, indented, key, val in items:
        if key == "generator":
            if indented:
                raise SpecFileError(i, key, "generator blocks start unindented")
            if not val:
                raise SpecFileError(i, key, "generator needs a name")
            gens.append((i, val, []))
        elif indented:
            if not gens:
                raise SpecFileError(i, key, "indented key outside a generator block")
            if key not in gen_keys:
                raise SpecFileError(i, key, f"unknown generator key (allowed: {', '.join(gen_keys)})")
            gens[-1][2].append((i, key, val))
        else:
            if key not in top_keys:
                raise SpecFileError(i, key, f"unknown key (allowed: {', '.join(top_keys + ('generator',))})")
            if key in top:
                raise SpecFileError(i, key, "duplicate key")
            top[key] = (i, val)
    return top, gens


def _need(top, key, last_line):
    if key not in top:
        raise SpecFileError(last_line, key, "missing required key")
    return top[key]


def _parse_algebra(items) -> AlgebraSpec:
    top, gens = _split(items, TOP_ALGEBRA, GEN_ALGEBRA)
    last = items[-1][0]
    name = top.get("name", (0, "spec"))[1]
    i, v = _need(top, "p", last)
    p = _ints(i, "p", v)
    if len(p) != 1:
        raise SpecFileError(i, "p", "expected one integer")
    p = p[0]
    i, v = _need(top, "d", last)
    d = _ints(i, "d", v)
    if len(d) != 1:
        raise SpecFileError(i, "d", "expected one integer")
    d = d[0]
    restricted = _bool(top["restricted"][0], "restricted", top["restricted"][1]) if "restricted" in top else False
    minpoly = tuple(_ints(top["lambda_minpoly"][0], "lambda_minpoly", top["lambda_minpoly"][1])) \
        if "lambda_minpoly" in top else None
    interval = None
    if "lambda_root_interval" in top:
        li, lv = top["lambda_root_interval"]
        interval = tuple(_floats(li, "lambda_root_interval", lv))
        if len(interval) != 2 or not interval[0] < interval[1]:
            raise SpecFileError(li, "lambda_root_interval", "expected two increasing numbers")
    active = tuple(top["active"][1].replace(",", " ").split()) if "active" in top else None
    family = ()
    if "family" in top:
        fi, fv = top["family"]
        fam = []
        for tok in fv.replace(",", " ").split():
            nm, _, pos = tok.partition("@")
            if not pos.lstrip("-").isdigit():
                raise SpecFileError(fi, "family", f"expected name@position, got {tok!r}")
            fam.append((nm, int(pos)))
        family = tuple(fam)
    if not gens:
        raise SpecFileError(last, "generator", "no generators declared")
    declared = {gname for _, gname, _ in gens}
    out = []
    for gi, gname, body in gens:
        degree, der, psi = None, None, []
        for i, key, val in body:
            if key == "degree":
                if degree is not None:
                    raise SpecFileError(i, key, "duplicate key")
                degree = tuple(_ints(i, key, val))
            elif key == "der":
                if der is not None:
                    raise SpecFileError(i, key, "duplicate key")
                cs = _ints(i, key, val)
                if len(cs) > d:
                    raise SpecFileError(i, key, f"at most {d} coefficients")
                der = TruncPoly.from_list(p, d, cs)
            else:
                poly_s, arrow, target = val.partition("->")
                if not arrow:
                    raise SpecFileError(i, key, "expected 'coefficients -> combination'")
                cs = _ints(i, key, poly_s)
                if len(cs) > d:
                    raise SpecFileError(i, key, f"at most {d} coefficients")
                combo = _combo(i, key, target, p)
                for ref, _ in combo:
                    if ref not in declared:
                        raise SpecFileError(i, key, f"undeclared generator {ref!r}")
                psi.append((TruncPoly.from_list(p, d, cs), combo))
        out.append(GeneratorSpec(gname, tuple(psi), der, degree))
    try:
        return AlgebraSpec(name, p, d, tuple(out), restricted=restricted, lambda_minpoly=minpoly,
                           lambda_interval=interval, active=active, family=family)
    except (StructureError, ValueError) as e:
        raise SpecFileError(gens[0][0], "generator", str(e)) from None


def _parse_group(items) -> GroupSpec:
    top, gens = _split(items, TOP_GROUP, GEN_GROUP)
    last = items[-1][0]
    name = top.get("name", (0, "group"))[1]
    i, v = _need(top, "p", last)
    pv = _ints(i, "p", v)
    if len(pv) != 1:
        raise SpecFileError(i, "p", "expected one integer")
    p = pv[0]
    if not gens:
        raise SpecFileError(last, "generator", "no generators declared")
    out = []
    for gi, gname, body in gens:
        perm, coords = 0, None
        for i, key, val in body:
            if key == "perm":
                pv = _ints(i, key, val)
                if len(pv) != 1:
                    raise SpecFileError(i, key, "expected one integer")
                perm = pv[0] % p
            else:
                parts = [s.strip() for s in val.split("|")]
                if len(parts) != p:
                    raise SpecFileError(i, key, f"expected {p} coordinates separated by '|'")
                try:
                    coords = tuple(parse_word(s) for s in parts)
                except ValueError as e:
                    raise SpecFileError(i, key, str(e)) from None
        if coords is None:
            raise SpecFileError(gi, "coords", f"generator {gname} has no coords")
        out.append(GroupGen(gname, coords, perm))
    try:
        return GroupSpec(name, p, tuple(out))
    except (StructureError, ValueError) as e:
        raise SpecFileError(gens[0][0], "generator", str(e)) from None


def _ilist(xs) -> str:
    return ", ".join(str(int(x)) for x in xs)


def _combo_str(combo) -> str:
    return " + ".join(n if c == 1 else f"{c}*{n}" for n, c in combo)


def dump(spec) -> str:
    if isinstance(spec, GroupSpec):
        lines = ["kind: group", f"name: {spec.name}", f"p: {spec.p}"]
        for g in spec.generators:
            lines.append(f"generator: {g.name}")
            lines.append(f"  perm: {g.perm}")
            lines.append("  coords: " + " | ".join(word_str(w) for w in g.coords))
        return "\n".join(lines) + "\n"
    lines = ["kind: algebra", f"name: {spec.name}", f"p: {spec.p}", f"d: {spec.d}",
             f"restricted: {'true' if spec.restricted else 'false'}"]
    if spec.lambda_minpoly is not None:
        lines.append(f"lambda_minpoly: {_ilist(spec.lambda_minpoly)}")
    if spec.lambda_interval is not None:
        lines.append("lambda_root_interval: " + ", ".join(repr(float(x)) for x in spec.lambda_interval))
    if spec.active:
        lines.append("active: " + ", ".join(spec.active))
    if spec.family:
        lines.append("family: " + ", ".join(f"{n}@{k}" for n, k in spec.family))
    for g in spec.generators:
        lines.append(f"generator: {g.name}")
        if g.degree is not None:
            lines.append(f"  degree: {_ilist(g.degree)}")
        if g.der is not None:
            lines.append(f"  der: {_ilist(g.der.coeffs)}")
        for poly, combo in g.psi:
            lines.append(f"  psi: {_ilist(poly.coeffs)} -> {_combo_str(combo)}")
    return "\n".join(lines) + "\n"


def load(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
