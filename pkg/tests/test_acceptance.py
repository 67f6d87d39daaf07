"""Acceptance criteria 1-17.

Each criterion records exactly one PASS/FAIL line (printed in the terminal summary).
Literal statements that do not hold are strict xfails recorded as FAIL; the corrected
readings that do hold are asserted separately."""

from fractions import Fraction

import pytest

from conftest import ACCEPTANCE
from sslie import verify
from sslie.analysis import hausdorff, level_image_dim
from sslie.catalog import get, grigorchuk, gupta_sidki, kaloujnine, psz
from sslie.groups import element, element_order, grigorchuk_group, gupta_sidki_group


def record(n, ok, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE[n] = line


def split(rows):
    literal = [r for r in rows if r.known]
    rest = [r for r in rows if not r.known]
    return literal, rest


def summary(rows):
    return "; ".join(f"{r.entry} {r.check}: {r.status}" for r in rows)


# -- 1-4: dimensions and Hausdorff dimensions ------------------------------


def test_c01_gupta_sidki_dims():
    spec = gupta_sidki().spec
    got = {n: level_image_dim(spec, n) for n in range(1, 7)}
    want = {1: 1, **{n: 2 * 3 ** (n - 2) + 1 for n in range(2, 7)}}
    rows = verify.c1_gupta_sidki()
    ok = got == want and all(r.ok for r in rows)
    record(1, ok, f"dims {got}")
    assert ok


def test_c02_grigorchuk_dims():
    un = {n: level_image_dim(grigorchuk().spec, n) for n in range(3, 10)}
    re = {n: level_image_dim(grigorchuk(True).spec, n) for n in range(3, 10)}
    ok = un == {n: 2 ** (n - 1) + 3 for n in un} and re == {n: 2 ** (n - 1) + n for n in re}
    ok = ok and all(r.ok for r in verify.c2_grigorchuk())
    record(2, ok, f"unrestricted {list(un.values())}, restricted {list(re.values())}")
    assert ok


def test_c03_psz_dims():
    parts = []
    ok = True
    for p, top in ((2, 6), (3, 5)):
        spec = psz(2, p).spec
        got = {n: level_image_dim(spec, n) for n in range(3, top + 1)}
        ok = ok and got == {n: (p - 1) * p ** (n - 3) + 2 for n in got} and got[3] == p + 1
        parts.append(f"p={p} {list(got.values())}")
    ok = ok and all(r.ok for p in (2, 3) for r in verify.c3_psz(p))
    record(3, ok, ", ".join(parts))
    assert ok


def test_c04_hausdorff():
    cases = [
        (gupta_sidki().spec, (2, 6), Fraction(4, 9)),
        (grigorchuk().spec, (3, 9), Fraction(1, 2)),
        (psz(2, 2).spec, (3, 6), Fraction(1, 8)),
        (psz(2, 3).spec, (3, 5), Fraction(4, 27)),
    ]
    got = []
    ok = True
    for spec, window, want in cases:
        rep = hausdorff(spec, window)
        # the 3-point fit must reproduce every computed level
        fits = rep.alpha is not None and all(rep.alpha * spec.d**n + rep.beta == v for n, v in rep.dims.items())
        ok = ok and fits and rep.value == want
        got.append(f"{spec.name} {rep.value}")
    ok = ok and all(r.ok for name in ("gupta_sidki", "grigorchuk", "psz", "psz_2_3") for r in verify.c4(name))
    record(4, ok, ", ".join(got))
    assert ok


# -- 5-9: rows with literal deviations --------------------------------------

C5 = ("gupta_sidki", "grigorchuk", "psz", "psz_2_3", "psz_3_2", "psz_3_3")
C6 = ("gupta_sidki", "grigorchuk", "psz", "psz_2_3")
C7 = ("gupta_sidki", "grigorchuk", "psz", "psz_2_3", "psz_3_2")


def _rows(fn, names):
    return [r for name in names for r in fn(name)]


@pytest.mark.xfail(strict=True, reason="the Grigorchuk nucleus is span{a+c, a+d}, not span{a,b,d}")
def test_c05_nuclei_literal():
    literal, rest = split(_rows(verify.c5, C5))
    ok = all(r.ok for r in literal + rest)
    record(5, ok, summary([r for r in literal + rest if not r.ok]) + " (other nuclei match)")
    assert ok


def test_c05_nuclei_corrected():
    _, rest = split(_rows(verify.c5, C5))
    assert rest and all(r.ok for r in rest), summary(rest)


@pytest.mark.xfail(strict=True, reason="GS holds up to the unit -1; Grigorchuk [[b,e],b] is 0")
def test_c06_branching_literal():
    literal, rest = split(_rows(verify.c6, C6))
    ok = all(r.ok for r in literal + rest)
    record(6, ok, summary([r for r in literal if not r.ok]) + "; corrected witnesses pass")
    assert ok


def test_c06_branching_corrected():
    _, rest = split(_rows(verify.c6, C6))
    assert len(rest) >= 5 and all(r.ok for r in rest), summary(rest)


@pytest.mark.xfail(strict=True, reason="Grigorchuk b is not 3-evanescent")
def test_c07_nil_certificates_literal():
    literal, rest = split(_rows(verify.c7, C7))
    ok = all(r.ok for r in literal + rest)
    record(7, ok, summary([r for r in literal if not r.ok]) + "; GS and PSZ certificates and a^[p] = 0 pass")
    assert ok


def test_c07_nil_certificates_other_rows():
    _, rest = split(_rows(verify.c7, C7))
    assert all(r.ok for r in rest), summary(rest)


@pytest.mark.xfail(strict=True, reason="nil_index_at_level(a+t, n) equals n")
def test_c08_fg_literal():
    literal, rest = split(verify.c8())
    ok = all(r.ok for r in literal + rest)
    record(8, ok, summary([r for r in literal if not r.ok]) + f" [{literal[0].detail}]; expansion part passes")
    assert ok


def test_c08_fg_corrected():
    _, rest = split(verify.c8())
    assert len(rest) == 2 and all(r.ok for r in rest), summary(rest)


@pytest.mark.xfail(strict=True, reason="psi'((d^2 v)^3) is not lower triangular with d^2 v; (d^2 v)^9 = 0")
def test_c09_psz_assoc_literal():
    literal, rest = split(verify.c9())
    ok = all(r.ok for r in literal + rest)
    record(9, ok, "literal psi' shape and powers fail; corrected witness (vd)^2 with -vd at (3,3) passes")
    assert ok


def test_c09_psz_assoc_corrected():
    _, rest = split(verify.c9())
    assert len(rest) == 2 and all(r.ok for r in rest), summary(rest)


# -- 10-17 ------------------------------------------------------------------


def _all_ok(n, rows, extra=""):
    ok = bool(rows) and all(r.ok for r in rows)
    record(n, ok, (extra + " " if extra else "") + "; ".join(f"{r.check}: {r.detail}" for r in rows)[:160])
    assert ok, summary(rows)


def test_c10_grigorchuk_envelope():
    _all_ok(10, verify.c10())


def test_c11_presentations():
    _all_ok(11, verify.c11_grigorchuk() + verify.c11_sidki())


def test_c12_group_to_lie():
    _all_ok(12, verify.c12("gupta_sidki_group") + verify.c12("grigorchuk_group"))


def test_c13_group_orders():
    G, S = grigorchuk_group(), gupta_sidki_group()
    want = [(G, "a", 2), (G, "b", 2), (G, "c", 2), (G, "d", 2), (G, "a*b", 16), (S, "t", 3), (S, "a*t", 9)]
    direct = all(element_order(element(g, w)).value == o for g, w, o in want)
    rows = verify.c13("gupta_sidki_group") + verify.c13("grigorchuk_group")
    ok = direct and all(r.ok for r in rows)
    record(13, ok, ", ".join(f"{w}={o}" for _, w, o in want))
    assert ok


def test_c14_graded_dims():
    _all_ok(14, verify.c14_grigorchuk() + verify.c14_gupta_sidki())


def test_c14_alpha_oracle_values():
    # alpha_1..4 = 1, 2, 5, 12; n-1 = sum k_i alpha_i with k_i in {0,1,2}
    counts = verify.alpha_count(8)
    assert counts[2] == 1  # 1 = alpha_1
    assert counts[3] == 2  # 2 = 2*alpha_1 = alpha_2


def test_c15_kaloujnine():
    got = {}
    for p in (2, 3):
        spec = kaloujnine(p, 6).spec
        got[p] = [level_image_dim(spec, n) for n in range(1, 7)]
        assert got[p] == [sum(p**i for i in range(n)) for n in range(1, 7)]
    _all_ok(15, verify.c15(2) + verify.c15(3), f"p=2 {got[2]}, p=3 {got[3]};")


def test_c16_property_suites():
    rows = verify.c16(100)
    _all_ok(16, rows, "100 seeded cases per suite (hypothesis suites in test_properties.py);")


def test_c17_growth():
    rows = verify.c17()
    assert len(rows) == 3  # slope plus one corridor row per characteristic
    _all_ok(17, rows)
