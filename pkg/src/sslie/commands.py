"""Command drivers shared by the CLI and the HTTP service.

Every command takes a plain dict of parameters and returns a Result holding the
text that would be printed and an exit code: 0 success, 1 check failure, 2 usage
or parse error. Specs are given either as a catalog name (`spec`) or as the text
of a spec file (`spec_text`)."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from . import catalog, specfile
from .core import AlgebraSpec
from .ground import ResourceError, StructureError

OK, CHECK_FAILED, USAGE = 0, 1, 2


@dataclass
class Result:
    output: str
    exit_code: int = OK
    error: str = ""


class UsageError(ValueError):
    pass


def _spec_from(params, want: str = "algebra"):
    text = params.get("spec_text")
    name = params.get("spec")
    if text:
        obj = specfile.parse(text)
    elif name:
        try:
            entry = catalog.get(name)
        except KeyError as e:
            raise UsageError(str(e.args[0])) from None
        obj = entry.spec if want == "algebra" else entry.group
        if obj is None:
            raise UsageError(f"catalog entry {name!r} has no {want} spec")
    else:
        raise UsageError("a spec (catalog name or file) is required")
    is_alg = isinstance(obj, AlgebraSpec)
    if (want == "algebra") != is_alg:
        raise UsageError(f"expected a {want} spec")
    return obj


def parse_range(text, default_lo: int = 1) -> Tuple[int, int]:
    """'6' -> (default_lo, 6); '2..6' -> (2, 6)."""
    text = str(text).strip()
    m = re.fullmatch(r"(\d+)\s*\.\.\s*(\d+)", text)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
    elif text.isdigit():
        lo, hi = default_lo, int(text)
    else:
        raise UsageError(f"expected N or A..B, got {text!r}")
    if lo < 1 or hi < lo:
        raise UsageError(f"empty or invalid range {text!r}")
    return lo, hi


def split_top(text: str) -> List[str]:
    """Split on commas that are not inside brackets or parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if "".join(cur).strip():
        out.append("".join(cur).strip())
    return out


def _element(alg, text):
    try:
        return alg.element(text)
    except (ValueError, KeyError) as e:
        raise UsageError(f"cannot parse element {text!r}: {e}") from None


# ---------------------------------------------------------------------------


def cmd_dims(params) -> Result:
    from .analysis import dims_table, fit_dims

    spec = _spec_from(params)
    lo, hi = parse_range(params.get("levels", "6"))
    restricted = True if params.get("restricted") else None
    table = dims_table(spec, hi, lo, restricted)
    fit = fit_dims(table.dims(), spec.d) if hi - lo >= 2 else None
    if fit is not None:
        table.fit = _FitView(spec.d, fit[0], fit[1])
    return Result(table.to_csv())


@dataclass
class _FitView:
    d: int
    alpha: object
    beta: object


def cmd_hausdorff(params) -> Result:
    from .analysis import hausdorff

    spec = _spec_from(params)
    window = parse_range(params.get("window", "2..6"))
    if window[1] - window[0] < 2:
        raise UsageError("the window needs at least 3 levels")
    rep = hausdorff(spec, window, relative=params.get("relative", True))
    lines = [str(rep), "n,dim,fitted"]
    for n, dim in sorted(rep.dims.items()):
        fitted = "" if rep.alpha is None else str(rep.alpha * spec.d**n + rep.beta)
        lines.append(f"{n},{dim},{fitted}")
    return Result("\n".join(lines) + "\n", OK if rep.conclusive else CHECK_FAILED)


def cmd_nucleus(params) -> Result:
    from .analysis import nucleus

    spec = _spec_from(params)
    rep = nucleus(spec, int(params.get("dim_cap", 64)), int(params.get("iter_cap", 64)))
    lines = [f"contracting: {'yes' if rep.contracting else 'no'}"]
    if rep.contracting:
        lines.append(f"dim: {rep.dim}")
        lines.append("basis:")
        lines += [f"  {e}" for e in rep.basis]
        lines.append(f"transient: {rep.transient}")
        lines.append(f"period: {rep.period}")
    for t in rep.trace:
        lines.append(f"# {t}")
    return Result("\n".join(lines) + "\n", OK if rep.contracting else CHECK_FAILED)


def cmd_nilcert(params) -> Result:
    from .core import algebra
    from .nilcert import nil_certificate

    spec = _spec_from(params)
    alg = algebra(spec)
    gens_text = params.get("gens")
    names = split_top(gens_text) if gens_text else list(spec.names)
    gens = [_element(alg, g) for g in names]
    ell = int(params.get("ell", 1))
    if ell < 1:
        raise UsageError("ell must be >= 1")
    cert = nil_certificate(spec, gens, ell)
    return Result(cert.to_text(), OK if cert.ok else CHECK_FAILED)


def cmd_nilorder(params) -> Result:
    from .core import TRUNC_CAP, algebra
    from .nilcert import nil_index_at_level

    spec = _spec_from(params)
    if not spec.restricted:
        raise UsageError("nil orders need a restricted spec (the p-map)")
    alg = algebra(spec)
    text = params.get("element")
    if not text:
        raise UsageError("--element is required")
    e = _element(alg, text)
    lo, hi = parse_range(params.get("level", "4"))
    s_cap = int(params.get("cap", 16))
    lines = [f"# element {e}", "level,nil_index"]
    for n in range(lo, hi + 1):
        if spec.d**n > TRUNC_CAP:
            raise ResourceError(f"level {n} needs {spec.d ** n}x{spec.d ** n} matrices (cap {TRUNC_CAP})")
        lines.append(f"{n},{nil_index_at_level(e, n, s_cap)}")
    return Result("\n".join(lines) + "\n")


def cmd_poincare(params) -> Result:
    from .analysis import graded_dims
    from .envelope import poincare_u

    spec = _spec_from(params)
    cutoff = int(params.get("cutoff", 20))
    if cutoff < 1:
        raise UsageError("cutoff must be >= 1")
    char = int(params.get("char", 0))
    gd = graded_dims(spec, cutoff)
    dims: Dict[float, int] = {}
    for r, v in gd.by_real():
        dims[r] = dims.get(r, 0) + v
    return Result(poincare_u(dims, cutoff, char).to_csv())


def cmd_group(params) -> Result:
    from .groups import act_word, element, element_order

    G = _spec_from(params, "group")
    action = params.get("action")
    word = params.get("word")
    if not word:
        raise UsageError("a group word is required")
    try:
        g = element(G, word)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if action == "order":
        rep = element_order(g, int(params.get("cap", 20000)))
        val = rep.value if rep.value is not None else ("infinite" if rep.infinite else f">= {rep.lower_bound}")
        out = f"order({word}) = {val}\n" + (f"# {rep.reason}\n" if rep.reason else "")
        return Result(out, OK if rep.finite or rep.infinite else CHECK_FAILED)
    if action == "act":
        raw = params.get("vertex") or ""
        try:
            v = tuple(int(x) for x in raw.replace(",", " ").split())
        except ValueError:
            raise UsageError(f"expected a vertex like 0,1,1, got {raw!r}") from None
        if any(not 0 <= x < G.p for x in v):
            raise UsageError(f"vertex letters must lie in 0..{G.p - 1}")
        return Result(",".join(str(x) for x in act_word(g, v)) + "\n")
    raise UsageError("group action must be 'order' or 'act'")


def cmd_verify_paper(params) -> Result:
    from . import verify

    entry, all_ = params.get("entry"), params.get("all")
    if bool(entry) == bool(all_):
        raise UsageError("give exactly one of --entry NAME or --all")
    try:
        rows = verify.run_all() if all_ else verify.run_entry(entry)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None
    return Result(verify.to_csv(rows), verify.exit_code(rows, bool(params.get("strict"))))


COMMANDS: Dict[str, Callable[[dict], Result]] = {
    "dims": cmd_dims,
    "hausdorff": cmd_hausdorff,
    "nucleus": cmd_nucleus,
    "nilcert": cmd_nilcert,
    "nilorder": cmd_nilorder,
    "poincare": cmd_poincare,
    "group": cmd_group,
    "verify-paper": cmd_verify_paper,
}


def run(command: str, params: Optional[dict] = None) -> Result:
    params = dict(params or {})
    fn = COMMANDS.get(command)
    if fn is None:
        return Result("", USAGE, f"unknown command {command!r}")
    try:
        return fn(params)
    except specfile.SpecFileError as e:
        return Result("", USAGE, f"spec error: {e}")
    except UsageError as e:
        return Result("", USAGE, str(e))
    except ResourceError as e:
        return Result("", CHECK_FAILED, f"resource cap: {e}")
    except (StructureError, ValueError) as e:
        return Result("", CHECK_FAILED, str(e))
