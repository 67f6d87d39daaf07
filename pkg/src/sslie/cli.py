"""Command-line front end.

SPEC arguments are a catalog entry name or a path to a spec file. With --url the
command is sent to a running `sslie.service` instead of being computed here.
Exit codes: 0 success, 1 check failure, 2 usage or parse error."""

from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

from .commands import Result, run


def _spec_params(arg: str) -> dict:
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return {"spec_text": fh.read()}
    return {"spec": arg}


def build_parser() -> argparse.ArgumentParser:
    from .catalog import ENTRIES

    names = ", ".join(sorted(ENTRIES))
    ap = argparse.ArgumentParser(prog="sslie", description="Self-similar Lie algebras: computations and checks.")
    ap.add_argument("--url", help="send the command to a running service at this base URL")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")
    spec_help = f"spec file or catalog name ({names})"

    p = sub.add_parser("dims", help="level image dimensions as CSV")
    p.add_argument("spec", help=spec_help)
    p.add_argument("--levels", default="6", help="N (levels 1..N) or A..B")
    p.add_argument("--restricted", action="store_true", help="use the restricted closure")

    p = sub.add_parser("hausdorff", help="Hausdorff dimension from an exact fit")
    p.add_argument("spec", help=spec_help)
    p.add_argument("--window", default="2..6", help="levels A..B used for the fit")
    p.add_argument("--relative", action=argparse.BooleanOptionalAction, default=True,
                   help="measure inside the full self-similar algebra (default) or inside W(X) with derivations")

    p = sub.add_parser("nucleus", help="nucleus basis listing")
    p.add_argument("spec", help=spec_help)
    p.add_argument("--dim-cap", type=int, default=64)
    p.add_argument("--iter-cap", type=int, default=64)

    p = sub.add_parser("nilcert", help="nil certificate from bounded, evanescent generators")
    p.add_argument("spec", help=spec_help)
    p.add_argument("--gens", help="comma-separated elements, e.g. 't,[t,a]' (default: the generators)")
    p.add_argument("--ell", type=int, default=1)

    p = sub.add_parser("nilorder", help="truncated nil index of an element")
    p.add_argument("spec", help=spec_help)
    p.add_argument("--element", required=True)
    p.add_argument("--level", default="4", help="N (levels 1..N) or A..B")
    p.add_argument("--cap", type=int, default=16, help="largest s tried for x^(p^s)")

    p = sub.add_parser("poincare", help="Poincare series of the enveloping algebra as CSV")
    p.add_argument("spec", help=spec_help)
    p.add_argument("--cutoff", type=int, default=20)
    p.add_argument("--char", type=int, default=0, help="0, or p for the restricted enveloping algebra")

    p = sub.add_parser("group", help="orders and tree action in a self-similar group")
    p.add_argument("spec", help=spec_help)
    gsub = p.add_subparsers(dest="action", required=True, metavar="ACTION")
    q = gsub.add_parser("order", help="order of a group word")
    q.add_argument("word", help="e.g. a*b or a*t^-1")
    q.add_argument("--cap", type=int, default=20000, help="state graph size cap")
    q = gsub.add_parser("act", help="image of a vertex under a group word")
    q.add_argument("word")
    q.add_argument("vertex", help="letters, e.g. 0,1,1")

    p = sub.add_parser("verify-paper", help="pass/fail table over the acceptance checks")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--entry", help="one catalog entry (or 'properties')")
    g.add_argument("--all", action="store_true")
    p.add_argument("--strict", action="store_true", help="known deviations also count as failures")
    return ap


def params_from_args(args) -> dict:
    params = {k.replace("-", "_"): v for k, v in vars(args).items() if k not in ("command", "url") and v is not None}
    if "spec" in params:
        params.update(_spec_params(params.pop("spec")))
    return params


def run_remote(url: str, command: str, params: dict, client=None) -> Result:
    """POST to the service; `client` is any httpx-style client (default: httpx itself)."""
    import httpx

    extra = {}
    if client is None:
        client, extra = httpx, {"timeout": None}
    try:
        r = client.post(url.rstrip("/") + f"/run/{command}", json=params, **extra)
    except httpx.HTTPError as e:
        return Result("", 2, f"cannot reach {url}: {e}")
    if r.status_code == 422:
        return Result("", 2, f"request rejected: {r.text}")
    r.raise_for_status()
    data = r.json()
    return Result(data["output"], data["exit_code"], data.get("error", ""))


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    params = params_from_args(args)
    res = run_remote(args.url, args.command, params) if args.url else run(args.command, params)
    if res.output:
        sys.stdout.write(res.output)
    if res.error:
        sys.stderr.write(f"sslie: {res.error}\n")
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
