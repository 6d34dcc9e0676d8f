"""Command-line front end: ``tightforms <command> [options]``.

Each command builds a JSON-serialisable payload (rows plus a summary), which
is optionally cached and then rendered as JSON lines, CSV or plain text.
Rendering only ever sees the payload, so cached and fresh runs print the same
bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional

from . import __version__
from .cache import ResultCache
from .constructions import (BAROWSKY, HALMOS, bounds_table, fixed_Ln, make_Kuv, make_Luv,
                            thm42_construct)
from .diagonal import enumerate_new_tight, make_Xn, make_Yn
from .errors import CutoffTooSmall, FormError
from .escalation import escalation_search, quaternary_census
from .forms import GramForm, represents

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_ERROR, EXIT_CUTOFF, EXIT_CACHE = 0, 1, 2, 3, 4


class CacheMismatch(Exception):
    pass


# ----------------------------------------------------------------------------
# form input


def parse_diag(text: str) -> GramForm:
    try:
        coeffs = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise FormError(f"bad --diag value {text!r}") from None
    if not coeffs:
        raise FormError("--diag needs at least one coefficient")
    return GramForm.diagonal(coeffs)


def parse_gram(text: str) -> GramForm:
    """``k:a11,a12,...,akk`` in row-major order."""
    head, sep, body = text.partition(":")
    try:
        k = int(head)
        vals = [int(t) for t in body.split(",") if t.strip()]
    except ValueError:
        raise FormError(f"bad --gram value {text!r}") from None
    if not sep or k < 1 or len(vals) != k * k:
        raise FormError(f"--gram {text!r}: expected {k}:<{k * k if k > 0 else '?'} entries>")
    return GramForm([vals[i * k:(i + 1) * k] for i in range(k)])


def _form_arg(args) -> GramForm:
    if args.diag is not None:
        return parse_diag(args.diag)
    if args.gram is not None:
        return parse_gram(args.gram)
    raise FormError("give --diag or --gram")


def _gram_text(G: GramForm) -> str:
    return f"{G.dim}:" + ",".join(map(str, G.row_major()))


# ----------------------------------------------------------------------------
# payloads


def payload_represents(args) -> dict:
    G = _form_arg(args)
    w = represents(G, args.m, budget=args.budget)
    row = {"form": _gram_text(G), "m": args.m, "represented": w is not None,
           "witness": list(w.vector) if w else None}
    return {"kind": "represents", "rows": [row], "summary": {}}


def payload_enumerate(args) -> dict:
    e = enumerate_new_tight(args.n, args.cutoff, args.rank_cap)
    rows = [{"n": e.n, "rank": c.rank, "coeffs": ",".join(map(str, c.coeffs())),
             "status": c.status, "verify_bound": c.verify_bound} for c in e.certificates]
    levels = [{"rank": lv.rank, **lv.counts()} for lv in e.levels]
    return {"kind": "enumerate", "rows": rows,
            "summary": {"n": e.n, "cutoff": e.cutoff, "count": len(rows), "levels": levels,
                        "pruned": [",".join(map(str, p)) for p in e.pruned]}}


def payload_escalate(args) -> dict:
    res = escalation_search(args.n, args.rank, args.verify, checkpoint_dir=args.checkpoint,
                            threads=args.threads, budget=args.budget, overlattices=args.overlattices)
    rows = [{"n": args.n, "rank": c.rank, "det": c.form.det, "gram": _gram_text(c.form),
             "status": c.status, "verify_bound": c.verify_bound} for c in res.certificates]
    sizes = {str(k): len(v) for k, v in sorted(res.ranks.items())}
    return {"kind": "escalate", "rows": rows,
            "summary": {"n": args.n, "rank": args.rank, "verify_bound": args.verify,
                        "count": len(rows), "nodes_per_rank": sizes}}


def payload_census(args) -> dict:
    rows = []
    for n in args.n:
        m1, m2, _ = quaternary_census(n, args.verify, checkpoint_dir=args.checkpoint,
                                      threads=args.threads, budget=args.budget)
        rows.append({"n": n, "m1": m1, "m2": m2, "verify_bound": args.verify})
    return {"kind": "census", "rows": rows, "summary": {}}


def payload_bounds(args) -> dict:
    rows = [{k: v for k, v in r.as_dict().items() if k != "certificates"}
            for r in bounds_table(args.max, bound=args.verify)]
    return {"kind": "bounds", "rows": rows, "summary": {"max": args.max}}


def payload_construct(args) -> dict:
    kind = args.kind
    if kind == "X":
        G = make_Xn(args.n).to_gram()
    elif kind == "Y":
        G = make_Yn(args.n).to_gram()
    elif kind == "K":
        G = make_Kuv(args.u, args.v)
    elif kind == "L":
        G = make_Luv(args.u, args.v)
    elif kind == "fixed":
        G = fixed_Ln(args.n)
    elif kind == "thm42":
        G = thm42_construct(args.n)
    elif kind == "halmos":
        G = HALMOS.to_gram()
    else:
        G = BAROWSKY
    row = {"kind": kind, "rank": G.dim, "det": G.det, "gram": _gram_text(G)}
    return {"kind": "construct", "rows": [row], "summary": {"matrix": [list(r) for r in G.entries]}}


PAYLOADS = {
    "represents": payload_represents, "enumerate": payload_enumerate, "escalate": payload_escalate,
    "census": payload_census, "bounds": payload_bounds, "construct": payload_construct,
}
CACHED = {"enumerate", "escalate", "census", "bounds", "represents"}


def _cache_params(args) -> dict:
    skip = {"command", "format", "cache_dir", "no_cache", "verify_cache", "threads",
            "expect_count", "checkpoint", "func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _normalise(payload: dict) -> dict:
    # the exact shape a cache hit comes back in; column order survives as a list
    if payload["rows"]:
        payload["columns"] = list(payload["rows"][0])
    return json.loads(json.dumps(payload, sort_keys=True))


def compute(args) -> dict:
    fn = PAYLOADS[args.command]
    if args.command not in CACHED or args.no_cache:
        return _normalise(fn(args))
    cache = ResultCache(args.cache_dir)
    params = _cache_params(args)
    hit = cache.get(args.command, None, params)
    if hit is not None:
        if args.verify_cache and _normalise(fn(args)) != hit:
            raise CacheMismatch(f"cached {args.command} result differs from recomputation")
        return hit
    payload = _normalise(fn(args))
    cache.put(args.command, None, params, payload)
    return payload


# ----------------------------------------------------------------------------
# rendering


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        lines = [json.dumps({"schema_version": SCHEMA_VERSION, "record": payload["kind"], **row})
                 for row in payload["rows"]]
        if payload["summary"]:
            lines.append(json.dumps({"schema_version": SCHEMA_VERSION, "record": "summary",
                                     "command": payload["kind"], **payload["summary"]}))
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        rows = payload["rows"]
        if not rows:
            return ""
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=payload.get("columns", list(rows[0])), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    return _render_text(payload)


def _render_text(payload: dict) -> str:
    kind, rows, summ = payload["kind"], payload["rows"], payload["summary"]
    out = []
    if kind == "represents":
        r = rows[0]
        if r["represented"]:
            out.append(f"{r['m']} = Q({', '.join(map(str, r['witness']))})")
        else:
            out.append(f"{r['m']}: not represented up to exhaustion")
    elif kind == "enumerate":
        out.append(f"n={summ['n']} cutoff={summ['cutoff']}")
        for lv in summ["levels"]:
            bp = lv["B'"]
            out.append(f"  rank {lv['rank']}: #A={lv['A']} #B={lv['B']} #B'={bp} #C={lv['C']}")
        out += [f"<{r['coeffs']}>" for r in rows]
        out.append(f"{summ['count']} forms")
    elif kind == "escalate":
        out += [f"det {r['det']}  {r['gram']}" for r in rows]
        out.append(f"{summ['count']} classes (n={summ['n']}, rank {summ['rank']}, "
                   f"verified to {summ['verify_bound']})")
    elif kind == "census":
        out += [f"n={r['n']}  m1={r['m1']}  m2={r['m2']}" for r in rows]
    elif kind == "bounds":
        out += [f"{r['n']:>4}  {r['lower']:>3} <= t(n) <= {r['upper']:<3}  "
                f"[{r['lower_by']}; {r['upper_by']}]" for r in rows]
    elif kind == "construct":
        width = max(len(str(v)) for row in summ["matrix"] for v in row)
        out += [" ".join(str(v).rjust(width) for v in row) for row in summ["matrix"]]
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------------
# argument parsing


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--cache-dir", default=None,
                        help="cache directory (default: $TIGHTFORMS_CACHE_DIR or ~/.cache/tightforms)")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--verify-cache", action="store_true",
                        help="recompute cache hits and fail if they differ")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--budget", type=int, default=None, help="enumeration node budget")

    p = argparse.ArgumentParser(prog="tightforms", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("represents", parents=[common], help="decide whether a form represents m")
    s.add_argument("--diag")
    s.add_argument("--gram")
    s.add_argument("--m", type=int, required=True)

    s = sub.add_parser("enumerate", parents=[common], help="new diagonal tight forms")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--cutoff", type=int, default=None)
    s.add_argument("--rank-cap", type=int, default=8)
    s.add_argument("--expect-count", type=int, default=None)

    s = sub.add_parser("escalate", parents=[common], help="escalation search")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--rank", type=int, default=4)
    s.add_argument("--verify", type=int, default=10**4)
    s.add_argument("--checkpoint", default=None, help="directory for per-rank checkpoints")
    s.add_argument("--overlattices", action="store_true",
                   help="include tight integral overlattices of the leaves")
    s.add_argument("--expect-count", type=int, default=None)

    s = sub.add_parser("census", parents=[common], help="quaternary (m1, m2) census")
    s.add_argument("--n", type=_int_list, required=True, help="comma list, e.g. 2,3,4")
    s.add_argument("--verify", type=int, default=10**4)
    s.add_argument("--checkpoint", default=None)

    s = sub.add_parser("bounds", parents=[common], help="table of bounds on t(n)")
    s.add_argument("--max", type=int, required=True)
    s.add_argument("--verify", type=int, default=10**4)

    s = sub.add_parser("construct", parents=[common], help="print an explicit lattice")
    s.add_argument("--kind", required=True,
                   choices=("X", "Y", "K", "L", "fixed", "thm42", "halmos", "barowsky"))
    s.add_argument("--n", type=int)
    s.add_argument("--u", type=int)
    s.add_argument("--v", type=int, default=0)
    return p


def _check_construct_args(args):
    need = {"X": ("n",), "Y": ("n",), "fixed": ("n",), "thm42": ("n",), "K": ("u",), "L": ("u",)}
    for name in need.get(args.kind, ()):
        if getattr(args, name) is None:
            raise FormError(f"--kind {args.kind} needs --{name}")


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "construct":
            _check_construct_args(args)
        payload = compute(args)
    except CutoffTooSmall as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CUTOFF
    except CacheMismatch as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CACHE
    except FormError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(render(payload, args.format))
    if args.command == "represents":
        return EXIT_OK if payload["rows"][0]["represented"] else EXIT_FAIL
    expect = getattr(args, "expect_count", None)
    if expect is not None and payload["summary"]["count"] != expect:
        print(f"error: expected {expect} results, got {payload['summary']['count']}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
