"""pvalab command line.

Exit codes: 0 pass, 1 mathematical failure, 2 parse error, 3 resource cap,
4 truncation infeasible.  Reports are JSON on stdout (or ``--out``); a short
summary goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys

from . import graphs
from .cl_complex import (
    ClCochain, adX_bracket, d_cl, violations,
)
from . import cl_complex, pv_complex
from .cohomology import (
    KINDS, CapExceeded as SliceCapExceeded, NotClosed, TruncatedComplex,
    TruncationInfeasible, slice_report,
)
from .diffpoly import ParseError
from .pva import broken_pair, check_pva, constant_bracket, gfz, load_spec, virasoro
from .sesquilinear import TruncationError

EXIT_OK, EXIT_MATH, EXIT_PARSE, EXIT_CAP, EXIT_TRUNC = 0, 1, 2, 3, 4

BUILTIN = {"gfz": gfz, "virasoro": virasoro, "broken": broken_pair, "constant": constant_bracket}


class MathFailure(Exception):
    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report


def resolve_spec(arg):
    if arg in BUILTIN and not os.path.exists(arg):
        return BUILTIN[arg]()
    return load_spec(arg)


def _read_json(path):
    with open(path) as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None


def load_any_cochain(spec, path):
    d = _read_json(path)
    if not isinstance(d, dict):
        raise ParseError("cochain file must hold a JSON object")
    if "shapes" in d:
        return cl_complex.load_cochain(spec, path)
    if "values" in d:
        return pv_complex.load_cochain(spec, path)
    raise ParseError("cochain file needs either 'shapes' (classical) or 'values' (variational)")


def dump_cochain(c):
    if isinstance(c, ClCochain):
        return dict(cl_complex.cochain_to_dict(c), complex="classical")
    return dict(pv_complex.cochain_to_dict(c), complex="variational")


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str, float)) or x is None:
        return x
    return str(x)


# --------------------------------------------------------------- commands

def cmd_check(args):
    spec = resolve_spec(args.spec)
    rep = check_pva(spec, args.trials, args.seed)
    conflicts = getattr(spec, "table_conflicts", [])
    if conflicts:
        rep["table_conflicts"] = [[spec.generators[g], spec.generators[h]] for g, h in conflicts]
        rep["ok"] = False
    msg = f"{spec.name or args.spec}: " + ", ".join(
        f"{k}={'ok' if rep[k]['ok'] else 'FAIL'}" for k in ("skewsymmetry", "jacobi", "dX"))
    if not rep["ok"]:
        raise MathFailure(msg, rep)
    return rep, msg


def cmd_graph_reduce(args):
    text = args.vector.strip()
    try:
        if "[" not in text:
            text = f"[{text}]"
        if ";" not in text:
            # bare edge lists: the arity is the largest vertex that occurs
            def fill(m):
                body = m.group(1)
                verts = [int(x) for x in re.findall(r"\d+", body)]
                n = args.n or max(verts, default=1)
                return f"[{n}; {body}]"
            text = re.sub(r"\[([^\];]*)\]", fill, text)
        vec = graphs.parse_graph_vector(text)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    if vec.n > graphs.LINE_CAP:
        raise graphs.CapExceeded(f"n={vec.n} exceeds the reduction cap {graphs.LINE_CAP}")
    coords = graphs.reduce(vec)
    out = graphs.GraphVector(vec.n, coords)
    rep = {"n": vec.n, "input": str(vec), "reduced": _short(out),
           "coordinates": {str(g): str(c) for g, c in sorted(coords.items())}}
    return rep, rep["reduced"]


def _short(vec):
    if not vec.terms:
        return "0"
    parts = []
    for g, c in sorted(vec.terms.items()):
        parts.append(f"{c} * [" + ", ".join(f"{i}->{j}" for i, j in g.edges) + "]")
    return " + ".join(parts)


def cmd_diff(args):
    spec = resolve_spec(args.spec)
    c = load_any_cochain(spec, args.cochain)
    if isinstance(c, ClCochain):
        bad = violations(c)
        if bad:
            raise MathFailure("invalid classical cochain: " + "; ".join(bad), {"violations": bad})
        dc = d_cl(c)
        rep = dump_cochain(dc)
        if args.oracle:
            same = (adX_bracket(spec, c) - dc).is_zero()
            rep["oracle"] = {"ok": same}
            if not same:
                raise MathFailure("d Y differs from [X, Y]", rep)
        return rep, f"d of a classical {c.n}-cochain computed"
    bad = c.skew_residuals()
    if bad:
        lst = [f"skewsymmetry fails at {tuple(spec.generators[i] for i in g)}, swap {k + 1}"
               for (g, k) in bad]
        raise MathFailure("invalid variational cochain: " + "; ".join(lst), {"violations": lst})
    if args.oracle:
        raise ParseError("--oracle applies to classical cochains only")
    dv = pv_complex.d_var(c)
    return dump_cochain(dv), f"d of a variational {c.n}-cochain computed"


def _deltas(args):
    return list(range(args.delta_min, args.delta_max + 1)) if args.delta is None else [args.delta]


def cmd_cohom_dims(args):
    spec = resolve_spec(args.spec)
    s = args.s if args.complex == "sesquilinear" else 0
    slices = []
    cert = {}
    for d in _deltas(args):
        tc = TruncatedComplex(args.complex, spec, args.W, d, s)
        for n in range(args.n_min, args.n + 1):
            r = tc.cohomology(n)
            r["status"] = "zero" if r["dim_H"] == 0 else "nonzero"
            slices.append(r)
            cert[f"d_squared_zero(delta={d},n={n})"] = tc.d_squared_zero(n)
    if not all(cert.values()):
        raise MathFailure("d^2 != 0 on a slice", {"complex": args.complex, "slices": slices, "certificates": cert})
    rep = {"complex": args.complex, "slices": slices,
           "certificates": {"d_squared_zero": True, "checked": cert}}
    return rep, f"{len(slices)} slices"


def cmd_cohom_vanish(args):
    spec = resolve_spec(args.spec)
    if not 1 <= args.s < args.n:
        raise MathFailure(
            f"refused: the vanishing statement concerns 1 <= s < n, got s={args.s}, n={args.n}",
            {"refused": True})
    if spec.ngens != 1:
        raise MathFailure("refused: the vanishing statement concerns one generator", {"refused": True})
    slices = []
    Ws = range(1, args.W + 1) if args.all_W else [args.W]
    for W in Ws:
        for d in _deltas(args):
            slices.append(slice_report(spec, args.s, args.n, W, d, retry=not args.no_retry))
    nonzero = [r for r in slices if r["status"] == "nonzero"]
    rep = {"complex": "sesquilinear", "s": args.s, "slices": slices,
           "certificates": {"retried": sum(1 for r in slices if "retry" in r),
                            "resolved_by_retry": sum(1 for r in slices if r["status"] == "retry")}}
    msg = f"H^{args.n} (s={args.s}): {len(slices)} slices, {len(nonzero)} nonzero"
    if nonzero:
        raise MathFailure(msg, rep)
    return rep, msg


def cmd_cohom_straighten(args):
    from .cohomology import straighten
    spec = resolve_spec(args.spec)
    Y = load_any_cochain(spec, args.cochain)
    if not isinstance(Y, ClCochain):
        raise ParseError("straighten expects a classical cochain file")
    bad = violations(Y)
    if bad:
        raise MathFailure("invalid classical cochain: " + "; ".join(bad), {"violations": bad})
    Z, Yt = straighten(spec, Y)
    rep = {"Z": dump_cochain(Z), "Ytilde": dump_cochain(Yt),
           "certificates": {"exact": (Y - d_cl(Z) - Yt).is_zero(),
                            "edgeless": Yt.support() in ([], [(1,) * Y.n])}}
    return rep, "straightened"


def cmd_selftest(args):
    from .selftest import run_all
    only = set(args.only) if args.only else None
    res = run_all(seed=args.seed, trials=args.trials, quick=args.quick, only=only)
    lines = [f"[{'PASS' if r['ok'] else 'FAIL'}] {i:2d} {name} ({r['seconds']}s): {r['detail']}" for i, name, r in res]
    rep = {"criteria": [{"id": i, "name": name, "ok": r["ok"], "detail": r["detail"], "seconds": r["seconds"]}
                        for i, name, r in res]}
    if not all(r["ok"] for _, _, r in res):
        raise MathFailure("\n".join(lines), rep)
    return rep, "\n".join(lines)


# ------------------------------------------------------------------ parser

def build_parser():
    def options(defaults):
        q = argparse.ArgumentParser(add_help=False)
        dflt = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
        q.add_argument("--seed", type=int, default=dflt(0))
        q.add_argument("--trials", type=int, default=dflt(25))
        q.add_argument("--out", default=dflt(None), help="write the JSON report here instead of stdout")
        q.add_argument("--jobs", type=int, default=dflt(1), help="accepted; work runs in one thread")
        q.add_argument("-q", "--quiet", action="store_true", default=dflt(False))
        return q

    # shared options work before or after the subcommand
    shared = options(False)
    p = argparse.ArgumentParser(prog="pvalab", parents=[options(True)],
                                description="Exact cohomology of Poisson vertex algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[shared], help="PVA axioms and dX = 0")
    c.add_argument("spec")
    c.set_defaults(fn=cmd_check)

    g = sub.add_parser("graph", help="graph-complex utilities")
    gs = g.add_subparsers(dest="graph_command", required=True)
    gr = gs.add_parser("reduce", parents=[shared], help="coordinates in the proper-line basis")
    gr.add_argument("vector", help='e.g. "[2->1]" or "-1/2 * [3; 1->2, 2->3]"')
    gr.add_argument("--n", type=int, default=0, help="arity when the vector omits it")
    gr.set_defaults(fn=cmd_graph_reduce)

    d = sub.add_parser("diff", parents=[shared], help="differential of a cochain file")
    d.add_argument("cochain")
    d.add_argument("spec")
    d.add_argument("--oracle", action="store_true", help="also compare with [X, Y] (classical)")
    d.set_defaults(fn=cmd_diff)

    h = sub.add_parser("cohomology", help="truncated cohomology")
    hs = h.add_subparsers(dest="cohomology_command", required=True)

    def common(q, lo=-2, hi=2):
        q.add_argument("spec")
        q.add_argument("--W", type=int, default=4)
        q.add_argument("--delta", type=int, default=None)
        q.add_argument("--delta-min", type=int, default=lo)
        q.add_argument("--delta-max", type=int, default=hi)

    hd = hs.add_parser("dims", parents=[shared])
    common(hd)
    hd.add_argument("--complex", choices=KINDS, default="variational")
    hd.add_argument("--n", type=int, default=2, help="top degree")
    hd.add_argument("--n-min", type=int, default=0)
    hd.add_argument("--s", type=int, default=1)
    hd.set_defaults(fn=cmd_cohom_dims)

    hv = hs.add_parser("vanish", parents=[shared])
    common(hv, -4, 8)
    hv.add_argument("--n", type=int, required=True)
    hv.add_argument("--s", type=int, required=True)
    hv.add_argument("--all-W", action="store_true", help="scan every cap 1..W")
    hv.add_argument("--no-retry", action="store_true")
    hv.set_defaults(fn=cmd_cohom_vanish)

    ht = hs.add_parser("straighten", parents=[shared])
    ht.add_argument("cochain")
    ht.add_argument("spec")
    ht.set_defaults(fn=cmd_cohom_straighten)

    st = sub.add_parser("selftest", parents=[shared], help="run the acceptance criteria")
    st.add_argument("--quick", action="store_true")
    st.add_argument("--only", type=int, nargs="*")
    st.set_defaults(fn=cmd_selftest)
    return p


def _emit(args, rep):
    text = json.dumps(_jsonable(rep), indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    random.seed(args.seed)
    code, rep, msg = EXIT_OK, None, ""
    try:
        rep, msg = args.fn(args)
    except MathFailure as exc:
        code, rep, msg = EXIT_MATH, exc.report, str(exc)
    except NotClosed as exc:
        code, rep, msg = EXIT_MATH, {"error": str(exc)}, str(exc)
    except ParseError as exc:
        code, msg = EXIT_PARSE, f"parse error: {exc}"
        rep = {"error": str(exc), "line": exc.line, "column": exc.col}
    except (graphs.CapExceeded, SliceCapExceeded, TruncationError) as exc:
        code, rep, msg = EXIT_CAP, {"error": str(exc)}, f"cap exceeded: {exc}"
    except TruncationInfeasible as exc:
        code, msg = EXIT_TRUNC, f"truncation infeasible: {exc}"
        rep = {"error": str(exc), "level": exc.level}
    except (OSError, KeyError, ValueError) as exc:
        code, msg = EXIT_PARSE, f"input error: {exc}"
        rep = {"error": str(exc)}
    if rep is not None:
        _emit(args, rep)
    if msg and not args.quiet:
        print(msg, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
