"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 input or validation error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import verify
from .dga import BUILTINS, Dga, DgaError, builtin, homology, homology_ring, validate
from .graded import PresentationError, format_monomial, parse_algebra
from .hochschild import HochschildError, closed_form_json, closed_form_table, hh_cohomology_dims, hh_dims
from .linalg import backend
from .specseq import SpectralSequenceError, run_bokstedt

SCHEMA = 1


class InputError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def _load_dga(args) -> Dga:
    if args.file and args.builtin:
        raise InputError("give either --builtin or --file, not both")
    if args.file:
        try:
            with open(args.file, encoding="utf-8") as fh:
                X = Dga.from_json(json.load(fh))
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.file} is not valid JSON: {exc}") from exc
        if not X.name:
            X.name = args.file
        viol = validate(X)
        if viol:
            raise InputError("invalid DGA:\n  " + "\n  ".join(str(v) for v in viol[:10]))
        return X
    if not args.builtin:
        raise InputError("give --builtin NAME or --file PATH")
    return builtin(args.builtin, p=args.p, max_degree=args.max_degree)


def cmd_homology(args):
    X = _load_dga(args)
    H = homology(X)
    if args.json:
        recs = [{"degree": n, "group": str(g), "free_rank": g.free_rank,
                 "torsion": [X.ring.to_json(t) for t in g.torsion], "dimension": g.dim}
                for n, g in sorted(H.items())]
        out = {"schema": SCHEMA, "input": X.name, "ring": repr(X.ring), "homology": recs}
        if args.ring_structure:
            out["ring_structure"] = homology_ring(X).describe().splitlines()
        print(_dump(out))
        return 0
    print(f"H_*({X.name}) over {X.ring!r}")
    for n, g in sorted(H.items()):
        print(f"  H_{n:<3} = {g}")
    if args.ring_structure:
        print(homology_ring(X).describe())
    return 0


def cmd_hh(args):
    if args.closed_form or args.algebra:
        if not args.algebra:
            raise InputError("--closed-form needs --algebra")
        P = parse_algebra(args.algebra, args.p)
        print(_dump(closed_form_json(P, args.max_degree)) if args.json else closed_form_table(P, args.max_degree))
        return 0
    X = _load_dga(args)
    if args.cohomology:
        res = hh_cohomology_dims(X, args.p, args.max_degree, input_id=X.name)
    else:
        res = hh_dims(X, args.p, args.max_degree, normalized=not args.unnormalized, input_id=X.name)
    print(_dump(res.to_json()) if args.json else res.table())
    return 0


def cmd_ss(args):
    m = args.m if args.m is not None else 2
    run = run_bokstedt(args.p, args.variant, args.bound, m)
    if args.json:
        print(_dump(run.to_json()))
        return 0
    first, last = run.pages[0], run.pages[-1]
    print(first.chart())
    if args.p != 2:
        from .specseq import bokstedt_pattern
        spec = bokstedt_pattern(args.p, args.variant, args.bound + 2, m)
        P = spec.presentation
        print(f"d^{spec.r} on pure divided powers:")
        for src, tgt, _ in spec.entries:
            if sum(P.bidegree(src)) <= args.bound + 1:
                print(f"  {format_monomial(P, src)} -> {format_monomial(P, tgt)}")
        print(last.chart())
    print("E^infinity dims by total degree:")
    print("  " + " ".join(f"{n}:{d}" for n, d in enumerate(run.dims)))
    return 0


def cmd_verify(args):
    results = verify.run_suite(args.suite, seed=args.seed, jobs=args.jobs)
    ok = all(r.passed for r in results)
    if args.json:
        print(_dump({"schema": SCHEMA, "suite": args.suite, "seed": args.seed, "passed": ok,
                     "checks": [r.to_json() for r in results]}))
    else:
        for r in results:
            print(r.line())
        print(f"{sum(r.passed for r in results)}/{len(results)} checks passed (backend: {backend.NAME})")
    return 0 if ok else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="dgahh", description="Homology and Hochschild homology of small DGAs.")
    ap.add_argument("--list-builtins", action="store_true", help="list builtin DGAs and exit")
    sub = ap.add_subparsers(dest="command")

    def source(p):
        p.add_argument("--builtin", choices=list(BUILTINS))
        p.add_argument("--file", help="DGA description in JSON")
        p.add_argument("--p", type=int, default=2, help="prime (default 2)")
        p.add_argument("--max-degree", type=int, default=8, help="top degree (default 8)")
        p.add_argument("--json", action="store_true")

    h = sub.add_parser("homology", help="homology of a DGA")
    source(h)
    h.add_argument("--ring-structure", action="store_true", help="also print the product table")
    h.set_defaults(func=cmd_homology)

    hh = sub.add_parser("hh", help="Hochschild homology with F_p coefficients")
    source(hh)
    hh.add_argument("--closed-form", action="store_true", help="use the closed form for --algebra")
    hh.add_argument("--algebra", help='generators, e.g. "exterior x 3; truncated z 2 4"')
    hh.add_argument("--cohomology", action="store_true")
    hh.add_argument("--unnormalized", action="store_true")
    hh.set_defaults(func=cmd_hh)

    ss = sub.add_parser("ss", help="bounded spectral sequence computation")
    ss.add_argument("--variant", default="Y", choices=["Y", "X", "X_m", "dualSteenrod"])
    ss.add_argument("--p", type=int, default=3)
    ss.add_argument("--m", type=int, default=None)
    ss.add_argument("--bound", type=int, default=8)
    ss.add_argument("--json", action="store_true")
    ss.set_defaults(func=cmd_ss)

    v = sub.add_parser("verify", help="run the acceptance or property suite")
    v.add_argument("--suite", default="core", choices=["core", "properties"])
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--jobs", type=int, default=None,
                   help=f"worker processes (default ${verify.ENV_JOBS} or 1)")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.list_builtins:
        for name, desc in BUILTINS.items():
            print(f"{name:<14} {desc}")
        return 0
    if not args.command:
        ap.print_help()
        return 2
    try:
        return args.func(args)
    except (InputError, DgaError, PresentationError, HochschildError, SpectralSequenceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
