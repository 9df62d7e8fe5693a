"""Command-line front end: forms, Theta images, bases and the verification suite."""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .algebra import FieldParams
from .basis import canonical_basis, canonical_basis_plus
from .errors import DrinfeldError, TypeWeightMismatch
from .forms import FORM_NAMES, form_series
from .verify import CHECKS, Options, run_check


def dumps(obj):
    """Canonical JSON: sorted keys, no whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _modulus(text):
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--modulus expects comma-separated integers (low degree first), got {text!r}")


def _positive(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def _nonneg(text):
    try:
        n = int(text)
    except ValueError:
        n = -1
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return n


def build_parser():
    ap = argparse.ArgumentParser(
        prog="dmforms",
        description="Exact u-expansions of Drinfeld modular forms of level T.")
    ap.add_argument("--p", type=int, default=3, help="odd prime p (default 3)")
    ap.add_argument("--r", type=int, default=1, help="q = p^r (default 1)")
    ap.add_argument("--modulus", type=_modulus, default=None,
                    help="defining polynomial of F_q over F_p, coefficients low degree first")
    sub = ap.add_subparsers(dest="command", required=True)

    def out_flags(p):
        p.add_argument("--json", action="store_true", help="emit canonical JSON")
        p.add_argument("--out", default=None, help="write to this file instead of stdout")

    f = sub.add_parser("form", help="u-expansion of a generator form")
    f.add_argument("name", choices=FORM_NAMES)
    f.add_argument("--prec", type=_positive, required=True)
    out_flags(f)

    t = sub.add_parser("theta", help="Theta = -u^2 d/du applied to a generator form")
    t.add_argument("name", choices=FORM_NAMES)
    t.add_argument("--prec", type=_positive, required=True)
    out_flags(t)

    b = sub.add_parser("basis", help="canonical basis f_(r,0..imax)")
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--l", type=int, required=True)
    b.add_argument("--imax", type=_nonneg, required=True)
    b.add_argument("--prec", type=_positive, required=True)
    b.add_argument("--plus", action="store_true", help="the Fricke-symmetric family")
    out_flags(b)

    v = sub.add_parser("verify", help="run the identity checks")
    v.add_argument("--only", nargs="+", choices=list(CHECKS), default=None, metavar="NAME",
                   help="restrict to these checks: " + ", ".join(CHECKS))
    v.add_argument("--prec", type=_positive, default=40)
    v.add_argument("--imax", type=_nonneg, default=4)
    v.add_argument("--seed", type=int, default=0, help="seed for the random samples")
    v.add_argument("--jobs", type=_positive, default=1, help="worker processes")
    out_flags(v)
    return ap


def _emit(text, args):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _cmd_form(field, args, theta=False):
    s = form_series(args.name, args.prec, field)
    if theta:
        s = s.theta()
    return dumps(s.to_json()) if args.json else s.to_text()


def _cmd_basis(field, args):
    build = canonical_basis_plus if args.plus else canonical_basis
    elems = build(args.k, args.l, args.imax, args.prec, field)
    if args.json:
        return dumps([e.to_json() for e in elems])
    head = elems[0]
    lines = [f"k={args.k} l={args.l} r={head.r}"
             + (f" d+={head.d_plus} ({head.parity_case})" if args.plus else "")]
    for e in elems:
        lines.append(f"i={e.i}  F = {e.F_text()}  C = {e.C.to_text()}")
        lines.append(f"     {e.series.to_text()}")
    return "\n".join(lines)


def _run_one(job):
    name, opts = job
    return name, [r.to_json() for r in run_check(name, opts)]


def _cmd_verify(field, args):
    names = args.only or list(CHECKS)
    opts = Options(field=field, prec=args.prec, imax=args.imax, seed=args.seed)
    jobs = [(n, opts) for n in names]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    reports = [r for _, rs in results for r in rs]
    ok = all(r["passed"] for r in reports)
    if args.json:
        text = dumps(reports)
    else:
        from .verify import Report
        lines = []
        for name, rs in results:
            lines.append(f"[{name}]")
            lines.extend("  " + Report.from_json(r).line() for r in rs)
        npass = sum(r["passed"] for r in reports)
        lines.append(f"{npass}/{len(reports)} checks passed")
        text = "\n".join(lines)
    return text, ok


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        field = FieldParams(args.p, args.r, args.modulus)
    except DrinfeldError as exc:
        ap.print_usage(sys.stderr)
        print(f"dmforms: error: --p/--r/--modulus: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command in ("form", "theta"):
            _emit(_cmd_form(field, args, theta=args.command == "theta"), args)
            return 0
        if args.command == "basis":
            _emit(_cmd_basis(field, args), args)
            return 0
        text, ok = _cmd_verify(field, args)
        _emit(text, args)
        return 0 if ok else 1
    except TypeWeightMismatch as exc:
        print(f"dmforms: error: --k/--l: {exc}", file=sys.stderr)
        return 2
    except DrinfeldError as exc:
        if isinstance(exc, ValueError):
            print(f"dmforms: error: {exc}", file=sys.stderr)
            return 2
        raise


if __name__ == "__main__":
    sys.exit(main())
