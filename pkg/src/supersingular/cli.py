"""Command-line front end.  Run ``python -m supersingular --help``."""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import tempfile

from . import __version__
from .census import HyperellipticCurve, census_scan, read_csv, write_csv
from .splitting import equivalence_rows
from .weil import WeilQuartic, classify, discriminant, p_rank, rm_factor


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _emit(text: str, out: str | None) -> None:
    """Write to stdout, or atomically to ``out`` (temp file then rename)."""
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json(payload: dict, params: dict) -> str:
    doc = {"version": __version__, "parameters": params}
    doc.update(payload)
    return json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"


def _curve(args) -> HyperellipticCurve:
    if args.curve_file:
        try:
            return HyperellipticCurve.from_file(args.curve_file)
        except OSError as e:
            raise UsageError(f"cannot read curve file: {e.strerror}") from None
    if not args.curve:
        raise UsageError("census needs --curve or --curve-file")
    return HyperellipticCurve.parse(args.curve)


# ---------------------------------------------------------------- verbs

def cmd_census(args) -> str:
    c = _curve(args)
    if args.x is None:
        raise UsageError("census needs --x")
    recs = census_scan(c, args.x, workers=args.workers)
    if args.format == "csv":
        return write_csv(recs)
    return _json({"records": [dict(zip(("p", "n1", "n2", "a1", "a2", "delta", "class"), r.row()))
                              for r in recs]},
                 {"curve": str(c), "x": args.x})


def _quartic(args) -> WeilQuartic:
    if args.a1 is None or args.a2 is None or args.p is None:
        raise UsageError("needs --a1, --a2 and --p")
    return WeilQuartic(args.a1, args.a2, args.p)


def cmd_classify(args) -> str:
    w = _quartic(args)
    if w.p < 7:
        raise UsageError(f"classification needs p >= 7 (the supersingular template list assumes it), got p = {w.p}")
    cls = classify(w)
    if args.format == "json":
        return _json({"class": cls.value, "p_rank": p_rank(w), "delta": discriminant(w)},
                     {"a1": w.a1, "a2": w.a2, "p": w.p})
    return cls.value + "\n"


def cmd_rm_factor(args) -> str:
    w = _quartic(args)
    if args.d is None:
        raise UsageError("rm-factor needs --d")
    b = rm_factor(w, args.d)
    res = None if b is None else {"d": b.d, "u": b.u, "v": b.v, "trace": b.trace, "norm": b.norm}
    if args.format == "json":
        return _json({"b": res}, {"a1": w.a1, "a2": w.a2, "p": w.p, "d": args.d})
    if b is None:
        return "none\n"
    return f"({b.u} + {b.v}*sqrt({b.d}))/2\n"


def cmd_verify_groups(args) -> str:
    from .groups.verify import full_report
    rep = full_report(quick=args.quick)
    failed = sum(e["status"] == "fail" for e in rep)
    return _json({"entries": rep, "failed": failed, "total": len(rep)}, {"quick": args.quick})


def cmd_verify_splitting(args) -> str:
    ells = args.ell or [3, 5, 13, 17, 29, 37, 41]
    pmax = int(args.x) if args.x is not None else 500
    rows = equivalence_rows(ells, pmax)
    if args.case:
        rows = [r for r in rows if r[0] == args.case]
    if args.format == "json":
        keys = ("i", "ell", "p", "legendre_side", "factor_side", "agree")
        return _json({"rows": [dict(zip(keys, r)) for r in rows],
                      "disagreements": sum(not r[5] for r in rows)},
                     {"ell": ells, "pmax": pmax, "case": args.case})
    buf = io.StringIO()
    buf.write("i,ell,p,legendre_side,factor_side,agree\n")
    for r in rows:
        buf.write(",".join(str(v).lower() if isinstance(v, bool) else str(v) for v in r) + "\n")
    return buf.getvalue()


def cmd_sieve_demo(args) -> str:
    from .sieve import SieveConfig, sieve_report
    if not args.census:
        raise UsageError("sieve-demo needs --census")
    if args.config:
        try:
            with open(args.config) as fh:
                cfg_doc = json.load(fh)
        except OSError as e:
            raise UsageError(f"cannot read config: {e.strerror}") from None
        except json.JSONDecodeError as e:
            raise UsageError(f"config is not JSON: {e.msg}") from None
    else:
        if args.x is None or not args.primes:
            raise UsageError("sieve-demo needs --config, or --x and --primes")
        cfg_doc = {"x": args.x, "primes": args.primes, "case": args.case or 4}
        if args.t is not None:
            cfg_doc["t"] = args.t
    cfg = SieveConfig.from_dict(cfg_doc)
    try:
        with open(args.census, newline="") as fh:
            recs = read_csv(fh)
    except OSError as e:
        raise UsageError(f"cannot read census: {e.strerror}") from None
    members = [r.p for r in recs if r.cls.is_supersingular and r.p <= cfg.x]
    rep = sieve_report(members, cfg)
    return _json({"report": rep.as_dict(), "members": members},
                 {"x": cfg.x, "primes": list(cfg.primes), "t": cfg.t, "case": int(cfg.case),
                  "census": os.path.basename(args.census)})


def cmd_bounds(args) -> str:
    from .sieve import BoundCase, ScheduleCase, param_schedule, ratio_identity, theorem_bound
    if args.x is None:
        raise UsageError("bounds needs --x")
    x = args.x
    gen = theorem_bound(BoundCase.GENERIC, x)
    rmqm = theorem_bound(BoundCase.RM_OR_QM, x)
    sched = {}
    for case in ScheduleCase:
        ell1, t = param_schedule(case, x)
        sched[case.value] = {"ell1": ell1, "t": t}
    return _json({"generic": gen, "rm_or_qm": rmqm, "ratio": gen / rmqm,
                  "ratio_closed_form": ratio_identity(x), "schedule": sched},
                 {"x": x, "c": 1.0, "c1": 1.0, "n_K": 1, "N_A": 1, "d_K": 1})


VERBS = {
    "census": cmd_census,
    "classify": cmd_classify,
    "rm-factor": cmd_rm_factor,
    "verify-groups": cmd_verify_groups,
    "verify-splitting": cmd_verify_splitting,
    "sieve-demo": cmd_sieve_demo,
    "bounds": cmd_bounds,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="supersingular", description="Supersingular-prime toolkit.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="verb", metavar="VERB", parser_class=_Parser)
    sub.required = True

    def common(sp, fmt="json"):
        sp.add_argument("--format", choices=("csv", "json", "text"), default=fmt)
        sp.add_argument("--out", default=None, help="output path (default stdout)")

    sp = sub.add_parser("census", help="point-count census of y^2 = f(x)")
    sp.add_argument("--curve", help="c4,...,c0 of a monic quintic (or c5..c0 / c6..c0)")
    sp.add_argument("--curve-file", help="text file with an 'f: ...' line")
    sp.add_argument("--x", type=float)
    sp.add_argument("--workers", type=int, default=None)
    common(sp, "csv")

    for name in ("classify", "rm-factor"):
        sp = sub.add_parser(name)
        sp.add_argument("--a1", type=int)
        sp.add_argument("--a2", type=int)
        sp.add_argument("--p", type=int)
        if name == "rm-factor":
            sp.add_argument("--d", type=int)
        common(sp, "text")

    sp = sub.add_parser("verify-groups", help="JSON report of the group checks")
    sp.add_argument("--quick", action="store_true")
    common(sp)

    sp = sub.add_parser("verify-splitting", help="Legendre rule vs factorisation, as CSV")
    sp.add_argument("--ell", type=_ints, help="comma-separated auxiliary primes")
    sp.add_argument("--x", type=float, help="bound on p (exclusive, default 500)")
    sp.add_argument("--case", type=int, choices=range(1, 6))
    common(sp, "csv")

    sp = sub.add_parser("sieve-demo", help="sieve report on census supersingular primes")
    sp.add_argument("--census", help="census CSV")
    sp.add_argument("--config", help="JSON {x, t, primes, case}")
    sp.add_argument("--x", type=float)
    sp.add_argument("--primes", type=_ints)
    sp.add_argument("--t", type=int)
    sp.add_argument("--case", type=int, choices=range(1, 6))
    common(sp)

    sp = sub.add_parser("bounds", help="bound curves and parameter schedules at x")
    sp.add_argument("--x", type=float)
    common(sp)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verb in ("census", "verify-splitting") and args.format == "text":
            args.format = "csv"
        text = VERBS[args.verb](args)
        _emit(text, args.out)
    except (UsageError, ValueError, ArithmeticError, KeyError) as e:
        msg = str(e).splitlines()[0] if str(e) else type(e).__name__
        print(f"supersingular: error: {msg}", file=sys.stderr)
        return 2
    except SystemExit as e:  # --help / --version
        return int(e.code or 0)
    return 0


if __name__ == "__main__":
    sys.exit(main())
