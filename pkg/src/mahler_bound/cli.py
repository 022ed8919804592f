"""Command-line front end.

Exit codes: 0 ok, 1 a certified check failed, 2 usage or input error,
3 inconclusive (enclosure still too wide at the precision cap).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

from . import bounds, lemmas, primes, search, suite, vandermonde
from .interval import ApproxInterval
from .measure import MeasureError, height, house, mahler_measure
from .poly import PolynomialError, parse_polynomial

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# --- serialisation ----------------------------------------------------------------


def _plain(obj):
    """Recursively turn a report into JSON-safe values with decimal strings."""
    if isinstance(obj, ApproxInterval):
        return obj.to_json()
    if hasattr(obj, "to_json"):
        return _plain(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (int, Fraction)):
        return str(obj)
    return obj if isinstance(obj, str) else str(obj)


def _flatten(obj, prefix: str = "") -> List[tuple]:
    if isinstance(obj, dict):
        rows = []
        for k in sorted(obj):
            rows += _flatten(obj[k], f"{prefix}.{k}" if prefix else k)
        return rows
    if isinstance(obj, list):
        rows = []
        for i, v in enumerate(obj):
            rows += _flatten(v, f"{prefix}[{i}]")
        return rows
    return [(prefix, "" if obj is None else str(obj).lower() if isinstance(obj, bool) else obj)]


def render(report, fmt: str) -> str:
    data = _plain(report)
    if fmt == "json":
        return json.dumps(data, sort_keys=True, indent=2)
    rows = _flatten(data)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    return "\n".join(f"{k}: {v}" for k, v in rows)


# --- argument helpers ---------------------------------------------------------------


def _d_range(text: str):
    try:
        if ":" in text:
            lo, hi = (int(x) for x in text.split(":"))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi or a single integer, got {text!r}")
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad degree range {text!r}")
    return lo, hi


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _bits(text: str) -> int:
    v = _positive(text)
    if v < 53:
        raise argparse.ArgumentTypeError("precision must be >= 53 bits")
    return v


def _single_degree(args) -> int:
    if args.d is None:
        raise UsageError("--d is required")
    lo, hi = args.d
    if lo != hi:
        raise UsageError("this command takes a single degree, e.g. --d 22")
    return lo


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"--{n.replace('_', '-')} is required")


# --- subcommands --------------------------------------------------------------------


def cmd_measure(args):
    f = parse_polynomial(args.polynomial)
    res = mahler_measure(f, args.precision_bits)
    out = res.to_json()
    out["polynomial"] = str(f)
    return out, EXIT_OK


def cmd_height(args):
    f = parse_polynomial(args.polynomial)
    return {"polynomial": str(f), "height": height(f, args.precision_bits)}, EXIT_OK


def cmd_house(args):
    f = parse_polynomial(args.polynomial)
    return {"polynomial": str(f), "house": house(f, args.precision_bits)}, EXIT_OK


BOUND_KINDS = ("theorem", "corollary1", "corollary2", "matveev", "dobrowolski")


def cmd_bound(args):
    if args.polynomial:
        f = parse_polynomial(args.polynomial)
        verdict = bounds.theorem_check(f, args.precision_bits)
        code = {"PASS": EXIT_OK, "FAIL": EXIT_FAIL}.get(verdict.verdict, EXIT_INCONCLUSIVE)
        return verdict, code
    d = _single_degree(args)
    which = [args.which] if args.which else list(BOUND_KINDS)
    out = {"d": d}
    for kind in which:
        if kind not in BOUND_KINDS:
            raise UsageError(f"--which must be one of {', '.join(BOUND_KINDS)}")
        try:
            if kind == "theorem":
                out[kind] = bounds.theorem_bound(d)
            elif kind == "corollary1":
                out[kind] = bounds.corollary1_bound(d)
            elif kind == "corollary2":
                h, m = bounds.corollary2_bounds(d)
                out[kind] = {"height": h, "measure": m}
            elif kind == "matveev":
                out[kind] = bounds.matveev_bound(d)
            else:
                out[kind] = bounds.dobrowolski_bound(d)
        except bounds.HypothesisError as exc:
            if args.which:
                raise
            out[kind] = f"n/a: {exc}"
    return out, EXIT_OK


def cmd_expr1(args):
    _need(args, "k", "s")
    d = _single_degree(args)
    p = bounds.BoundParams(d, args.k, args.s)
    table = primes.build_prime_table(max(args.s, 1))
    return {
        "d": d,
        "k": args.k,
        "s": args.s,
        "denominator": bounds.expression1_denominator(args.k, args.s, table.primes),
        "value": bounds.expression1(p, table),
    }, EXIT_OK


def cmd_verify_range(args):
    _need(args, "d", "k", "s", "c")
    lo, hi = args.d
    rep = bounds.verify_range(lo, hi, args.k, args.s, args.c, jobs=args.jobs)
    return rep, EXIT_OK if rep.passed else EXIT_FAIL


def _betas(text: str):
    return tuple(Fraction(b) for b in text.split(","))


def cmd_vandermonde(args):
    if args.polynomial:
        _need(args, "k", "s")
        f = parse_polynomial(args.polynomial)
        spec = vandermonde.HeightMatrixSpec(f, args.k, args.s)
        table = primes.build_prime_table(max(args.s, 1))
        cs = spec.confluent_spec(table, args.precision_bits)
        direct = vandermonde.det_abs(vandermonde.build_confluent_matrix(cs))
        closed = vandermonde.det_closed_form(cs)
        agree = direct.intersects(closed)
        out = {"n": cs.n, "abs_det_direct": direct, "abs_det_closed_form": closed, "agree": agree}
        return out, EXIT_OK if agree else EXIT_FAIL
    if not args.betas:
        raise UsageError("give a polynomial with --k/--s, or --betas")
    betas = _betas(args.betas)
    mult = tuple(int(m) for m in args.mult.split(",")) if args.mult else (1,) * len(betas)
    if len(mult) != len(betas):
        raise UsageError("--mult needs one entry per beta")
    cs = vandermonde.ConfluentSpec(betas, mult)
    direct = vandermonde.det_direct(vandermonde.build_confluent_matrix(cs))
    closed = vandermonde.closed_form_exact(cs)
    agree = abs(direct) == abs(closed)
    out = {"n": cs.n, "det_direct": direct, "det_closed_form": closed, "agree": agree}
    return out, EXIT_OK if agree else EXIT_FAIL


def cmd_decompose(args):
    _need(args, "k", "s")
    f = parse_polynomial(args.polynomial)
    spec = vandermonde.HeightMatrixSpec(f, args.k, args.s)
    table = primes.build_prime_table(max(args.s, 1))
    return vandermonde.decompose_v_squared(spec, table), EXIT_OK


def cmd_divisibility(args):
    f = parse_polynomial(args.polynomial)
    ps = [args.p] if args.p else primes.sieve(args.max or 13)
    rows = []
    ok = True
    for p in ps:
        good = vandermonde.fermat_divisibility_check(f, p)
        ok &= good
        rows.append({"p": p, "product": vandermonde.fermat_product(f, p), "divisible": good})
    return {"polynomial": str(f), "checks": rows, "passed": ok}, EXIT_OK if ok else EXIT_FAIL


def cmd_lemma(args):
    which = args.which or "1"
    if which == "1":
        rep = lemmas.check_lemma1(args.max or 1000)
    elif which == "2":
        S = args.max or 10**5
        table = primes.build_prime_table(S)
        parts = {
            "theta_lower": primes.check_theta_lower(table, S),
            "pi_upper": primes.check_pi_upper(table, S),
            "prime_sum_upper": primes.check_prime_sum_upper(table, S),
        }
        ok = all(r.passed for r in parts.values())
        parts["passed"] = ok
        return parts, EXIT_OK if ok else EXIT_FAIL
    elif which == "3":
        rep = lemmas.check_lemma3(jobs=args.jobs)
    elif which == "denominator":
        rep = lemmas.check_denominator_product()
    elif which == "f":
        rep = lemmas.minimize_f_region()
    else:
        raise UsageError("--which must be 1, 2, 3, denominator or f")
    return rep, EXIT_OK if rep.passed else EXIT_FAIL


def cmd_search(args):
    _need(args, "degree", "coeff_bound")
    spec = search.SearchSpec(
        args.degree,
        args.coeff_bound,
        reciprocal_only=args.reciprocal_only,
        measure_cutoff=args.cutoff if args.cutoff is not None else Fraction(13, 10),
        max_candidates=args.max or search.MAX_SPACE,
    )
    try:
        hits = search.find_small_measures(spec, jobs=args.jobs, checkpoint=args.checkpoint)
    except KeyboardInterrupt:
        # the checkpoint on disk already holds every finished chunk
        print("interrupted; resume with the same --checkpoint", file=sys.stderr)
        return None, 130
    if args.format == "csv":
        return [h.to_json() for h in hits], EXIT_OK
    return {"spec": spec.digest(), "count": len(hits), "hits": hits}, EXIT_OK


def cmd_suite(args):
    results = suite.run_suite(quick=args.quick, only=args.only, jobs=args.jobs)
    if args.only and not results:
        raise UsageError(f"no check named {args.only!r}")
    statuses = {r.status for r in results}
    if suite.FAIL in statuses:
        code = EXIT_FAIL
    elif suite.INCONCLUSIVE in statuses:
        code = EXIT_INCONCLUSIVE
    else:
        code = EXIT_OK
    if args.format == "text":
        width = max(len(r.name) for r in results)
        lines = [f"{r.status:<12} {r.name:<{width}}  {r.seconds:7.2f}s  {r.location}" for r in results]
        return "\n".join(lines), code
    return {"checks": results}, code


COMMANDS = {
    "measure": cmd_measure,
    "height": cmd_height,
    "house": cmd_house,
    "bound": cmd_bound,
    "expr1": cmd_expr1,
    "verify-range": cmd_verify_range,
    "vandermonde": cmd_vandermonde,
    "decompose": cmd_decompose,
    "divisibility": cmd_divisibility,
    "lemma": cmd_lemma,
    "search": cmd_search,
    "paper-suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=_bits, default=256)
    common.add_argument("--jobs", type=_positive, default=os.cpu_count() or 1)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--d", type=_d_range, help="degree or degree range lo:hi")
    common.add_argument("--k", type=_positive)
    common.add_argument("--s", type=int)
    common.add_argument("--c", type=_fraction)
    common.add_argument("--which")
    common.add_argument("--max", type=_positive)
    common.add_argument("--cutoff", type=_fraction)
    common.add_argument("--degree", type=_positive)
    common.add_argument("--coeff-bound", type=_positive)
    common.add_argument("--reciprocal-only", action="store_true")
    common.add_argument("--checkpoint")
    common.add_argument("--quick", action="store_true")
    common.add_argument("--only")
    common.add_argument("--p", type=_positive, help="single prime for divisibility")
    common.add_argument("--betas", help="comma-separated rationals for vandermonde")
    common.add_argument("--mult", help="comma-separated multiplicities for vandermonde")

    parser = argparse.ArgumentParser(prog="mahler-bound", description="Certified height and measure computations.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name in ("measure", "height", "house", "decompose", "divisibility"):
            p.add_argument("polynomial")
        elif name in ("bound", "vandermonde"):
            p.add_argument("polynomial", nargs="?")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.s is not None and args.s < 0:
        print("error: --s must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    try:
        report, code = COMMANDS[args.command](args)
    except (UsageError, PolynomialError, bounds.HypothesisError, search.SearchSpaceTooLarge, primes.TableTooSmallError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MeasureError, ArithmeticError) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if report is not None:
        print(report if isinstance(report, str) else render(report, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
