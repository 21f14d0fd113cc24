"""Command-line interface: ``bbpgen <command> [options]``.

Exit codes: 0 ok, 1 usage error, 2 domain/validation error,
3 persistent boundary hazard, 4 verification failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import List, Optional

from .bigfixed import DomainError, frac_digits, render
from .digit_extract import DEFAULT_GUARD, MAX_GUARD, BoundaryHazard, extract_with_retry
from .generators import GeneratorError, get_family, instantiate, list_families
from .pnotation import (
    PNotationError,
    closed_to_text,
    format_formula,
    instance_from_json,
    instance_to_json,
    parse,
    validate,
)
from .series_eval import eval_p
from .transforms import TransformError, combine, rewrite_instance, rewrite_power
from .verify import reports_to_jsonl, run_suite

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_HAZARD, EXIT_VERIFY = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _bits(text: str) -> int:
    v = int(text)
    if v < 32:
        raise argparse.ArgumentTypeError("precision must be at least 32 bits")
    return v


def _guard(text: str) -> int:
    v = int(text)
    if v < 4:
        raise argparse.ArgumentTypeError("guard digits must be at least 4")
    return v


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _emit(args, payload: dict, lines: List[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print("\n".join(lines))


def _load_instance(path: str):
    if path == "-":
        return instance_from_json(json.load(sys.stdin))
    with open(path) as fh:
        return instance_from_json(json.load(fh))


# ---------------------------------------------------------------------------


def cmd_families(args) -> int:
    rows = []
    for d in list_families():
        rows.append({"id": d.family_id, "label": d.label, "kind": d.kind, "n_min": d.n_min,
                     "length": d.length, "identity": d.template})
    if args.json:
        print(json.dumps(rows, sort_keys=True))
    else:
        for r in rows:
            print(f"{r['label']:<4} {r['id']:<18} n>={r['n_min']}  {r['identity']}")
    return EXIT_OK


def cmd_instantiate(args) -> int:
    inst = instantiate(args.family, args.n)
    if args.json:
        print(json.dumps(instance_to_json(inst), sort_keys=True))
    else:
        print(format_formula(inst.formula))
        print(f"prefactor {_fmt_q(inst.prefactor)}")
        print(f"closed_form {closed_to_text(inst.closed_form)}")
    return EXIT_OK


def cmd_eval(args) -> int:
    f = parse(args.formula)
    rep = eval_p(f, args.bits)
    decimals = int(args.bits * math.log10(2))
    payload = {
        "formula": format_formula(f),
        "bits": args.bits,
        "value": render(rep.value, 10, decimals),
        "terms": rep.terms_used,
        "error_bound_log2": -args.bits,
    }
    lines = [payload["value"], f"terms={rep.terms_used}  |error| <= 2^-{args.bits}"]
    if args.digits_base:
        digits = frac_digits(rep.value, args.digits_base, args.count)
        payload["digits"] = {"base": args.digits_base, "count": args.count, "digits": digits}
        lines.append(f"frac digits base {args.digits_base}: {digits}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_rewrite(args) -> int:
    f = parse(args.formula)
    res = rewrite_power(f, args.r)
    payload = {"formula": format_formula(res.formula), "scale": _fmt_q(res.scale)}
    _emit(args, payload, [payload["formula"], f"scale {payload['scale']}"])
    return EXIT_OK


def cmd_combine(args) -> int:
    a = _load_instance(args.a)
    b = _load_instance(args.b)
    if args.rewrite_a > 1:
        a = rewrite_instance(a, args.rewrite_a)
    if args.rewrite_b > 1:
        b = rewrite_instance(b, args.rewrite_b)
    inst = combine(a, b, args.c1, args.c2)
    if args.json:
        print(json.dumps(instance_to_json(inst), sort_keys=True))
    else:
        print(format_formula(inst.formula))
        print(f"prefactor {_fmt_q(inst.prefactor)}")
        print(f"closed_form {closed_to_text(inst.closed_form)}")
    return EXIT_OK


def cmd_digits(args) -> int:
    f = parse(args.formula)
    validate(f)
    try:
        run = extract_with_retry(f, args.pos, args.count, args.guard, max(args.guard, MAX_GUARD))
    except BoundaryHazard as exc:
        print(f"boundary hazard: {exc}", file=sys.stderr)
        return EXIT_HAZARD
    payload = {
        "base": run.base,
        "start": run.start,
        "digits": run.digits,
        "guard_digits": run.guard_digits,
        "normalized_from": format_formula(run.normalized_from) if run.normalized_from else None,
    }
    lines = [run.digits]
    if run.normalized_from is not None:
        lines.append(f"(digits of the base-{run.base} rewrite of {format_formula(run.normalized_from)})")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    families = [get_family(args.family).family_id] if args.family else None
    reports = run_suite(args.bits, args.n_max, families, grid=args.grid or not families)
    if args.json:
        print(reports_to_jsonl(reports))
    else:
        for r in reports:
            lg = r.residual_log2()
            res = "0" if lg is None else f"2^{lg:.1f}"
            n = "" if r.n is None else f" n={r.n}"
            print(f"{'PASS' if r.passed else 'FAIL'} {r.subject}{n} residual={res}{'  ' + r.note if r.note else ''}")
        failed = sum(not r.passed for r in reports)
        print(f"{len(reports) - failed}/{len(reports)} checks passed")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bbpgen", description="BBP-type formula families: evaluate, transform, extract digits.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    common(sub.add_parser("families", help="list the formula families")).set_defaults(func=cmd_families)

    p = common(sub.add_parser("instantiate", help="instantiate a family at n"))
    p.add_argument("--family", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_instantiate)

    p = common(sub.add_parser("eval", help="evaluate a P-formula"))
    p.add_argument("--formula", required=True)
    p.add_argument("--bits", type=_bits, default=256)
    p.add_argument("--digits-base", type=int, default=None)
    p.add_argument("--count", type=int, default=32)
    p.set_defaults(func=cmd_eval)

    p = common(sub.add_parser("rewrite", help="rewrite a formula in base b^r"))
    p.add_argument("--formula", required=True)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_rewrite)

    p = common(sub.add_parser("combine", help="linear combination of two instance JSON files"))
    p.add_argument("--a", required=True, help="instance JSON file ('-' for stdin)")
    p.add_argument("--b", required=True, help="instance JSON file")
    p.add_argument("--c1", type=_rational, default=Fraction(1))
    p.add_argument("--c2", type=_rational, default=Fraction(1))
    p.add_argument("--rewrite-a", type=int, default=1, help="rewrite the first instance to base b^R first")
    p.add_argument("--rewrite-b", type=int, default=1, help="rewrite the second instance to base b^R first")
    p.set_defaults(func=cmd_combine)

    p = common(sub.add_parser("digits", help="extract digits at a position"))
    p.add_argument("--formula", required=True)
    p.add_argument("--pos", type=int, required=True)
    p.add_argument("--count", type=int, default=8)
    p.add_argument("--guard", type=_guard, default=DEFAULT_GUARD)
    p.set_defaults(func=cmd_digits)

    p = common(sub.add_parser("verify", help="run the verification suite"))
    p.add_argument("--family", default=None)
    p.add_argument("--n-max", type=int, default=25)
    p.add_argument("--bits", type=_bits, default=256)
    p.add_argument("--grid", action="store_true", help="include the generator grid")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PNotationError, GeneratorError, TransformError, DomainError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
