"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""
import time
from fractions import Fraction

import pytest

from bbpgen.bigfixed import atan_ref, frac_digits, ln_ref
from bbpgen.digit_extract import extract_digits
from bbpgen.generators import instantiate, list_families
from bbpgen.pnotation import PFormula, parse, parse_closed, partial_sum_exact
from bbpgen.series_eval import eval_closed, eval_p
from bbpgen.transforms import combine, rewrite_power
from bbpgen.verify import family_reports, grid_reports

PI_FORMULA = parse("P(1,16,8,(8,8,4,0,-2,-2,-1,0))")


@pytest.fixture
def record(capsys):
    def _record(number: int, title: str, ok: bool, detail: str = "") -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
                  + (f" ({detail})" if detail else ""))
        assert ok, detail
    return _record


def _value(f: PFormula, F: int) -> Fraction:
    return eval_p(f, F).value.to_fraction()


def _log2(x: Fraction) -> str:
    return "0" if x == 0 else f"2^{x.numerator.bit_length() - x.denominator.bit_length()}"


def test_family_identity_suite(record):
    t0 = time.perf_counter()
    reports = family_reports(256, 25)
    elapsed = time.perf_counter() - t0
    bound = Fraction(1, 2 ** 240)
    worst = max(r.residual.to_fraction() for r in reports)
    expected = sum(25 - d.n_min + 1 for d in list_families())
    ok = len(reports) == expected and worst < bound and not any(r.note for r in reports) and elapsed < 60
    record(1, "22 families, n_min..25, residual < 2^-240 at F=256", ok,
           f"{len(reports)} instances, worst {_log2(worst)}, {elapsed:.2f}s")


def test_pi_recovery(record):
    t0 = time.perf_counter()
    F = 1024
    diff = abs(_value(PI_FORMULA, F) - 16 * atan_ref(1, F).to_fraction())
    head = extract_digits(PI_FORMULA, 0, 8).digits
    deep = extract_digits(PI_FORMULA, 10 ** 4, 9).digits
    prev = extract_digits(PI_FORMULA, 10 ** 4 - 1, 10).digits
    elapsed = time.perf_counter() - t0
    ok = diff < Fraction(1, 2 ** 1000) and head == "90FDAA22" and prev[1:] == deep and elapsed < 10
    record(2, "pi formula vs 16 atan(1), hex digits, deep overlap", ok,
           f"|diff| {_log2(diff)}, head {head}, overlap {deep}, {elapsed:.2f}s")


def test_ln2(record):
    F = 1024
    diff = abs(_value(PFormula(1, 2, 1, (1,)), F) + 2 * ln_ref(Fraction(1, 2), F).to_fraction())
    record(3, "P(1,2,1,(1)) = -2 ln(1/2) at F=1024", diff < Fraction(1, 2 ** 1000), f"|diff| {_log2(diff)}")


def test_ln5_binary(record):
    F = 256
    diff = abs(_value(parse("P(1,-4,4,(2,0,-1,0))"), F) - ln_ref(5, F).to_fraction())
    record(4, "P(1,-4,4,(2,0,-1,0)) = ln 5", diff < Fraction(1, 2 ** 240), f"|diff| {_log2(diff)}")


def test_ln7(record):
    F = 256
    diff = abs(2 * _value(parse("P(1,-27,6,(9,0,0,0,-1,0))"), F) - 9 * ln_ref(7, F).to_fraction())
    record(5, "2 P(1,-27,6,(9,0,0,0,-1,0)) = 9 ln 7", diff < Fraction(1, 2 ** 240), f"|diff| {_log2(diff)}")


def test_rewrite_exactness(record):
    bad = []
    for n in range(2, 11):
        f = instantiate("A1", n).formula
        res = rewrite_power(f, 2)
        if res.formula.a != (n ** 3, 0, -n ** 2, 0, n, 0, -1, 0) or res.formula.b != n ** 4:
            bad.append((n, "coefficients"))
        for K in range(9):
            if partial_sum_exact(f, 2 * K) * res.scale != partial_sum_exact(res.formula, K):
                bad.append((n, K))
    record(6, "base-square rewrite, n=2..10, partial sums K<=8", not bad, f"mismatches {bad}" if bad else "")


def test_combination_exactness(record):
    bad = []
    worst = Fraction(0)
    F = 256
    for n in range(2, 11):
        c = combine(instantiate("A8", n), instantiate("A9", n), 1, 1)
        a10 = instantiate("A10", 3 * n * n)
        if c.formula != a10.formula or c.prefactor != 3 * a10.prefactor:
            bad.append(("A8+A9", n))
        s = combine(instantiate("L1", n), instantiate("L2", n), 1, 1)
        target = eval_closed(parse_closed(f"ln({n * n - 1}/{n * n})"), F).to_fraction()
        diff = abs(s.prefactor * _value(s.formula, F) - target)
        worst = max(worst, diff)
        if diff >= Fraction(1, 2 ** 240):
            bad.append(("L1+L2", n))
    record(7, "A8+A9 = 3 A10(3n^2) exactly; L1+L2 = ln((n^2-1)/n^2)", not bad,
           f"L1+L2 worst {_log2(worst)}" + (f", failures {bad}" if bad else ""))


def test_generator_grid(record):
    t0 = time.perf_counter()
    reports = grid_reports(128)
    elapsed = time.perf_counter() - t0
    failed = [r.subject for r in reports if not r.passed]
    ok = len(reports) == 120 and not failed and elapsed < 10
    record(8, "10x6 generator grid, arctan and log, F=128", ok,
           f"{len(reports) - len(failed)}/{len(reports)} passed, {elapsed:.2f}s")


def test_digit_eval_cross_validation(record):
    bad = []
    checked = 0
    c = 10
    for desc in list_families():
        for n in range(desc.n_min, 5):
            f = desc.instantiate(n).formula
            run = extract_digits(f, 0, c)
            g = rewrite_power(f, 2).formula if f.b < 0 else f
            F = (c + 30) * g.b.bit_length()
            want = frac_digits(eval_p(g, F).value, g.b, c)
            checked += 1
            if run.base != g.b or run.digits != want:
                bad.append((desc.label, n))
    record(9, "digit extraction matches eval_p rendering, d=0, c=10, n<=4", not bad,
           f"{checked} instances" + (f", mismatches {bad}" if bad else ""))
