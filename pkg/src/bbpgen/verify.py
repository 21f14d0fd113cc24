"""Numerical certification of the generator identities and every family.

Checks never raise; a failing identity comes back as a report with
``passed == False`` so that a whole suite can be used to proofread the
registry.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

from .bigfixed import (
    GUARD_BITS,
    BigFixed,
    DomainError,
    _atan_raw,
    _ln_raw,
    _pi_raw,
    ln_ref,
    pi_ref,
    sqrt_ref,
    tdiv,
)
from .generators import get_family, instantiate, list_families
from .pnotation import (
    Arctan,
    Div,
    FormulaInstance,
    IntLit,
    Ln,
    Mul,
    PFormula,
    Sqrt,
)
from .series_eval import eval_closed, eval_p, scaled
from .transforms import combine, rewrite_power


@dataclass(frozen=True)
class GeneratorPoint:
    """A point (p, x) with |p| < 1; ``x`` is ``angle * pi`` when ``in_pi`` is set."""

    p: Fraction
    angle: Fraction
    in_pi: bool = True

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "angle", Fraction(self.angle))
        if abs(self.p) >= 1:
            raise ValueError("generator points need |p| < 1")

    @property
    def label(self) -> str:
        return f"p={self.p},x={self.angle}{'pi' if self.in_pi else ''}"


@dataclass(frozen=True)
class VerifyReport:
    subject: str
    n: Optional[int]
    residual: BigFixed
    tolerance: BigFixed
    passed: bool
    F: int
    K: Optional[int] = None
    note: str = ""

    def residual_log2(self) -> Optional[float]:
        if self.residual.raw == 0:
            return None
        return math.log2(abs(self.residual.raw)) - self.residual.frac_bits

    def to_json(self) -> dict:
        out = {
            "subject": self.subject,
            "n": self.n,
            "F": self.F,
            "residual_log2": self.residual_log2(),
            "pass": self.passed,
        }
        if self.note:
            out["note"] = self.note
        return out


def _report(subject, n, residual: BigFixed, tolerance: BigFixed, F, K=None, note="") -> VerifyReport:
    r = abs(residual)
    top = max(r.frac_bits, tolerance.frac_bits)
    passed = r.at(top).raw < tolerance.at(top).raw
    return VerifyReport(subject, n, r, tolerance, passed, F, K, note)


def _failed(subject, n, F, exc: Exception) -> VerifyReport:
    return VerifyReport(subject, n, BigFixed(0, F), BigFixed(0, F), False, F, None,
                        f"{type(exc).__name__}: {exc}")


def _pow2(e: int, F: int) -> BigFixed:
    """2^e as a BigFixed with F fractional bits (e >= -F)."""
    return BigFixed(1 << (F + e), F)


# ---------------------------------------------------------------------------
# generator identities


def _sin_cos(angle: int, G: int):
    """(sin, cos) of angle * 2^-G by Taylor series, raw at G bits."""
    extra = G.bit_length() + 8
    W = G + extra
    x = angle << extra
    one = 1 << W
    s = c = 0
    term = one  # x^k / k!
    k = 0
    while term:
        if k % 2 == 0:
            c += term if k % 4 == 0 else -term
        else:
            s += term if k % 4 == 1 else -term
        k += 1
        term = tdiv(term * x, one * k)
    return tdiv(s, 1 << extra), tdiv(c, 1 << extra)


def _angle_raw(pt: GeneratorPoint, G: int) -> int:
    if pt.in_pi:
        return tdiv(_pi_raw(G) * pt.angle.numerator, pt.angle.denominator)
    return tdiv(pt.angle.numerator << G, pt.angle.denominator)


def truncation_terms(p: Fraction, F: int) -> int:
    """Smallest K with |p|^(K+1) / ((K+1)(1-|p|)) < 2^-F."""
    q = abs(Fraction(p))
    if q == 0:
        return 0
    K = 0
    power = q
    limit = Fraction(1, 1 << F) * (1 - q)
    while power / (K + 1) >= limit:
        K += 1
        power *= q
    return K


def _truncation_tolerance(p: Fraction, K: int, F: int) -> BigFixed:
    q = abs(Fraction(p))
    bits = F + GUARD_BITS
    tail = q ** (K + 1) / ((K + 1) * (1 - q))
    raw = -(-(tail.numerator << bits) // tail.denominator) + (1 << (bits - F + 6))
    return BigFixed(raw, bits)


def _generator_series(pt: GeneratorPoint, K: int, G: int):
    """(sum p^k cos kx / k, sum p^k sin kx / k) for k = 1..K, raw at G bits."""
    sin_x, cos_x = _sin_cos(_angle_raw(pt, G), G)
    one = 1 << G
    p_raw = tdiv(pt.p.numerator << G, pt.p.denominator)
    zr = tdiv(p_raw * cos_x, one)
    zi = tdiv(p_raw * sin_x, one)
    wr, wi = one, 0
    re_sum = im_sum = 0
    for k in range(1, K + 1):
        wr, wi = tdiv(wr * zr - wi * zi, one), tdiv(wr * zi + wi * zr, one)
        re_sum += wr // k if wr >= 0 else -((-wr) // k)
        im_sum += wi // k if wi >= 0 else -((-wi) // k)
    return re_sum, im_sum, sin_x, cos_x, p_raw


def check_generator_arctan(pt: GeneratorPoint, F: int = 128, K: Optional[int] = None) -> VerifyReport:
    """atan(p sin x / (1 - p cos x)) against sum_{k=1..K} p^k sin(kx)/k."""
    K = truncation_terms(pt.p, F) if K is None else K
    subject = f"generator.arctan[{pt.label}]"
    try:
        G = F + GUARD_BITS + (K.bit_length() + 8)
        _, im_sum, sin_x, cos_x, p_raw = _generator_series(pt, K, G)
        one = 1 << G
        den = one - tdiv(p_raw * cos_x, one)
        if den == 0:
            raise DomainError("1 - p cos x vanishes")
        num = tdiv(p_raw * sin_x, one)
        lhs = _atan_raw(tdiv(num << G, den), G)
        residual = BigFixed(lhs - im_sum, G)
        return _report(subject, None, residual, _truncation_tolerance(pt.p, K, F), F, K)
    except (DomainError, ZeroDivisionError) as exc:
        return _failed(subject, None, F, exc)


def check_generator_log(pt: GeneratorPoint, F: int = 128, K: Optional[int] = None) -> VerifyReport:
    """-(1/2) ln(1 - 2p cos x + p^2) against sum_{k=1..K} p^k cos(kx)/k."""
    K = truncation_terms(pt.p, F) if K is None else K
    subject = f"generator.log[{pt.label}]"
    try:
        G = F + GUARD_BITS + (K.bit_length() + 8)
        re_sum, _, _, cos_x, p_raw = _generator_series(pt, K, G)
        one = 1 << G
        arg = one - 2 * tdiv(p_raw * cos_x, one) + tdiv(p_raw * p_raw, one)
        lhs = -_ln_raw(arg, G, G) // 2
        residual = BigFixed(lhs - re_sum, G)
        return _report(subject, None, residual, _truncation_tolerance(pt.p, K, F), F, K)
    except (DomainError, ZeroDivisionError) as exc:
        return _failed(subject, None, F, exc)


GRID_P = tuple(Fraction(s * v, 10) for v in (1, 3, 5, 7, 9) for s in (1, -1))
GRID_X = (
    (Fraction(1, 2), True),
    (Fraction(1, 3), True),
    (Fraction(1, 4), True),
    (Fraction(1, 6), True),
    (Fraction(1), False),
    (Fraction(5, 2), False),
)


def generator_grid() -> List[GeneratorPoint]:
    return [GeneratorPoint(p, x, in_pi) for p in GRID_P for x, in_pi in GRID_X]


# ---------------------------------------------------------------------------
# family instances


def verify_instance(inst: FormulaInstance, F: int = 256, subject: Optional[str] = None) -> VerifyReport:
    """|closed_form - prefactor * P| against 2^(8-F)."""
    subject = subject or inst.family_id
    try:
        report = eval_p(inst.formula, F)
        rhs = scaled(report.value, inst.prefactor, F)
        lhs = eval_closed(inst.closed_form, F)
        residual = BigFixed(lhs.raw - rhs.raw, F)
        return _report(subject, inst.n, residual, _pow2(8 - F, F), F, report.terms_used)
    except (DomainError, ZeroDivisionError, ValueError) as exc:
        return _failed(subject, inst.n, F, exc)


def _check_constant(subject: str, n: int, formula: PFormula, prefactor: Fraction,
                    constant: BigFixed, F: int) -> VerifyReport:
    report = eval_p(formula, F)
    rhs = scaled(report.value, prefactor, F)
    residual = BigFixed(constant.at(F).raw - rhs.raw, F)
    return _report(subject, n, residual, _pow2(8 - F, F), F, report.terms_used)


def known_constant_reports(F: int = 256) -> List[VerifyReport]:
    """Instances whose value is a named constant, checked against the references."""
    G = F + GUARD_BITS
    pi = pi_ref(G)
    out = []
    i = instantiate("A5", 1)
    out.append(_check_constant("constant.pi_over_4", 1, i.formula, i.prefactor,
                               BigFixed(pi.raw >> 2, G), F))
    i = instantiate("L3", 2)
    out.append(_check_constant("constant.minus_ln2", 2, i.formula, i.prefactor, -ln_ref(2, G), F))
    i = instantiate("L9", 2)
    out.append(_check_constant("constant.ln5", 2, i.formula, i.prefactor / 2, ln_ref(5, G), F))
    i = instantiate("L12", 3)
    out.append(_check_constant("constant.9ln7", 3, i.formula, i.prefactor, BigFixed(9 * ln_ref(7, G).raw, G), F))
    # 27 sqrt(3) atan(1/sqrt(3)) = 27 sqrt(3) pi / 6 = 9 sqrt(3) pi / 2
    i = instantiate("A8", 1)
    root3 = sqrt_ref(3, G)
    out.append(_check_constant("constant.27sqrt3_pi_over_6", 1, i.formula, i.prefactor,
                               BigFixed(9 * root3.raw * pi.raw >> (G + 1), G), F))
    return out


# (label, family, n) for instances equal to well-known constant formulas
NAMED_CROSS_CHECKS = (
    ("named.pi_base16_len8", "A5", 1),
    ("named.sqrt3_pi_base_minus8", "A3", 2),
    ("named.sqrt3_atan_base27", "A4", 3),
    ("named.sqrt3_pi_base_minus27", "A8", 1),
    ("named.atan2_base16", "A7", 2),
    ("named.ln3_base4", "L4", 4),
    ("named.ln2_base9", "L4", 9),
    ("named.sqrt2_ln_base2", "L4", 2),
    ("named.ln_nine_tenths", "L3", 10),
    ("named.ln7_base_minus27", "L12", 3),
    ("named.ln5_base_minus4", "L9", 2),
)


def named_reports(F: int = 256) -> List[VerifyReport]:
    out = [verify_instance(instantiate(fam, n), F, subject=label) for label, fam, n in NAMED_CROSS_CHECKS]
    # base-16 length-8 rewrite of A1 at n = 2
    i = instantiate("A1", 2)
    res = rewrite_power(i.formula, 2)
    out.append(verify_instance(
        FormulaInstance("A1", 2, i.prefactor / res.scale, res.formula, i.closed_form), F,
        subject="named.sqrt2_atan_base16"))
    return out


def alternate_form_reports(F: int = 256, ns: Iterable[int] = range(1, 5)) -> List[VerifyReport]:
    """Equivalent restatements of the pi/6 families.

    The arctangent pair with its closed form divided by 3, and the logarithm
    pair written once with a shared +/- sign pattern.
    """
    out = []
    for n in ns:
        for label, sign in (("A8", -1), ("A9", 1)):
            base = instantiate(label, n)
            closed = Mul(Mul(IntLit(9 * n ** 5), Sqrt(IntLit(3))),
                         Arctan(Div(IntLit(1), Mul(Sqrt(IntLit(3)), IntLit(2 * n + sign)))))
            inst = FormulaInstance(label, n, Fraction(1, 2), base.formula, closed)
            out.append(verify_instance(inst, F, subject=f"alternate.{label}"))
        for label, s in (("L11", 1), ("L10", -1)):
            coeffs = (27 * n ** 5, -s * 9 * n ** 4, 0, s * 3 * n * n, -3 * n, s * 2)
            formula = PFormula(1, -27 * n ** 6, 6, coeffs)
            closed = Ln(Div(IntLit(3 * n * n + s * 3 * n + 1), IntLit(3 * n * n)))
            inst = FormulaInstance(label, n, Fraction(s, 27 * n ** 6), formula, closed)
            out.append(verify_instance(inst, F, subject=f"alternate.{label}"))
    return out


def _exact_report(subject: str, n: int, ok: bool, F: int, note: str = "") -> VerifyReport:
    residual = BigFixed(0 if ok else 1 << F, F)
    return _report(subject, n, residual, BigFixed(1, F), F, note=note)


def rewrite_reports(F: int = 256, ns: Iterable[int] = range(2, 11)) -> List[VerifyReport]:
    out = []
    for n in ns:
        a1 = instantiate("A1", n)
        res = rewrite_power(a1.formula, 2)
        want = PFormula(1, n ** 4, 8, (n ** 3, 0, -n * n, 0, n, 0, -1, 0))
        out.append(_exact_report("rewrite.A1_r2_base_n4", n,
                                 res.formula == want and res.scale == n * n, F))
        a2 = instantiate("A2", n)
        res = rewrite_power(a2.formula, 2)
        want = PFormula(1, n * n, 4, (-n, 0, 1, 0))
        ok = res.formula == want and res.scale == -n
        # sign extraction gives back A1 exactly
        ok = ok and tuple(-a for a in res.formula.a) == a1.formula.a and Fraction(1, n) == -a2.prefactor / res.scale
        out.append(_exact_report("rewrite.A2_to_A1", n, ok, F))
        rewritten = FormulaInstance("A2", n, a2.prefactor / res.scale, res.formula, a2.closed_form)
        out.append(verify_instance(rewritten, F, subject="rewrite.A2_r2_numeric"))
    return out


def combination_reports(F: int = 256, ns: Iterable[int] = range(2, 11)) -> List[VerifyReport]:
    out = []
    for n in ns:
        c = combine(instantiate("A8", n), instantiate("A9", n), 1, 1)
        a10 = instantiate("A10", 3 * n * n)
        ok = c.formula == a10.formula and c.prefactor == 3 * a10.prefactor
        out.append(_exact_report("combine.A8+A9=3*A10(3n^2)", n, ok, F))
        out.append(verify_instance(c, F, subject="combine.A8+A9"))
        out.append(verify_instance(combine(instantiate("A8", n), instantiate("A9", n), 1, -1), F,
                                   subject="combine.A8-A9"))

        c = combine(instantiate("A5", n), instantiate("A6", n), 1, 1)
        a7 = instantiate("A7", 2 * n * n)
        ok = c.formula == a7.formula and c.prefactor * 16 == a7.prefactor
        out.append(_exact_report("combine.A5+A6=A7(2n^2)/16", n, ok, F))
        out.append(verify_instance(c, F, subject="combine.A5+A6"))

        c = combine(instantiate("L1", n), instantiate("L2", n), 1, 1)
        target = FormulaInstance(c.family_id, n, c.prefactor, c.formula,
                                 Ln(Div(IntLit(n * n - 1), IntLit(n * n))))
        out.append(verify_instance(target, F, subject="combine.L1+L2=ln((n^2-1)/n^2)"))
    return out


def grid_reports(F: int = 128) -> List[VerifyReport]:
    out = []
    for pt in generator_grid():
        out.append(check_generator_arctan(pt, F))
        out.append(check_generator_log(pt, F))
    return out


def family_reports(F: int = 256, n_max: int = 25, families: Optional[Sequence[str]] = None) -> List[VerifyReport]:
    descs = [get_family(f) for f in families] if families else list_families()
    out = []
    for d in descs:
        for n in range(d.n_min, n_max + 1):
            out.append(verify_instance(d.instantiate(n), F))
    return out


def run_suite(F: int = 256, n_max: int = 25, families: Optional[Sequence[str]] = None,
              grid: bool = True, grid_bits: int = 128) -> List[VerifyReport]:
    """Every check, in registry order.

    With ``families`` given only those family sweeps run, skipping the
    cross-checks.
    """
    reports = family_reports(F, n_max, families)
    if families:
        return reports
    reports += known_constant_reports(F)
    reports += named_reports(F)
    reports += alternate_form_reports(F)
    reports += rewrite_reports(F)
    reports += combination_reports(F)
    if grid:
        reports += grid_reports(grid_bits)
    return reports


def reports_to_jsonl(reports: Iterable[VerifyReport]) -> str:
    return "\n".join(json.dumps(r.to_json(), sort_keys=True) for r in reports)
