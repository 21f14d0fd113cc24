"""Evaluation of P-formulas and closed forms to a requested binary precision."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bigfixed import (
    GUARD_BITS,
    BigFixed,
    DomainError,
    _atan_raw,
    _ln_raw,
    tdiv,
)
from .pnotation import (
    Add,
    Arctan,
    ClosedForm,
    Div,
    IntLit,
    Ln,
    Mul,
    Neg,
    PFormula,
    Rat,
    Sqrt,
    Sub,
    validate,
)

# the tail is required to be 2^-TAIL_MARGIN_BITS below the target
TAIL_MARGIN_BITS = 8


@dataclass(frozen=True)
class EvalReport:
    value: BigFixed
    terms_used: int
    tail_bound: BigFixed


def _abs_coeff_sum(f: PFormula) -> int:
    return sum(abs(a) for a in f.a)


def tail_start(f: PFormula, F: int) -> int:
    """Smallest K whose geometric tail majorant is below 2^-(F+8).

    The remainder after K outer terms is bounded by
    ``sum|a_j| * |b|^-K * |b| / (|b| - 1)`` because every denominator
    ``(mk+j)^s`` is at least 1.
    """
    validate(f)
    S = _abs_coeff_sum(f)
    if S == 0:
        return 0
    B = abs(f.b)
    lhs = S * B << (F + TAIL_MARGIN_BITS)
    # start from a K at which the condition certainly fails
    K = max(0, (lhs.bit_length() - (B - 1).bit_length() - 1) // B.bit_length())
    while (B - 1) * B ** K <= lhs:
        K += 1
    return K


def _tail_bound(f: PFormula, K: int, bits: int) -> BigFixed:
    S = _abs_coeff_sum(f)
    B = abs(f.b)
    num = S * B << bits
    den = (B - 1) * B ** K
    return BigFixed(-(-num // den), bits)  # rounded up


def eval_p(f: PFormula, F: int) -> EvalReport:
    """Sum the series to within 2^-F (truncated toward zero at F bits).

    Terms are accumulated at ``F + 64`` bits in ascending ``k``; each term is
    formed as one exact rational and divided once.
    """
    K = tail_start(f, F)
    G = F + GUARD_BITS
    acc = 0
    bk = 1
    for k in range(K):
        num = 0
        den = 1
        for j, a in enumerate(f.a, 1):
            if a:
                d = (f.m * k + j) ** f.s
                num = num * d + a * den
                den *= d
        acc += tdiv(num << G, den * bk)
        bk *= f.b
    value = BigFixed(acc, G).at(F)
    return EvalReport(value, K, _tail_bound(f, K, F + 2 * TAIL_MARGIN_BITS))


# ---------------------------------------------------------------------------
# closed forms with a running error bound (in units of 2^-G)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _eval_node(e: ClosedForm, G: int):
    one = 1 << G
    if isinstance(e, IntLit):
        return e.value << G, 0
    if isinstance(e, Rat):
        q = e.value
        num = q.numerator << G
        return tdiv(num, q.denominator), 0 if num % q.denominator == 0 else 1
    if isinstance(e, Neg):
        r, err = _eval_node(e.arg, G)
        return -r, err
    if isinstance(e, (Add, Sub)):
        r1, e1 = _eval_node(e.left, G)
        r2, e2 = _eval_node(e.right, G)
        return (r1 + r2 if isinstance(e, Add) else r1 - r2), e1 + e2
    if isinstance(e, Mul):
        r1, e1 = _eval_node(e.left, G)
        r2, e2 = _eval_node(e.right, G)
        spread = abs(r1) * e2 + abs(r2) * e1 + e1 * e2
        return tdiv(r1 * r2, one), _ceil_div(spread, one) + 1
    if isinstance(e, Div):
        r1, e1 = _eval_node(e.left, G)
        r2, e2 = _eval_node(e.right, G)
        if abs(r2) <= e2:
            raise DomainError(f"denominator of {e} may vanish")
        lo = abs(r2) - e2
        spread = (e1 * abs(r2) + abs(r1) * e2) << G
        return tdiv(r1 << G, r2), _ceil_div(spread, abs(r2) * lo) + 1
    if isinstance(e, Sqrt):
        r, err = _eval_node(e.arg, G)
        if r + err < 0:
            raise DomainError(f"sqrt of negative operand in {e}")
        value = math.isqrt(max(r, 0) << G)
        lo = r - err
        if err == 0:
            return value, 1
        if lo > 0:
            root_lo = math.isqrt(lo << G)
            if root_lo > 0:
                return value, _ceil_div(err << G, 2 * root_lo) + 2
        # |sqrt(u) - sqrt(v)| <= sqrt|u - v|
        return value, math.isqrt((2 * err) << G) + 2
    if isinstance(e, Arctan):
        r, err = _eval_node(e.arg, G)
        return _atan_raw(r, G), err + 2
    if isinstance(e, Ln):
        r, err = _eval_node(e.arg, G)
        lo = r - err
        if lo <= 0:
            raise DomainError(f"ln operand of {e} is not certainly positive")
        return _ln_raw(r, G, G), _ceil_div(err << G, lo) + 2
    raise TypeError(f"unknown closed-form node {type(e).__name__}")


def eval_closed_bounded(e: ClosedForm, G: int):
    """Value at G bits with a rigorous error bound, both as raw integers."""
    return _eval_node(e, G)


def eval_closed(e: ClosedForm, F: int) -> BigFixed:
    """Evaluate a closed form to within 2^(4-F).

    Works at ``F + 64`` bits and widens the working precision until the
    accumulated error bound drops below 2^-F.
    """
    G = F + GUARD_BITS
    while True:
        raw, err = _eval_node(e, G)
        if err <= 1 << (G - F):
            return BigFixed(raw, G).at(F)
        G += max(GUARD_BITS, err.bit_length() - (G - F) + 8)


def scaled(x: BigFixed, q: Fraction, F: int) -> BigFixed:
    """``q * x`` truncated to F bits, with a single rounding."""
    return BigFixed(tdiv(x.raw * q.numerator << F, q.denominator << x.frac_bits), F)
