"""Value-preserving formula algebra: base-power rewriting and linear combination."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence, Tuple

from .pnotation import (
    Add,
    FormulaInstance,
    IntLit,
    Mul,
    PFormula,
    Rat,
    validate,
)


class TransformError(ValueError):
    pass


class UnsupportedExponent(TransformError):
    pass


class ShapeMismatch(TransformError):
    pass


@dataclass(frozen=True)
class RewriteResult:
    """``value(original) == value(formula) / scale``."""

    formula: PFormula
    scale: Fraction


def rewrite_power(f: PFormula, r: int) -> RewriteResult:
    """Rewrite a base-b, length-m formula in base b^r with length m*r.

    Splitting k = r*k' + t gives coefficients ``a_j * b^(r-1-t)`` in slot
    ``m*t + j``, so the new series equals ``b^(r-1)`` times the old one.
    """
    validate(f)
    if f.s != 1:
        raise UnsupportedExponent("base-power rewriting needs s == 1")
    if r < 1:
        raise ValueError("r must be a positive integer")
    coeffs = []
    for t in range(r):
        w = f.b ** (r - 1 - t)
        coeffs.extend(a * w for a in f.a)
    out = PFormula(1, f.b ** r, f.m * r, tuple(coeffs))
    return RewriteResult(out, Fraction(f.b) ** (r - 1))


def rewrite_instance(inst: FormulaInstance, r: int) -> FormulaInstance:
    """Rewrite the formula of an instance and fold the scale into its prefactor."""
    res = rewrite_power(inst.formula, r)
    return FormulaInstance(inst.family_id, inst.n, inst.prefactor / res.scale, res.formula, inst.closed_form)


def normalize_coefficients(values: Sequence[Fraction]) -> Tuple[Fraction, Tuple[int, ...]]:
    """Split rational coefficients into ``(content, coprime integers)``.

    The first nonzero integer is positive; the sign goes into the content.
    An all-zero vector gives content 0.
    """
    values = [Fraction(v) for v in values]
    nonzero = [v for v in values if v]
    if not nonzero:
        return Fraction(0), tuple(0 for _ in values)
    den = reduce(math.lcm, (v.denominator for v in nonzero), 1)
    ints = [int(v * den) for v in values]
    g = reduce(math.gcd, ints)
    if nonzero[0] < 0:
        g = -g
    return Fraction(g, den), tuple(i // g for i in ints)


def combine(i1: FormulaInstance, i2: FormulaInstance, c1, c2) -> FormulaInstance:
    """The instance for ``c1 * i1 + c2 * i2``.

    Both formulas must share ``(s, b, m)``.  The closed form is the literal
    tree ``c1*cf1 + c2*cf2``; nothing is simplified.
    """
    f1, f2 = i1.formula, i2.formula
    if (f1.s, f1.b, f1.m) != (f2.s, f2.b, f2.m):
        raise ShapeMismatch(
            f"cannot combine P({f1.s},{f1.b},{f1.m},...) with P({f2.s},{f2.b},{f2.m},...)"
        )
    c1, c2 = Fraction(c1), Fraction(c2)
    w1, w2 = c1 * i1.prefactor, c2 * i2.prefactor
    prefactor, coeffs = normalize_coefficients([w1 * a + w2 * b for a, b in zip(f1.a, f2.a)])
    closed = Add(Mul(_lit(c1), i1.closed_form), Mul(_lit(c2), i2.closed_form))
    family = f"combine({i1.family_id},{i2.family_id},{c1},{c2})"
    return FormulaInstance(family, i1.n, prefactor, PFormula(f1.s, f1.b, f1.m, coeffs), closed)


def _lit(q: Fraction):
    return IntLit(q.numerator) if q.denominator == 1 else Rat(q)
