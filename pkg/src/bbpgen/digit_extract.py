"""Digits of a P-formula's value at an arbitrary position.

For ``P(1, b, m, A)`` and position ``d`` the fractional part of ``b^d * P`` is

    frac( sum_j a_j * sum_{k<=d} (b^(d-k) mod (mk+j)) / (mk+j)
          + sum_j a_j * sum_{k>d} b^(d-k) / (mk+j) )

The head is accumulated modulo 1 in integer fixed point with ``c + g`` base
digits; the tail is a short convergent sum at the same precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .bigfixed import digit_string
from .pnotation import PFormula, validate
from .transforms import UnsupportedExponent, rewrite_power

DEFAULT_GUARD = 12
MAX_GUARD = 48


class BoundaryHazard(ArithmeticError):
    """The accumulated fraction is too close to a digit boundary to certify."""

    def __init__(self, message: str, guard_digits: int):
        super().__init__(message)
        self.guard_digits = guard_digits


@dataclass(frozen=True)
class DigitRun:
    base: int
    start: int
    digits: str
    guard_digits: int
    normalized_from: Optional[PFormula] = None


def mod_pow(base: int, exp: int, modulus: int) -> int:
    """``base**exp % modulus`` by left-to-right binary exponentiation."""
    if modulus < 1:
        raise ValueError("modulus must be positive")
    if exp < 0:
        raise ValueError("exponent must be nonnegative")
    if modulus == 1:
        return 0
    base %= modulus
    result = 1
    for bit in bin(exp)[2:]:
        result = result * result % modulus
        if bit == "1":
            result = result * base % modulus
    return result


def _fraction_digits(f: PFormula, d: int, width: int):
    """Return ``(acc, M, err)``: acc/M ~ frac(b^d * P) with |error| <= err / M."""
    B = f.b
    M = B ** width
    acc = 0
    err = 0
    # head, j ascending then k ascending
    for j, a in enumerate(f.a, 1):
        if a == 0:
            continue
        for k in range(d + 1):
            r = f.m * k + j
            num = (a % r) * mod_pow(B, d - k, r) % r
            acc = (acc + num * M // r) % M
            err += 1
    # tail: terms a_j / (B^(k-d) (mk+j)) with k > d, until they vanish at width
    S = sum(abs(a) for a in f.a)
    scale = B
    k = d + 1
    while S * M >= scale:
        for j, a in enumerate(f.a, 1):
            if a:
                acc += (a * M) // (scale * (f.m * k + j))
                err += 1
        scale *= B
        k += 1
    # geometric remainder of the tail: < S * M / (scale (B - 1)) <= 1 unit
    err += 1
    return acc % M, M, err


def extract_digits(f: PFormula, d: int, c: int, guard: int = DEFAULT_GUARD) -> DigitRun:
    """Digits ``d .. d+c-1`` (0 = first fractional digit) of ``frac(value(f))``.

    A negative base is first rewritten as ``P(1, b^2, 2m, ...)``; the digits
    are then those of that rewritten series, i.e. of ``b * value(f)``, in
    base ``b^2``.  Raises :class:`BoundaryHazard` when ``g`` guard digits
    cannot certify the last requested digit.
    """
    validate(f)
    if f.s != 1:
        raise UnsupportedExponent("digit extraction supports s == 1 only")
    if d < 0 or c < 1:
        raise ValueError("need d >= 0 and c >= 1")
    original = None
    if f.b < 0:
        original = f
        f = rewrite_power(f, 2).formula
    base = f.b
    if f.is_zero:
        return DigitRun(base, d, digit_string([0] * c, base), guard, original)

    acc, M, err = _fraction_digits(f, d, c + guard)
    window = base ** guard
    low = acc % window
    hazard = max(base ** (guard // 2), err)
    if low < hazard or window - low <= hazard:
        raise BoundaryHazard(
            f"fraction within base^-{c + guard // 2} of a digit boundary at d={d}", guard
        )
    top = acc // window
    out = []
    for _ in range(c):
        top, v = divmod(top, base)
        out.append(v)
    return DigitRun(base, d, digit_string(reversed(out), base), guard, original)


def extract_with_retry(f: PFormula, d: int, c: int, guard: int = DEFAULT_GUARD,
                       max_guard: int = MAX_GUARD) -> DigitRun:
    """Double the guard digits on :class:`BoundaryHazard` up to ``max_guard``."""
    g = guard
    while True:
        try:
            return extract_digits(f, d, c, g)
        except BoundaryHazard:
            if g * 2 > max_guard:
                raise
            g *= 2
