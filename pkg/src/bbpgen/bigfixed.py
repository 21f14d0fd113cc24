"""Signed arbitrary-precision binary fixed point.

A :class:`BigFixed` is an integer ``raw`` together with a count of fractional
bits ``frac_bits``; its value is ``raw * 2**-frac_bits``.  Every operation takes
the target precision explicitly and truncates toward zero.

The reference functions (:func:`sqrt_ref`, :func:`atan_ref`, :func:`ln_ref`)
work internally at ``F + GUARD_BITS`` bits and truncate at the end.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

GUARD_BITS = 64

DIGIT_ALPHABET = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"


class DomainError(ValueError):
    """Argument outside the domain of a reference function."""


class NegativeOperand(DomainError):
    pass


class DivideByZero(ZeroDivisionError):
    pass


def tdiv(num: int, den: int) -> int:
    """Integer quotient truncated toward zero."""
    if den == 0:
        raise DivideByZero("division by zero")
    q = abs(num) // abs(den)
    return q if (num < 0) == (den < 0) else -q


def _shift(raw: int, bits: int) -> int:
    # left shift for bits >= 0, truncating right shift otherwise
    if bits >= 0:
        return raw << bits
    return -((-raw) >> -bits) if raw < 0 else raw >> -bits


@dataclass(frozen=True)
class BigFixed:
    raw: int
    frac_bits: int

    def __post_init__(self):
        if self.frac_bits < 0:
            raise ValueError("frac_bits must be nonnegative")

    @property
    def sign(self) -> int:
        return (self.raw > 0) - (self.raw < 0)

    @property
    def magnitude(self) -> int:
        return abs(self.raw)

    @classmethod
    def from_int(cls, value: int, frac_bits: int) -> BigFixed:
        return cls(value << frac_bits, frac_bits)

    @classmethod
    def from_rational(cls, value: Union[int, Fraction], frac_bits: int) -> BigFixed:
        q = Fraction(value)
        return cls(tdiv(q.numerator << frac_bits, q.denominator), frac_bits)

    def to_fraction(self) -> Fraction:
        return Fraction(self.raw, 1 << self.frac_bits)

    def at(self, frac_bits: int) -> BigFixed:
        """Re-express at another precision (exact when widening)."""
        return BigFixed(_shift(self.raw, frac_bits - self.frac_bits), frac_bits)

    def __neg__(self) -> BigFixed:
        return BigFixed(-self.raw, self.frac_bits)

    def __abs__(self) -> BigFixed:
        return BigFixed(abs(self.raw), self.frac_bits)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def __repr__(self) -> str:
        return f"BigFixed({render(self, 10, min(40, self.frac_bits // 3 + 1))}, F={self.frac_bits})"


Number = Union[BigFixed, int, Fraction]


def as_fixed(x: Number, frac_bits: int) -> BigFixed:
    """Coerce ints and fractions; BigFixed values pass through unchanged."""
    if isinstance(x, BigFixed):
        return x
    return BigFixed.from_rational(x, frac_bits)


def add(x: BigFixed, y: BigFixed, F: int) -> BigFixed:
    top = max(x.frac_bits, y.frac_bits)
    exact = x.at(top).raw + y.at(top).raw
    return BigFixed(_shift(exact, F - top), F)


def sub(x: BigFixed, y: BigFixed, F: int) -> BigFixed:
    return add(x, -y, F)


def mul(x: BigFixed, y: BigFixed, F: int) -> BigFixed:
    return BigFixed(_shift(x.raw * y.raw, F - x.frac_bits - y.frac_bits), F)


def div(x: BigFixed, y: BigFixed, F: int) -> BigFixed:
    if y.raw == 0:
        raise DivideByZero("BigFixed division by zero")
    # x/y * 2^F = x.raw * 2^(F + Fy - Fx) / y.raw
    e = F + y.frac_bits - x.frac_bits
    if e >= 0:
        return BigFixed(tdiv(x.raw << e, y.raw), F)
    return BigFixed(tdiv(x.raw, y.raw << -e), F)


# ---------------------------------------------------------------------------
# reference functions, all on raw integers at guard precision G


def _isqrt_raw(raw: int, src_bits: int, G: int) -> int:
    """floor(sqrt(raw * 2^-src_bits) * 2^G) for raw >= 0."""
    e = 2 * G - src_bits
    return math.isqrt(_shift(raw, e))


def sqrt_ref(x: Number, F: int) -> BigFixed:
    """Square root truncated to ``F`` fractional bits."""
    x = as_fixed(x, F + GUARD_BITS)
    if x.raw < 0:
        raise NegativeOperand("sqrt of negative operand")
    G = F + GUARD_BITS
    return BigFixed(_isqrt_raw(x.raw, x.frac_bits, G), G).at(F)


def _atan_series(t: int, G: int) -> int:
    """arctan(t * 2^-G) by Taylor series for 0 <= t < 2^G / 4."""
    t2 = (t * t) >> G
    power = t
    total = 0
    k = 0
    while power:
        term = power // (2 * k + 1)
        total += -term if k & 1 else term
        power = (power * t2) >> G
        k += 1
    return total


def _atan_inv_int(q: int, G: int) -> int:
    """arctan(1/q) for an integer q >= 2, at precision G."""
    # power = 2^G / q^(2k+1); every step is an exact-floor integer division
    power = (1 << G) // q
    q2 = q * q
    total = 0
    k = 0
    while power:
        term = power // (2 * k + 1)
        total += -term if k & 1 else term
        power //= q2
        k += 1
    return total


def _work_bits(G: int) -> int:
    # room for one truncation per series term (fewer than G terms) times 2^4
    return G.bit_length() + 8


@lru_cache(maxsize=64)
def _pi_raw(G: int) -> int:
    # Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    extra = _work_bits(G)
    W = G + extra
    return (16 * _atan_inv_int(5, W) - 4 * _atan_inv_int(239, W)) >> extra


def pi_ref(F: int) -> BigFixed:
    G = F + GUARD_BITS
    return BigFixed(_pi_raw(G), G).at(F)


def _atan_raw(t: int, G: int) -> int:
    """arctan(t * 2^-G) at precision G, within 2 units of 2^-G."""
    extra = _work_bits(G)
    out = _atan_work(t << extra, G + extra)
    return -((-out) >> extra) if out < 0 else out >> extra


def _atan_work(t: int, G: int) -> int:
    if t == 0:
        return 0
    if t < 0:
        return -_atan_work(-t, G)
    one = 1 << G
    if t > one:
        # arctan(x) = pi/2 - arctan(1/x)
        inv = (one << G) // t
        return (_pi_raw(G) >> 1) - _atan_work(inv, G)
    halvings = 0
    quarter = one >> 2
    while t >= quarter:
        # arctan(x) = 2 arctan(x / (1 + sqrt(1 + x^2)))
        root = math.isqrt((one << G) + t * t)
        t = (t << G) // (one + root)
        halvings += 1
    return _atan_series(t, G) << halvings


def atan_ref(x: Number, F: int) -> BigFixed:
    """Arctangent truncated to ``F`` fractional bits; error within 2^(2-F)."""
    G = F + GUARD_BITS
    x = as_fixed(x, G)
    return BigFixed(_atan_raw(x.at(G).raw, G), G).at(F)


def _atanh_series(t: int, G: int) -> int:
    """atanh(t * 2^-G) for 0 <= t <= 2^G / 3."""
    t2 = (t * t) >> G
    power = t
    total = 0
    k = 0
    while power:
        total += power // (2 * k + 1)
        power = (power * t2) >> G
        k += 1
    return total


@lru_cache(maxsize=64)
def _ln2_raw(G: int) -> int:
    extra = _work_bits(G)
    W = G + extra
    third = (1 << W) // 3
    return (2 * _atanh_series(third, W)) >> extra


def _ln_raw(raw: int, src_bits: int, G: int) -> int:
    if raw <= 0:
        raise DomainError("ln of nonpositive operand")
    # x = raw * 2^-src_bits = y * 2^k with y in [1, 2)
    k = raw.bit_length() - 1 - src_bits
    guard = _work_bits(G)
    W = G + guard
    y = _shift(raw, W - src_bits - k)
    one = 1 << W
    t = ((y - one) << W) // (y + one)
    out = 2 * _atanh_series(t, W)
    if k:
        extra = abs(k).bit_length()
        out += k * (_ln2_raw(W + extra) >> extra)
    return -((-out) >> guard) if out < 0 else out >> guard


def ln_ref(x: Number, F: int) -> BigFixed:
    """Natural logarithm truncated to ``F`` fractional bits."""
    G = F + GUARD_BITS
    x = as_fixed(x, G)
    return BigFixed(_ln_raw(x.raw, x.frac_bits, G), G).at(F)


# ---------------------------------------------------------------------------
# rendering


def digit_string(values, base: int) -> str:
    """Join digit values; bases above 36 use colon-separated decimals."""
    if base <= 36:
        return "".join(DIGIT_ALPHABET[v] for v in values)
    return ":".join(str(v) for v in values)


def frac_digits(x: BigFixed, base: int, count: int, start: int = 0) -> str:
    """Digits ``start .. start+count-1`` of ``x - floor(x)`` in ``base``.

    The digits are those of the stored binary value, computed exactly.
    """
    if base < 2:
        raise ValueError("base must be >= 2")
    frac = x.raw & ((1 << x.frac_bits) - 1)  # floor-based for negatives too
    block = (frac * base ** (start + count)) >> x.frac_bits
    block %= base ** count
    out = []
    for _ in range(count):
        block, d = divmod(block, base)
        out.append(d)
    return digit_string(reversed(out), base)


def render(x: BigFixed, base: int = 10, count: int = 20) -> str:
    """Sign, integer part and ``count`` truncated fractional digits of ``|x|``."""
    mag = abs(x.raw)
    ipart = mag >> x.frac_bits
    if base <= 36:
        digits = []
        v = ipart
        while True:
            v, d = divmod(v, base)
            digits.append(d)
            if v == 0:
                break
        head = digit_string(reversed(digits), base)
    else:
        head = str(ipart)
    tail = frac_digits(BigFixed(mag, x.frac_bits), base, count) if count else ""
    sign = "-" if x.raw < 0 else ""
    sep = "." if base <= 36 else ";"
    return f"{sign}{head}{sep}{tail}" if count else f"{sign}{head}"
