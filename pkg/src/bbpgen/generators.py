"""Registry of the parameterized BBP-type families.

Each family maps an integer ``n >= n_min`` to a :class:`FormulaInstance`
asserting ``closed_form == prefactor * P(1, b(n), m, A(n))``.  The arctangent
families come from ``sum p^k sin(kx)/k`` and the logarithm families from
``sum p^k cos(kx)/k`` at x in {pi/2, pi/3, pi/4, pi/6}.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple

from .pnotation import (
    Arctan,
    ClosedForm,
    Div,
    FormulaInstance,
    IntLit,
    Ln,
    Mul,
    PFormula,
    Sqrt,
    validate,
)


class GeneratorError(ValueError):
    pass


class UnknownFamily(GeneratorError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown family"


class ParameterTooSmall(GeneratorError):
    pass


@dataclass(frozen=True)
class FamilyDescriptor:
    family_id: str
    label: str  # short tag, A1..A10 / L1..L12
    kind: str  # "arctan" or "log"
    n_min: int
    length: int
    base: Callable[[int], int]
    prefactor: Callable[[int], Fraction]
    coefficients: Callable[[int], Sequence[int]]
    closed_form: Callable[[int], ClosedForm]
    template: str  # human-readable statement in n

    def instantiate(self, n: int) -> FormulaInstance:
        if n < self.n_min:
            raise ParameterTooSmall(f"{self.family_id} needs n >= {self.n_min}, got {n}")
        formula = PFormula(1, self.base(n), self.length, tuple(self.coefficients(n)))
        validate(formula)
        return FormulaInstance(self.family_id, n, Fraction(self.prefactor(n)), formula, self.closed_form(n))


def _i(v: int) -> IntLit:
    return IntLit(v)


def _r(v: int) -> Sqrt:
    return Sqrt(IntLit(v))


def _atan_frac(num: ClosedForm, den: int) -> Arctan:
    return Arctan(Div(num, IntLit(den)))


def _log_ratio(num: int, den: int) -> Ln:
    return Ln(Div(IntLit(num), IntLit(den)))


def _log_surd_ratio(n: int, c: int) -> Ln:
    # ln((n + sqrt(c n) + 1) / (n - sqrt(c n) + 1))
    root = _r(c * n)
    return Ln(Div(IntLit(n + 1) + root, IntLit(n + 1) - root))


_F = Fraction

_FAMILIES: List[FamilyDescriptor] = [
    FamilyDescriptor(
        "atan.pi2.base_n2", "A1", "arctan", 2, 4,
        lambda n: n * n,
        lambda n: _F(1, n),
        lambda n: (n, 0, -1, 0),
        lambda n: Mul(_r(n), Arctan(Div(_i(1), _r(n)))),
        "sqrt(n)*atan(1/sqrt(n)) = (1/n) P(1,n^2,4,(n,0,-1,0))",
    ),
    FamilyDescriptor(
        "atan.pi2.alt", "A2", "arctan", 2, 2,
        lambda n: -n,
        lambda n: _F(1),
        lambda n: (1, 0),
        lambda n: Mul(_r(n), Arctan(Div(_i(1), _r(n)))),
        "sqrt(n)*atan(1/sqrt(n)) = P(1,-n,2,(1,0))",
    ),
    FamilyDescriptor(
        "atan.pi3.minus", "A3", "arctan", 2, 3,
        lambda n: -n ** 3,
        lambda n: _F(3, 2),
        lambda n: (n, 1, 0),
        lambda n: Mul(Mul(_i(n * n), _r(3)), _atan_frac(_r(3), 2 * n - 1)),
        "n^2*sqrt(3)*atan(sqrt(3)/(2n-1)) = (3/2) P(1,-n^3,3,(n,1,0))",
    ),
    FamilyDescriptor(
        "atan.pi3.plus", "A4", "arctan", 2, 3,
        lambda n: n ** 3,
        lambda n: _F(3, 2),
        lambda n: (n, -1, 0),
        lambda n: Mul(Mul(_i(n * n), _r(3)), _atan_frac(_r(3), 2 * n + 1)),
        "n^2*sqrt(3)*atan(sqrt(3)/(2n+1)) = (3/2) P(1,n^3,3,(n,-1,0))",
    ),
    FamilyDescriptor(
        "atan.pi4.minus", "A5", "arctan", 1, 8,
        lambda n: 16 * n ** 8,
        lambda n: _F(1, 16),
        lambda n: (8 * n ** 6, 8 * n ** 5, 4 * n ** 4, 0, -2 * n ** 2, -2 * n, -1, 0),
        lambda n: Mul(_i(n ** 7), _atan_frac(_i(1), 2 * n - 1)),
        "n^7*atan(1/(2n-1)) = (1/16) P(1,16n^8,8,(8n^6,8n^5,4n^4,0,-2n^2,-2n,-1,0))",
    ),
    FamilyDescriptor(
        "atan.pi4.plus", "A6", "arctan", 1, 8,
        lambda n: 16 * n ** 8,
        lambda n: _F(1, 16),
        lambda n: (8 * n ** 6, -8 * n ** 5, 4 * n ** 4, 0, -2 * n ** 2, 2 * n, -1, 0),
        lambda n: Mul(_i(n ** 7), _atan_frac(_i(1), 2 * n + 1)),
        "n^7*atan(1/(2n+1)) = (1/16) P(1,16n^8,8,(8n^6,-8n^5,4n^4,0,-2n^2,2n,-1,0))",
    ),
    FamilyDescriptor(
        "atan.pi4.sum", "A7", "arctan", 2, 8,
        lambda n: n ** 4,
        lambda n: _F(2),
        lambda n: (n ** 3, 0, n * n, 0, -n, 0, -1, 0),
        lambda n: Mul(Mul(_i(n ** 3), _r(2 * n)), _atan_frac(_r(2 * n), n - 1)),
        "n^3*sqrt(2n)*atan(sqrt(2n)/(n-1)) = 2 P(1,n^4,8,(n^3,0,n^2,0,-n,0,-1,0))",
    ),
    FamilyDescriptor(
        "atan.pi6.minus", "A8", "arctan", 1, 6,
        lambda n: -27 * n ** 6,
        lambda n: _F(3, 2),
        lambda n: (9 * n ** 4, 9 * n ** 3, 6 * n * n, 3 * n, 1, 0),
        lambda n: Mul(Mul(_i(27 * n ** 5), _r(3)), Arctan(Div(_i(1), Mul(_r(3), _i(2 * n - 1))))),
        "27n^5*sqrt(3)*atan(1/(sqrt(3)(2n-1))) = (3/2) P(1,-27n^6,6,(9n^4,9n^3,6n^2,3n,1,0))",
    ),
    FamilyDescriptor(
        "atan.pi6.plus", "A9", "arctan", 1, 6,
        lambda n: -27 * n ** 6,
        lambda n: _F(3, 2),
        lambda n: (9 * n ** 4, -9 * n ** 3, 6 * n * n, -3 * n, 1, 0),
        lambda n: Mul(Mul(_i(27 * n ** 5), _r(3)), Arctan(Div(_i(1), Mul(_r(3), _i(2 * n + 1))))),
        "27n^5*sqrt(3)*atan(1/(sqrt(3)(2n+1))) = (3/2) P(1,-27n^6,6,(9n^4,-9n^3,6n^2,-3n,1,0))",
    ),
    FamilyDescriptor(
        "atan.pi6.sum", "A10", "arctan", 2, 6,
        lambda n: -n ** 3,
        lambda n: _F(1),
        lambda n: (n * n, 0, 2 * n, 0, 1, 0),
        lambda n: Mul(Mul(_i(n * n), _r(n)), _atan_frac(_r(n), n - 1)),
        "n^2*sqrt(n)*atan(sqrt(n)/(n-1)) = P(1,-n^3,6,(n^2,0,2n,0,1,0))",
    ),
    FamilyDescriptor(
        "log.pi2.plus", "L1", "log", 2, 2,
        lambda n: n * n,
        lambda n: _F(1, n * n),
        lambda n: (n, -1),
        lambda n: _log_ratio(n + 1, n),
        "ln((n+1)/n) = (1/n^2) P(1,n^2,2,(n,-1))",
    ),
    FamilyDescriptor(
        "log.pi2.minus", "L2", "log", 2, 2,
        lambda n: n * n,
        lambda n: _F(-1, n * n),
        lambda n: (n, 1),
        lambda n: _log_ratio(n - 1, n),
        "ln((n-1)/n) = -(1/n^2) P(1,n^2,2,(n,1))",
    ),
    FamilyDescriptor(
        "log.pi2.sum", "L3", "log", 2, 1,
        lambda n: n,
        lambda n: _F(-1, n),
        lambda n: (1,),
        lambda n: _log_ratio(n - 1, n),
        "ln((n-1)/n) = -(1/n) P(1,n,1,(1))",
    ),
    FamilyDescriptor(
        "log.pi2.diff", "L4", "log", 2, 2,
        lambda n: n,
        lambda n: _F(2),
        lambda n: (1, 0),
        lambda n: Mul(_r(n), Ln(Div(_r(n) + 1, _r(n) - 1))),
        "sqrt(n)*ln((sqrt(n)+1)/(sqrt(n)-1)) = 2 P(1,n,2,(1,0))",
    ),
    FamilyDescriptor(
        "log.pi3.minus", "L5", "log", 2, 3,
        lambda n: -n ** 3,
        lambda n: _F(-1, n ** 3),
        lambda n: (n * n, -n, -2),
        lambda n: _log_ratio(n * n - n + 1, n * n),
        "ln((n^2-n+1)/n^2) = -(1/n^3) P(1,-n^3,3,(n^2,-n,-2))",
    ),
    FamilyDescriptor(
        "log.pi3.plus", "L6", "log", 2, 3,
        lambda n: n ** 3,
        lambda n: _F(1, n ** 3),
        lambda n: (n * n, n, -2),
        lambda n: _log_ratio(n * n + n + 1, n * n),
        "ln((n^2+n+1)/n^2) = (1/n^3) P(1,n^3,3,(n^2,n,-2))",
    ),
    FamilyDescriptor(
        "log.pi4.minus", "L7", "log", 1, 4,
        lambda n: -4 * n ** 4,
        lambda n: _F(-1, 2 * n ** 4),
        lambda n: (2 * n ** 3, 0, -n, -1),
        lambda n: _log_ratio(2 * n * n - 2 * n + 1, 2 * n * n),
        "ln((2n^2-2n+1)/(2n^2)) = -(1/(2n^4)) P(1,-4n^4,4,(2n^3,0,-n,-1))",
    ),
    FamilyDescriptor(
        "log.pi4.plus", "L8", "log", 1, 4,
        lambda n: -4 * n ** 4,
        lambda n: _F(1, 2 * n ** 4),
        lambda n: (2 * n ** 3, 0, -n, 1),
        lambda n: _log_ratio(2 * n * n + 2 * n + 1, 2 * n * n),
        "ln((2n^2+2n+1)/(2n^2)) = (1/(2n^4)) P(1,-4n^4,4,(2n^3,0,-n,1))",
    ),
    FamilyDescriptor(
        "log.pi4.ratio", "L9", "log", 2, 4,
        lambda n: -n * n,
        lambda n: _F(2),
        lambda n: (n, 0, -1, 0),
        lambda n: Mul(Div(Mul(_i(n), _r(n)), _r(2)), _log_surd_ratio(n, 2)),
        "(n*sqrt(n)/sqrt(2))*ln((n+sqrt(2n)+1)/(n-sqrt(2n)+1)) = 2 P(1,-n^2,4,(n,0,-1,0))",
    ),
    FamilyDescriptor(
        "log.pi6.minus", "L10", "log", 1, 6,
        lambda n: -27 * n ** 6,
        lambda n: _F(-1, 27 * n ** 6),
        lambda n: (27 * n ** 5, 9 * n ** 4, 0, -3 * n * n, -3 * n, -2),
        lambda n: _log_ratio(3 * n * n - 3 * n + 1, 3 * n * n),
        "ln((3n^2-3n+1)/(3n^2)) = -(1/(27n^6)) P(1,-27n^6,6,(27n^5,9n^4,0,-3n^2,-3n,-2))",
    ),
    FamilyDescriptor(
        "log.pi6.plus", "L11", "log", 1, 6,
        lambda n: -27 * n ** 6,
        lambda n: _F(1, 27 * n ** 6),
        lambda n: (27 * n ** 5, -9 * n ** 4, 0, 3 * n * n, -3 * n, 2),
        lambda n: _log_ratio(3 * n * n + 3 * n + 1, 3 * n * n),
        "ln((3n^2+3n+1)/(3n^2)) = (1/(27n^6)) P(1,-27n^6,6,(27n^5,-9n^4,0,3n^2,-3n,2))",
    ),
    FamilyDescriptor(
        "log.pi6.ratio", "L12", "log", 2, 6,
        lambda n: -n ** 3,
        lambda n: _F(2),
        lambda n: (n * n, 0, 0, 0, -1, 0),
        lambda n: Mul(Div(Mul(_i(n * n), _r(n)), _r(3)), _log_surd_ratio(n, 3)),
        "(n^2*sqrt(n)/sqrt(3))*ln((n+sqrt(3n)+1)/(n-sqrt(3n)+1)) = 2 P(1,-n^3,6,(n^2,0,0,0,-1,0))",
    ),
]

_BY_ID: Dict[str, FamilyDescriptor] = {}
for _d in _FAMILIES:
    _BY_ID[_d.family_id] = _d
    _BY_ID[_d.label] = _d


def list_families() -> Tuple[FamilyDescriptor, ...]:
    return tuple(_FAMILIES)


def get_family(family_id: str) -> FamilyDescriptor:
    """Look up by stable id (``atan.pi4.minus``) or short label (``A5``)."""
    try:
        return _BY_ID[family_id]
    except KeyError:
        raise UnknownFamily(f"unknown family {family_id!r}") from None


def instantiate(family_id: str, n: int) -> FormulaInstance:
    return get_family(family_id).instantiate(n)

