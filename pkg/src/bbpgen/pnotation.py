"""P-notation formulas, closed-form expression trees and formula instances.

``P(s, b, m, (a_1, ..., a_m))`` denotes the series

    sum_{k>=0} b^-k * sum_{j=1..m} a_j / (m*k + j)^s

Rationals are :class:`fractions.Fraction` (always reduced, positive
denominator).  Closed forms are small immutable trees; their text form is
plain infix with ``atan``, ``ln`` and ``sqrt``.
"""
from __future__ import annotations

import ast
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence, Tuple

__all__ = [
    "PFormula", "FormulaInstance", "validate", "partial_sum_exact", "parse",
    "format_formula", "normalize", "formula_to_json", "formula_from_json",
    "instance_to_json", "instance_from_json", "term_exact",
    "ClosedForm", "IntLit", "Rat", "Sqrt", "Add", "Sub", "Mul", "Div",
    "Neg", "Arctan", "Ln", "closed_to_text", "parse_closed",
    "PNotationError", "InvalidBase", "BadLength", "BadExponent", "ParseError",
]


class PNotationError(ValueError):
    pass


class InvalidBase(PNotationError):
    pass


class BadLength(PNotationError):
    pass


class BadExponent(PNotationError):
    pass


class ParseError(PNotationError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class PFormula:
    s: int
    b: int
    m: int
    a: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))

    @property
    def is_zero(self) -> bool:
        return not any(self.a)

    def __str__(self) -> str:
        return format_formula(self)


def validate(f: PFormula) -> None:
    """Raise if ``f`` is not a convergent, well-shaped P-formula."""
    if f.s < 1:
        raise BadExponent(f"s must be >= 1, got {f.s}")
    if abs(f.b) < 2:
        raise InvalidBase(f"|b| must be >= 2, got {f.b}")
    if f.m < 1 or len(f.a) != f.m:
        raise BadLength(f"expected {f.m} coefficients, got {len(f.a)}")


def term_exact(f: PFormula, k: int) -> Fraction:
    """The k-th outer term b^-k * sum_j a_j / (mk+j)^s, exactly."""
    inner = sum(
        (Fraction(a, (f.m * k + j) ** f.s) for j, a in enumerate(f.a, 1) if a),
        Fraction(0),
    )
    return inner / Fraction(f.b) ** k


def partial_sum_exact(f: PFormula, K: int) -> Fraction:
    validate(f)
    if K < 0:
        raise ValueError("K must be nonnegative")
    return sum((term_exact(f, k) for k in range(K)), Fraction(0))


# ---------------------------------------------------------------------------
# text form

_INT = re.compile(r"\s*([+-]?\s*\d+)\s*")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str):
        self.skip()
        if not self.text.startswith(ch, self.pos):
            raise ParseError(f"expected {ch!r}", self.pos)
        self.pos += len(ch)

    def integer(self) -> int:
        m = _INT.match(self.text, self.pos)
        if not m:
            raise ParseError("expected integer literal", self.pos)
        self.pos = m.end()
        return int(m.group(1).replace(" ", ""))


def parse(text: str) -> PFormula:
    """Parse ``P(s,b,m,(a1,...,am))``; only integer literals are accepted."""
    sc = _Scanner(text)
    sc.expect("P")
    sc.expect("(")
    s = sc.integer()
    sc.expect(",")
    b = sc.integer()
    sc.expect(",")
    m = sc.integer()
    sc.expect(",")
    sc.expect("(")
    coeffs = [sc.integer()]
    while True:
        sc.skip()
        if sc.text.startswith(",", sc.pos):
            sc.pos += 1
            coeffs.append(sc.integer())
        else:
            break
    sc.expect(")")
    sc.expect(")")
    sc.skip()
    if sc.pos != len(text):
        raise ParseError("trailing input", sc.pos)
    return PFormula(s, b, m, tuple(coeffs))


def format_formula(f: PFormula) -> str:
    return f"P({f.s},{f.b},{f.m},({','.join(str(a) for a in f.a)}))"


def normalize(text: str) -> str:
    """Canonical text: whitespace removed, ``+`` signs and leading zeros dropped."""
    return format_formula(parse(text))


def formula_to_json(f: PFormula) -> dict:
    return {"s": f.s, "b": f.b, "m": f.m, "a": list(f.a)}


def formula_from_json(obj: dict) -> PFormula:
    return PFormula(int(obj["s"]), int(obj["b"]), int(obj["m"]), tuple(obj["a"]))


# ---------------------------------------------------------------------------
# closed forms


class ClosedForm:
    """Base class for expression-tree nodes."""

    def __add__(self, other):
        return Add(self, _lift(other))

    def __radd__(self, other):
        return Add(_lift(other), self)

    def __sub__(self, other):
        return Sub(self, _lift(other))

    def __rsub__(self, other):
        return Sub(_lift(other), self)

    def __mul__(self, other):
        return Mul(self, _lift(other))

    def __rmul__(self, other):
        return Mul(_lift(other), self)

    def __truediv__(self, other):
        return Div(self, _lift(other))

    def __rtruediv__(self, other):
        return Div(_lift(other), self)

    def __neg__(self):
        return Neg(self)

    def __str__(self) -> str:
        return closed_to_text(self)

    def depth(self) -> int:
        kids = [v for v in vars(self).values() if isinstance(v, ClosedForm)]
        return 1 + max((k.depth() for k in kids), default=0)


def _lift(x) -> ClosedForm:
    if isinstance(x, ClosedForm):
        return x
    if isinstance(x, int):
        return IntLit(x)
    if isinstance(x, Fraction):
        return IntLit(x.numerator) if x.denominator == 1 else Rat(x)
    raise TypeError(f"cannot use {type(x).__name__} in a closed form")


@dataclass(frozen=True, eq=True)
class IntLit(ClosedForm):
    value: int


@dataclass(frozen=True, eq=True)
class Rat(ClosedForm):
    value: Fraction


@dataclass(frozen=True, eq=True)
class Sqrt(ClosedForm):
    arg: ClosedForm


@dataclass(frozen=True, eq=True)
class Neg(ClosedForm):
    arg: ClosedForm


@dataclass(frozen=True, eq=True)
class Add(ClosedForm):
    left: ClosedForm
    right: ClosedForm


@dataclass(frozen=True, eq=True)
class Sub(ClosedForm):
    left: ClosedForm
    right: ClosedForm


@dataclass(frozen=True, eq=True)
class Mul(ClosedForm):
    left: ClosedForm
    right: ClosedForm


@dataclass(frozen=True, eq=True)
class Div(ClosedForm):
    left: ClosedForm
    right: ClosedForm


@dataclass(frozen=True, eq=True)
class Arctan(ClosedForm):
    arg: ClosedForm


@dataclass(frozen=True, eq=True)
class Ln(ClosedForm):
    arg: ClosedForm


_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3}
_FUNCS = {Sqrt: "sqrt", Arctan: "atan", Ln: "ln"}
_BINOPS = {Add: "+", Sub: "-", Mul: "*", Div: "/"}


def _prec(e: ClosedForm) -> int:
    if isinstance(e, IntLit) and e.value < 0:
        return 3
    if isinstance(e, Rat):
        return 3 if e.value < 0 else 2
    return _PREC.get(type(e), 4)


def _negative_literal(e: ClosedForm) -> bool:
    return isinstance(e, (IntLit, Rat)) and e.value < 0


def closed_to_text(e: ClosedForm) -> str:
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, Rat):
        return f"{e.value.numerator}/{e.value.denominator}"
    if type(e) in _FUNCS:
        return f"{_FUNCS[type(e)]}({closed_to_text(e.arg)})"
    if isinstance(e, Neg):
        inner = closed_to_text(e.arg)
        return f"-{inner}" if _prec(e.arg) > 3 else f"-({inner})"
    op = _BINOPS[type(e)]
    p = _prec(e)
    left = closed_to_text(e.left)
    if _prec(e.left) < p or _negative_literal(e.left):
        left = f"({left})"
    right = closed_to_text(e.right)
    # right operand of - and / needs parentheses at equal precedence
    if (_prec(e.right) < p or (_prec(e.right) == p and type(e) in (Sub, Div))
            or _prec(e.right) == 3 or _negative_literal(e.right)):
        right = f"({right})"
    return f"{left}{op}{right}"


_AST_BIN = {ast.Add: Add, ast.Sub: Sub, ast.Mult: Mul, ast.Div: Div}
_AST_FUNCS = {"sqrt": Sqrt, "atan": Arctan, "arctan": Arctan, "ln": Ln, "log": Ln}


def parse_closed(text: str) -> ClosedForm:
    """Parse the infix text produced by :func:`closed_to_text`.

    Integer division ``p/q`` of two literals is kept as a ``Div`` node; the
    value is the same as the corresponding ``Rat``.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval").body
    except SyntaxError as exc:
        raise ParseError(f"bad closed form: {exc.msg}", (exc.offset or 1) - 1) from None

    def build(node) -> ClosedForm:
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return IntLit(node.value)
        if isinstance(node, ast.BinOp) and type(node.op) in _AST_BIN:
            return _AST_BIN[type(node.op)](build(node.left), build(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            inner = build(node.operand)
            return IntLit(-inner.value) if isinstance(inner, IntLit) else Neg(inner)
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _AST_FUNCS and len(node.args) == 1 and not node.keywords):
            return _AST_FUNCS[node.func.id](build(node.args[0]))
        raise ParseError(f"unsupported syntax {ast.dump(node)[:40]}", getattr(node, "col_offset", 0))

    return build(tree)


# ---------------------------------------------------------------------------
# instances


@dataclass(frozen=True)
class FormulaInstance:
    """Asserts ``closed_form == prefactor * value(formula)``."""

    family_id: str
    n: int
    prefactor: Fraction
    formula: PFormula
    closed_form: ClosedForm

    def describe(self) -> str:
        q = self.prefactor
        pre = str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
        return f"{closed_to_text(self.closed_form)} = {pre} * {format_formula(self.formula)}"


def instance_to_json(inst: FormulaInstance) -> dict:
    return {
        "family": inst.family_id,
        "n": inst.n,
        "prefactor": {"num": inst.prefactor.numerator, "den": inst.prefactor.denominator},
        "formula": formula_to_json(inst.formula),
        "closed_form": closed_to_text(inst.closed_form),
    }


def instance_from_json(obj: Any) -> FormulaInstance:
    if isinstance(obj, str):
        obj = json.loads(obj)
    pre = obj["prefactor"]
    return FormulaInstance(
        family_id=str(obj["family"]),
        n=int(obj["n"]),
        prefactor=Fraction(int(pre["num"]), int(pre["den"])),
        formula=formula_from_json(obj["formula"]),
        closed_form=parse_closed(obj["closed_form"]),
    )

