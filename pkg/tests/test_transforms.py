from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bbpgen.generators import instantiate, list_families
from bbpgen.pnotation import PFormula, closed_to_text, partial_sum_exact
from bbpgen.series_eval import eval_closed, eval_p
from bbpgen.transforms import (
    ShapeMismatch,
    UnsupportedExponent,
    combine,
    normalize_coefficients,
    rewrite_instance,
    rewrite_power,
)
from bbpgen.verify import verify_instance


def test_rewrite_eq7_to_eq8_at_n2():
    res = rewrite_power(PFormula(1, 4, 4, (2, 0, -1, 0)), 2)
    assert res.formula == PFormula(1, 16, 8, (8, 0, -4, 0, 2, 0, -1, 0))
    assert res.scale == 4


def test_rewrite_identity():
    f = PFormula(1, 7, 3, (1, 2, 3))
    res = rewrite_power(f, 1)
    assert res.formula == f and res.scale == 1


def test_rewrite_negative_base():
    f = PFormula(1, -2, 2, (1, 0))
    res = rewrite_power(f, 2)
    assert res.formula == PFormula(1, 4, 4, (-2, 0, 1, 0))
    assert res.scale == -2
    F = 128
    lhs = eval_p(f, F).value.to_fraction()
    rhs = Fraction(-1, 2) * eval_p(res.formula, F).value.to_fraction()
    assert abs(lhs - rhs) < Fraction(4, 2 ** F)


def test_rewrite_rejects_s2():
    with pytest.raises(UnsupportedExponent):
        rewrite_power(PFormula(2, 4, 1, (1,)), 2)


@pytest.mark.parametrize("n", range(2, 11))
def test_a2_rewrites_to_a1(n):
    res = rewrite_power(instantiate("A2", n).formula, 2)
    assert res.formula == PFormula(1, n * n, 4, (-n, 0, 1, 0))
    assert res.scale == -n
    assert tuple(-a for a in res.formula.a) == instantiate("A1", n).formula.a


def _small_instances():
    for d in list_families():
        for n in range(d.n_min, 7):
            yield d.instantiate(n)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_rewrite_preserves_value(r):
    F = 128
    for inst in _small_instances():
        f = inst.formula
        res = rewrite_power(f, r)
        direct = eval_p(f, F).value.to_fraction()
        via = eval_p(res.formula, F).value.to_fraction() / res.scale
        assert abs(direct - via) < Fraction(64, 2 ** F), inst.family_id


@pytest.mark.parametrize("r", [2, 3])
def test_rewrite_partial_sums_exact(r):
    for inst in list(_small_instances())[::5]:
        f = inst.formula
        res = rewrite_power(f, r)
        for K in range(0, 9, 4):
            assert partial_sum_exact(f, r * K) * res.scale == partial_sum_exact(res.formula, K)


def test_rewrite_instance_keeps_identity():
    inst = rewrite_instance(instantiate("L9", 2), 2)
    assert inst.formula.b == 16
    assert verify_instance(inst, 200).passed


def test_combine_a8_a9_is_three_a10():
    c = combine(instantiate("A8", 2), instantiate("A9", 2), 1, 1)
    assert c.prefactor == 3
    assert c.formula == PFormula(1, -1728, 6, (144, 0, 24, 0, 1, 0))
    assert c.formula == instantiate("A10", 12).formula
    assert verify_instance(c, 200).passed


def test_combine_self_cancels():
    i = instantiate("L7", 3)
    c = combine(i, i, 1, -1)
    assert c.prefactor == 0 and c.formula.is_zero
    report = verify_instance(c, 128)
    assert report.passed and report.residual.raw == 0


def test_combine_l1_l2_numeric():
    F = 256
    for n in range(2, 8):
        c = combine(instantiate("L1", n), instantiate("L2", n), 1, 1)
        value = c.prefactor * eval_p(c.formula, F).value.to_fraction()
        from bbpgen.pnotation import parse_closed
        target = eval_closed(parse_closed(f"ln({n * n - 1}/{n * n})"), F).to_fraction()
        assert abs(value - target) < Fraction(1, 2 ** 240)


def test_combine_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        combine(instantiate("A1", 2), instantiate("A5", 1), 1, 1)


def test_combine_closed_form_is_literal():
    c = combine(instantiate("L1", 3), instantiate("L2", 3), Fraction(1, 2), -2)
    assert closed_to_text(c.closed_form) == "1/2*ln(4/3)+(-2)*ln(2/3)"


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["L5", "A3", "L10"]), st.integers(2, 6),
       st.fractions(-5, 5, max_denominator=7), st.fractions(-5, 5, max_denominator=7))
def test_combine_linear_and_symmetric(label, n, c1, c2):
    other = {"L5": "A3", "A3": "L5", "L10": "L11"}[label]
    i1, i2 = instantiate(label, n), instantiate(other, n)
    c = combine(i1, i2, c1, c2)
    swapped = combine(i2, i1, c2, c1)
    assert c.prefactor == swapped.prefactor and c.formula == swapped.formula
    direct = [c.prefactor * a for a in c.formula.a]
    want = [c1 * i1.prefactor * a + c2 * i2.prefactor * b for a, b in zip(i1.formula.a, i2.formula.a)]
    assert direct == want


def test_normalize_coefficients():
    assert normalize_coefficients([Fraction(-3, 2), 0, Fraction(9, 4)]) == (Fraction(-3, 4), (2, 0, -3))
    assert normalize_coefficients([0, 0]) == (0, (0, 0))


@pytest.mark.parametrize("n", range(2, 11))
def test_subtraction_closure(n):
    assert verify_instance(combine(instantiate("A8", n), instantiate("A9", n), 1, -1), 256).passed
