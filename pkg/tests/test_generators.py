from fractions import Fraction

import pytest

from bbpgen.bigfixed import ln_ref, pi_ref, sqrt_ref
from bbpgen.generators import (
    ParameterTooSmall,
    UnknownFamily,
    get_family,
    instantiate,
    list_families,
)
from bbpgen.pnotation import PFormula, closed_to_text, validate
from bbpgen.series_eval import eval_closed, eval_p

LABELS = [f"A{i}" for i in range(1, 11)] + [f"L{i}" for i in range(1, 13)]


def test_registry_shape():
    fams = list_families()
    assert len(fams) == 22
    assert [d.label for d in fams] == LABELS
    assert len({d.family_id for d in fams}) == 22
    assert get_family("atan.pi4.minus").label == "A5"
    assert get_family("log.pi6.ratio").label == "L12"


@pytest.mark.parametrize("desc", list_families(), ids=lambda d: d.label)
def test_n_min_instance_is_valid(desc):
    inst = desc.instantiate(desc.n_min)
    validate(inst.formula)
    assert inst.formula.m == desc.length
    assert inst.closed_form.depth() <= 6
    with pytest.raises(ParameterTooSmall):
        desc.instantiate(desc.n_min - 1)


@pytest.mark.parametrize("desc", list_families(), ids=lambda d: d.label)
def test_coefficients_are_integers(desc):
    for n in range(1, 30):
        coeffs = desc.coefficients(n)
        assert all(type(c) is int for c in coeffs)
        assert type(desc.base(n)) is int
        assert isinstance(Fraction(desc.prefactor(n)), Fraction)


def test_reference_instances():
    i = instantiate("A1", 2)
    assert i.prefactor == Fraction(1, 2)
    assert i.formula == PFormula(1, 4, 4, (2, 0, -1, 0))
    assert closed_to_text(i.closed_form) == "sqrt(2)*atan(1/sqrt(2))"

    i = instantiate("atan.pi4.minus", 1)
    assert i.prefactor == Fraction(1, 16)
    assert i.formula == PFormula(1, 16, 8, (8, 8, 4, 0, -2, -2, -1, 0))

    i = instantiate("L3", 10)
    assert i.prefactor == Fraction(-1, 10)
    assert i.formula == PFormula(1, 10, 1, (1,))
    assert closed_to_text(i.closed_form) == "ln(9/10)"


def test_errors():
    with pytest.raises(ParameterTooSmall):
        instantiate("A1", 1)
    with pytest.raises(UnknownFamily):
        instantiate("atan.pi5.minus", 3)


def _value(inst, F):
    return eval_p(inst.formula, F).value.to_fraction() * inst.prefactor


@pytest.mark.parametrize("desc", list_families(), ids=lambda d: d.label)
def test_identity_holds_for_small_n(desc):
    F = 160
    for n in range(desc.n_min, desc.n_min + 6):
        inst = desc.instantiate(n)
        lhs = eval_closed(inst.closed_form, F).to_fraction()
        assert abs(lhs - _value(inst, F)) < Fraction(1, 2 ** (F - 8)), (desc.label, n)


def test_known_constants():
    F = 256
    tol = Fraction(1, 2 ** 248)
    pi = pi_ref(F).to_fraction()
    assert abs(_value(instantiate("A5", 1), F) - pi / 4) < tol
    assert abs(_value(instantiate("L3", 2), F) + ln_ref(2, F).to_fraction()) < tol
    assert abs(_value(instantiate("L9", 2), F) / 2 - ln_ref(5, F).to_fraction()) < tol
    assert abs(2 * eval_p(PFormula(1, -27, 6, (9, 0, 0, 0, -1, 0)), F).value.to_fraction()
               - 9 * ln_ref(7, F).to_fraction()) < tol
    assert abs(_value(instantiate("A8", 1), F) - 27 * sqrt_ref(3, F).to_fraction() * pi / 6) < tol
    # sqrt(3) atan(1/sqrt(3)) = sqrt(3) pi / 6
    assert abs(_value(instantiate("A1", 3), F) - sqrt_ref(3, F).to_fraction() * pi / 6) < tol


def test_n1_exclusions_match_design():
    # families whose n = 1 instance would have |b| = 1 or a singular closed form
    excluded = {d.label for d in list_families() if d.n_min == 2}
    assert excluded == {"A1", "A2", "A3", "A4", "A7", "A10", "L1", "L2", "L3", "L4", "L5", "L6", "L9", "L12"}
    for d in list_families():
        if d.n_min == 1:
            assert abs(d.base(1)) >= 2
