import json
from fractions import Fraction

import pytest

from bbpgen.bigfixed import BigFixed
from bbpgen.generators import instantiate, list_families
from bbpgen.pnotation import FormulaInstance, IntLit, PFormula
from bbpgen.verify import (
    GeneratorPoint,
    check_generator_arctan,
    check_generator_log,
    generator_grid,
    reports_to_jsonl,
    run_suite,
    truncation_terms,
    verify_instance,
)

from oracles import pi_gauss


@pytest.mark.parametrize("p,angle,in_pi", [
    (Fraction(1, 2), Fraction(1, 2), True),
    (Fraction(1, 3), Fraction(1), False),
    (Fraction(1, 2), Fraction(1, 3), True),
    (Fraction(-1, 2), Fraction(1, 4), True),
    (Fraction(9, 10), Fraction(5, 2), False),
])
def test_generator_examples(p, angle, in_pi):
    pt = GeneratorPoint(p, angle, in_pi)
    for check in (check_generator_arctan, check_generator_log):
        rep = check(pt, 128)
        assert rep.passed, rep
        assert rep.K == truncation_terms(p, 128)


def test_generator_at_p_zero_is_exact():
    pt = GeneratorPoint(0, Fraction(1, 3))
    assert check_generator_arctan(pt).residual.raw == 0
    assert check_generator_log(pt).residual.raw == 0


def test_generator_half_at_right_angle_is_atan_half():
    # sum 2^-k sin(k pi/2)/k = atan(1/2); 1/2 ln(5/4) for the cosine series
    rep = check_generator_arctan(GeneratorPoint(Fraction(1, 2), Fraction(1, 2)), 96)
    assert rep.passed and rep.residual.to_fraction() < Fraction(1, 2 ** 90)


def test_tolerance_tracks_declared_truncation():
    pt = GeneratorPoint(Fraction(9, 10), Fraction(1, 3))
    rep = check_generator_arctan(pt, 128, K=40)
    assert rep.K == 40 and rep.passed
    assert rep.residual.to_fraction() > Fraction(1, 2 ** 20)
    assert rep.residual.to_fraction() < rep.tolerance.to_fraction()


def test_point_rejects_unit_modulus():
    with pytest.raises(ValueError):
        GeneratorPoint(1, Fraction(1, 2))


def test_grid_shape():
    grid = generator_grid()
    assert len(grid) == 60
    assert len({pt.label for pt in grid}) == 60


def test_verify_instance_examples():
    rep = verify_instance(instantiate("A1", 2), 256)
    assert rep.passed and rep.n == 2 and rep.F == 256
    assert rep.residual_log2() is None or rep.residual_log2() < -240


def test_verify_instance_flags_wrong_identity():
    good = instantiate("L3", 4)
    bad = FormulaInstance(good.family_id, good.n, good.prefactor * 2, good.formula, good.closed_form)
    assert not verify_instance(bad, 128).passed


def test_verify_instance_reports_domain_failure():
    bad = FormulaInstance("x", 1, Fraction(1), PFormula(1, 2, 1, (1,)), IntLit(1) / (IntLit(2) - 2))
    rep = verify_instance(bad, 64)
    assert not rep.passed
    assert rep.note.startswith(("DivideByZero", "DomainError"))


def test_full_suite_passes():
    reports = run_suite(256, 25)
    assert len(reports) >= 22 * 20
    failed = [r for r in reports if not r.passed]
    assert not failed, failed[:3]


def test_family_only_suite():
    reports = run_suite(256, 8, families=["log.pi4.ratio"])
    assert [r.n for r in reports] == list(range(2, 9))


def test_jsonl_fields():
    line = reports_to_jsonl([verify_instance(instantiate("A5", 1), 128)])
    obj = json.loads(line)
    assert set(obj) >= {"subject", "n", "F", "residual_log2", "pass"}
    assert obj["pass"] is True and obj["subject"] == "atan.pi4.minus"


def test_pi_quarter_matches_oracle():
    inst = instantiate("A5", 1)
    F = 256
    from bbpgen.series_eval import eval_p
    v = inst.prefactor * eval_p(inst.formula, F).value.to_fraction()
    assert abs(v - pi_gauss(F + 8) / 4) < Fraction(1, 2 ** 250)
