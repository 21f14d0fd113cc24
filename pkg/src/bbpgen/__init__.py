"""BBP-type formula families in general bases.

Everything runs on Python integers: :mod:`bbpgen.bigfixed` supplies binary
fixed point with reference sqrt/arctan/ln, and the other modules build,
evaluate, rewrite, verify and digit-extract P-notation formulas.
"""
from .bigfixed import BigFixed, atan_ref, ln_ref, pi_ref, sqrt_ref
from .digit_extract import BoundaryHazard, DigitRun, extract_digits, mod_pow
from .generators import instantiate, list_families
from .pnotation import FormulaInstance, PFormula, parse, partial_sum_exact, validate
from .series_eval import eval_closed, eval_p, tail_start
from .transforms import combine, rewrite_power
from .verify import run_suite, verify_instance

__all__ = [
    "BigFixed", "atan_ref", "ln_ref", "pi_ref", "sqrt_ref",
    "BoundaryHazard", "DigitRun", "extract_digits", "mod_pow",
    "instantiate", "list_families",
    "FormulaInstance", "PFormula", "parse", "partial_sum_exact", "validate",
    "eval_closed", "eval_p", "tail_start",
    "combine", "rewrite_power",
    "run_suite", "verify_instance",
]
