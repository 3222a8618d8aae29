import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from transcert.heights import (
    AlgebraicNumber,
    IntPolynomial,
    InconsistentWitnessError,
    InvalidMinpolyError,
    PreconditionError,
    algebraic_product,
    algebraic_sum,
    certify_log_zero,
    eval_height_bound,
    exact_mahler,
    height_measures,
    isogeny_height_check,
    liouville_check,
    mahler_measure,
    parse_minpoly,
    random_algebraic,
    root_height_bound,
)
from witnesses import evaluation_witness, root_witness


def float_mahler(coeffs):
    roots = np.roots(list(reversed(coeffs)))
    return abs(coeffs[-1]) * np.prod([max(1.0, abs(r)) for r in roots])


def test_known_mahler_measures():
    assert mahler_measure([-2, 0, 1]).overlaps(2)
    phi = (1 + math.sqrt(5)) / 2
    assert abs(float(mahler_measure([-1, -1, 1]).mid()) - phi) < 1e-15
    assert mahler_measure([1, 1, 1]).overlaps(1)  # cyclotomic


def test_rational_height():
    hm = height_measures(AlgebraicNumber.rational(3, 5))
    assert abs(float(hm.weil_h.mid()) - math.log(5)) < 1e-15
    assert exact_mahler(AlgebraicNumber.rational(3, 5)) == 5


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=6).filter(lambda c: c[-1] != 0 and c[0] != 0))
def test_mahler_measure_matches_float(coeffs):
    m = mahler_measure(coeffs)
    ref = float_mahler(coeffs)
    assert abs(float(m.mid()) - ref) <= 1e-6 * ref


def test_reducible_minpoly_rejected():
    with pytest.raises(InvalidMinpolyError):
        AlgebraicNumber.from_minpoly([-1, 0, 1])


def test_parse_minpoly():
    assert parse_minpoly("-2, 0, 1") == [-2, 0, 1]
    with pytest.raises(InvalidMinpolyError):
        parse_minpoly("a,b")


@given(st.integers(0, 10**6))
def test_liouville_random(seed):
    a = random_algebraic(np.random.default_rng(seed))
    rep = liouville_check(a)
    assert all(s.holds for s in rep.steps)


def test_liouville_equality_case_is_decided():
    # a = 1/3: log|a| = -log 3 = -h(a)
    rep = liouville_check(AlgebraicNumber.rational(1, 3))
    assert rep.steps[0].status == "holds"


@given(st.integers(0, 10**6))
def test_evaluation_height_witnesses(seed):
    p, args, value = evaluation_witness(np.random.default_rng(seed))
    rep = eval_height_bound(p, args, value)
    assert rep.steps[0].status == "holds"


def test_evaluation_rejects_wrong_value():
    p = IntPolynomial.from_dict({(1, 0): 1, (0, 1): 1})
    a = AlgebraicNumber.rational(1)
    with pytest.raises(InconsistentWitnessError):
        eval_height_bound(p, [a, a], AlgebraicNumber.rational(3))


@given(st.integers(0, 10**6))
def test_root_height_witnesses(seed):
    p, a, b = root_witness(np.random.default_rng(seed))
    rep = root_height_bound(p, a, b)
    assert rep.steps[0].status == "holds"


def test_root_height_precondition():
    p = IntPolynomial.from_dict({(1, 0): 1})
    a = AlgebraicNumber.rational(2)
    with pytest.raises(PreconditionError):
        root_height_bound(p, a, a)


def test_sum_and_product_witnesses():
    s2 = AlgebraicNumber.from_minpoly([-2, 0, 1], approx=1.4)
    s3 = AlgebraicNumber.from_minpoly([-3, 0, 1], approx=1.7)
    assert algebraic_sum(s2, s3).minpoly == (1, 0, -10, 0, 1)
    assert algebraic_product(s2, s3).minpoly == (-6, 0, 1)


def test_isogeny_height_pair():
    j1 = AlgebraicNumber.rational(1728)
    j2 = AlgebraicNumber.rational(287496)
    rep = isogeny_height_check(j1, j2, 2, Fraction(10))
    assert rep.modular_relation is True
    assert rep.steps[0].holds
    # minimal admissible constant is h(j2) - 2h(j1) - 6 log 3
    expected = math.log(287496) - 2 * math.log(1728) - 6 * math.log(3)
    assert abs(float(rep.minimal_c2.mid()) - expected) < 1e-12


def test_log_zero_certified_for_power_identity():
    # a = (3 + sqrt 13) / 2 has conjugates on both sides of the unit circle
    a = AlgebraicNumber.from_minpoly([-1, -3, 1])
    a2 = algebraic_product(a, a)
    assert exact_mahler(a) is None
    assert certify_log_zero([(a2, 1), (a, -2)])


def test_log_zero_rejects_near_miss():
    # M(x^2 - 3x - 1) = (3 + sqrt 13) / 2 ~ 3.3028, close to but not 33/10
    a = AlgebraicNumber.from_minpoly([-1, -3, 1])
    assert not certify_log_zero([(a, 10), (33, -10), (10, 10)])
    assert not certify_log_zero([(a, 1), (3, -1)])


def test_evaluation_equality_with_mixed_conjugates():
    a = AlgebraicNumber.from_minpoly([-1, -3, 1])
    minus_one = AlgebraicNumber.rational(-1)
    p = IntPolynomial.from_dict({(2, 1): 1})
    value = AlgebraicNumber.from_minpoly([1, 11, 1], approx=-complex(a.value().mid()) ** 2)
    step = eval_height_bound(p, [a, minus_one], value).steps[0]
    assert step.holds
    assert "root separation" in step.note
