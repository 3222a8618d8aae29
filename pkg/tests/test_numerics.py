import math
from fractions import Fraction

import pytest
from flint import acb, arb
from hypothesis import given
from hypothesis import strategies as st

from transcert.numerics import (
    CannotCertifyError,
    DivergenceError,
    HeckeTail,
    arb_lower,
    arb_upper,
    decide_le,
    decimal_string,
    delta_at,
    e4_at,
    euler_product,
    eval_series_certified,
    j_at,
    nome,
    power_tail_majorant,
    precision,
    q_to_tau,
    round_up,
    schwarz_tail_majorant,
    to_arb,
)
from transcert.qseries import delta_expansion, j_expansion


def float_euler(z, n=2000):
    p = 1
    for k in range(1, n):
        p *= 1 - z**k
    return p


radii = st.fractions(min_value=Fraction(1, 100), max_value=Fraction(9, 10))
angles = st.fractions(min_value=0, max_value=1)


def point(r, t):
    th = 2 * arb.pi() * to_arb(t)
    return acb(to_arb(r) * th.cos(), to_arb(r) * th.sin())


@given(radii, angles)
def test_euler_product_encloses_float_product(r, t):
    z = point(r, t)
    ball = euler_product(z)
    zf = complex(float(r) * math.cos(2 * math.pi * t), float(r) * math.sin(2 * math.pi * t))
    ref = float_euler(zf)
    assert abs(complex(ball.mid()) - ref) <= 1e-9 * max(1, abs(ref))


@given(st.fractions(min_value=Fraction(1, 100), max_value=Fraction(1, 2)), angles)
def test_delta_series_and_product_agree(r, t):
    z = point(r, t)
    series = eval_series_certified(delta_expansion(200), z, HeckeTail(1, Fraction(8), scale=1))
    assert series.overlaps(delta_at(z))


def test_j_at_i_is_1728():
    # tau = i gives q = e^(-2 pi)
    with precision(200):
        v = j_at(nome(acb(0, 1)))
        assert v.overlaps(acb(1728))
        assert v.rad() < 1e-30


def test_j_series_agrees_with_product_form():
    with precision(128):
        z = acb(arb(1) / 10)
        s = eval_series_certified(j_expansion(60), z)
        v = j_at(z)
        assert abs(complex(s.mid()) - complex(v.mid())) < 1e-12 * abs(complex(v.mid()))


def test_e4_series_derivative():
    from flint import acb_series

    z = acb(arb(1) / 5)
    jet = e4_at(acb_series([z, 1], prec=2))
    h = 1e-7
    fd = (complex(e4_at(acb(0.2 + h)).mid()) - complex(e4_at(acb(0.2 - h)).mid())) / (2 * h)
    assert abs(complex(jet[1].mid()) - fd) < 1e-4


def test_unit_circle_rejected():
    with pytest.raises(CannotCertifyError):
        euler_product(acb(1))


@given(st.integers(0, 12), st.integers(1, 40), st.fractions(min_value=Fraction(1, 50), max_value=Fraction(19, 20)))
def test_power_tail_majorant_dominates_partial_sums(K, T, r):
    bound = power_tail_majorant(K, T, r)
    rf = float(r)
    partial = sum(k**K * rf**k for k in range(T, T + 3000))
    assert arb_upper(bound) >= Fraction(partial) * (1 - Fraction(1, 10**9))


def test_schwarz_majorant_rejects_divergent_series():
    with pytest.raises(DivergenceError):
        schwarz_tail_majorant(1, 2, 1)


@given(st.fractions(min_value=Fraction(1, 10**6), max_value=10**6))
def test_round_up_is_upper_and_tight(x):
    y = round_up(x)
    assert y >= x
    assert (y - x) / x <= Fraction(1, 10**11)


@given(st.fractions(min_value=-100, max_value=100))
def test_arb_bounds_enclose(x):
    b = to_arb(x)
    assert arb_lower(b) <= x <= arb_upper(b)


def test_decide_le_statuses():
    assert decide_le(arb(1), arb(2)) == "holds"
    assert decide_le(arb(3), arb(2)) == "fails"
    assert decide_le(arb(2, 1), arb(2)) == "undetermined"


def test_decimal_string():
    assert decimal_string(Fraction(1, 8)) == "0.125"
    assert decimal_string(Fraction(-3, 2)) == "-1.5"
    with pytest.raises(ValueError):
        decimal_string(Fraction(1, 3))


@given(st.floats(min_value=-0.45, max_value=0.45), st.floats(min_value=0.7, max_value=2.0))
def test_q_to_tau_inverts_nome(x, y):
    tau = acb(x, y)
    back = q_to_tau(nome(tau))
    diff = complex(back.mid()) - complex(x, y)
    # equal up to an integer translate
    assert abs(diff.imag) < 1e-12
    assert abs(diff.real - round(diff.real)) < 1e-12
