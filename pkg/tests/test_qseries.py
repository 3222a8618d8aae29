import pytest
from hypothesis import given
from hypothesis import strategies as st

from transcert.qseries import (
    IntSeries,
    InvalidTruncationError,
    delta_expansion,
    delta_power,
    dumps_series,
    e4_expansion,
    j_expansion,
    loads_series,
    read_series,
    sigma3_table,
    vanishing_order,
    write_series,
)

# Ramanujan tau(1..10), from the product q prod (1 - q^n)^24
TAU = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]
J_HEAD = [1, 744, 196884, 21493760, 864299970, 20245856256]


def naive_delta(K):
    # direct product expansion, independent of the eta-cubed route
    coeffs = [0] * K
    coeffs[0] = 1
    for n in range(1, K):
        for _ in range(24):
            for k in range(K - 1, n - 1, -1):
                coeffs[k] -= coeffs[k - n]
    return [0] + coeffs[: K - 1]


def test_delta_matches_tau_table():
    d = delta_expansion(11)
    assert [d[k] for k in range(1, 11)] == TAU
    assert d[0] == 0


def test_delta_matches_naive_product():
    d = delta_expansion(40)
    assert [d[k] for k in range(40)] == naive_delta(40)


def test_j_head_coefficients():
    j = j_expansion(5)
    assert j.valuation == -1
    assert [j[k] for k in range(-1, 5)] == J_HEAD


def test_e4_from_sigma3():
    e4 = e4_expansion(10)
    s3 = sigma3_table(10)
    assert e4[0] == 1
    assert all(e4[n] == 240 * s3[n] for n in range(1, 10))


def test_j_times_delta_is_e4_cubed():
    K = 120
    assert (j_expansion(K) * delta_expansion(K + 1)).truncate(K) == (e4_expansion(K) ** 3).truncate(K)


def test_delta_power_valuation():
    for m in range(1, 6):
        assert delta_power(m, 20).valuation == m


def test_vanishing_order():
    assert vanishing_order(delta_power(3, 10)) == 3
    assert vanishing_order(IntSeries.zero(5)) == "below-truncation"


def test_truncation_mismatch_rejected():
    with pytest.raises(InvalidTruncationError):
        IntSeries(0, [1, 2], 5)


def test_file_roundtrip(tmp_path):
    j = j_expansion(2)
    path = tmp_path / "j.txt"
    write_series(j, path)
    assert path.read_text().splitlines() == ["-1 2", "1", "744", "196884"]
    assert read_series(path) == j


series = st.builds(
    lambda v, cs: IntSeries(v, cs, v + len(cs)),
    st.integers(-3, 3),
    st.lists(st.integers(-50, 50), min_size=1, max_size=12),
)


@given(series)
def test_dumps_loads_roundtrip(s):
    assert loads_series(dumps_series(s)) == s


@given(series, series)
def test_multiplication_commutes(a, b):
    assert a * b == b * a


@given(series, series, series)
def test_multiplication_associates(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(series, series, series)
def test_distributive(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=10))
def test_inverse_of_unit_series(cs):
    s = IntSeries(0, [1] + cs, len(cs) + 1)
    assert (s * s.inverse()).truncate(s.trunc) == IntSeries.one(s.trunc)


@given(st.integers(1, 4), st.integers(5, 30))
def test_inflate_matches_substitution(p, K):
    d = delta_expansion(K)
    inflated = d.inflate(p)
    for k in range(inflated.trunc):
        assert inflated[k] == (d[k // p] if k % p == 0 else 0)
