import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from transcert.siegel import (
    EnumerationTooLargeError,
    enumeration_cost,
    exhaustive_small_solution,
    height,
    integer_siegel_bound,
    is_in_kernel,
    kernel_basis,
    kernel_small_vector,
    siegel_bound_holds,
)


@st.composite
def underdetermined(draw, max_x=6):
    X = draw(st.integers(2, max_x))
    Y = draw(st.integers(1, X // 2))
    rows = draw(st.lists(st.lists(st.integers(-9, 9), min_size=X, max_size=X), min_size=Y, max_size=Y))
    return rows


def brute_force_min_norm(m, bound):
    X = len(m[0])
    best = None
    for v in itertools.product(range(-bound, bound + 1), repeat=X):
        if any(v) and is_in_kernel(m, v):
            n = max(abs(x) for x in v)
            best = n if best is None else min(best, n)
    return best


@given(underdetermined())
def test_kernel_small_vector_is_in_kernel_and_within_bound(m):
    v, rep = kernel_small_vector(m)
    assert any(v)
    assert is_in_kernel(m, v)
    assert rep.bound_met == siegel_bound_holds(rep.sup_norm, len(m[0]), len(m), height(m))
    assert rep.bound_met


@given(underdetermined(max_x=4))
def test_oracle_matches_brute_force(m):
    Y, X = len(m), len(m[0])
    b = min(integer_siegel_bound(X, Y, height(m)), 4)
    got = exhaustive_small_solution(m, b)
    ref = brute_force_min_norm(m, b)
    assert (got is None) == (ref is None)
    if got is not None:
        assert is_in_kernel(m, got)
        assert max(abs(x) for x in got) <= b


@given(underdetermined())
def test_kernel_basis_spans_rank_deficiency(m):
    from flint import fmpz_mat

    basis = kernel_basis(m)
    assert len(basis) == len(m[0]) - fmpz_mat(m).rank()
    assert all(is_in_kernel(m, v) for v in basis)


@given(st.integers(2, 10), st.integers(1, 9), st.data())
def test_integer_siegel_bound_is_floor(X, B, data):
    Y = data.draw(st.integers(1, X - 1))
    b = integer_siegel_bound(X, Y, B)
    assert siegel_bound_holds(b, X, Y, B)
    assert not siegel_bound_holds(b + 1, X, Y, B)


def test_enumeration_budget():
    m = [[1, 2, 3, 4, 5, 6, 7, 8]]
    assert enumeration_cost(m, 5) == 11**7
    with pytest.raises(EnumerationTooLargeError):
        exhaustive_small_solution(m, 5, budget=1000)


def test_zero_matrix_height_floor():
    assert height([[0, 0, 0]]) == 1
    v, rep = kernel_small_vector([[0, 0, 0]])
    assert rep.sup_norm == 1
