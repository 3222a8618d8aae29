import math

from hypothesis import given
from hypothesis import strategies as st

from transcert.primes import (
    CLAIMED_THRESHOLD,
    certify_prime_bounds,
    euler_phi,
    is_prime,
    next_prime,
    prime_stats,
    primes_below,
    sieve,
)


def trial_division(n):
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def test_sieve_matches_trial_division():
    assert [int(p) for p in sieve(10_000)] == [k for k in range(10_001) if trial_division(k)]


@given(st.integers(0, 10**6))
def test_is_prime_matches_trial_division(n):
    assert is_prime(n) == trial_division(n)


@given(st.integers(0, 10**5))
def test_next_prime_is_smallest_prime_at_least_n(n):
    p = next_prime(n)
    assert p >= n and is_prime(p)
    assert not any(is_prime(k) for k in range(n, p))


@given(st.integers(1, 500))
def test_euler_phi_counts_units(n):
    assert euler_phi(n) == sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def test_primes_below_strict():
    assert primes_below(11) == [2, 3, 5, 7]
    assert primes_below(2) == []


def test_prime_stats_conventions():
    # pi(x) counts p < x, the sum likewise
    count, total = prime_stats(11)
    assert (count, total) == (4, 17)


def test_claim_is_violated_and_recorded():
    rep = certify_prime_bounds(1000)
    assert rep.claim_violated
    lower = rep.finding("sum_lower", "strict")
    assert lower.threshold > CLAIMED_THRESHOLD
    assert all(x >= CLAIMED_THRESHOLD for x in lower.violations_from_claim)


def test_c14_upper_bound_dominates_ratio():
    rep = certify_prime_bounds(10_000)
    primes = set(int(p) for p in sieve(10_000))
    count = 0
    for x in range(2, 10_001):
        count += x in primes
        if x >= 3:
            assert count * math.log(x) / x <= float(rep.c14) + 1e-12


def test_progression_restricts_primes():
    rep = certify_prime_bounds(2000, progression=(1, 4))
    assert rep.progression == (1, 4)
