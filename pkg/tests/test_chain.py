import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from transcert import chain
from transcert.auxfn import build_auxiliary


def scalar_threshold_oracle(c):
    """Float bisection of M^(1/6) = c (log M)^(2/3) on the increasing branch (M > e^4)."""
    g = lambda m: math.log(m) / 6 - math.log(c) - 2 * math.log(math.log(m)) / 3
    lo, hi = math.exp(4), math.exp(4) * 2
    while g(hi) <= 0:
        hi *= 2
    for _ in range(200):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if g(mid) <= 0 else (lo, mid)
    return hi


@pytest.fixture(scope="module")
def desk():
    inst = chain.build_instance(4, q=Fraction(1, 2))
    return chain.run_chain(inst)


def test_threshold_for_one_matches_oracle():
    t = chain.contradiction_threshold(1)
    assert abs(t - scalar_threshold_oracle(1)) <= 1
    # M^(1/4) = log M at the crossing
    assert abs(t ** 0.25 - math.log(t)) < 1e-3 * math.log(t)


# float oracles resolve the threshold to +-1 only while it stays well below 2^53
@given(st.fractions(min_value=Fraction(1, 2), max_value=5))
def test_threshold_is_minimal(c):
    t = chain.contradiction_threshold(c)
    holds = lambda m: m > float(c) ** 6 * math.log(m) ** 4
    if t > 1:
        assert holds(t) and not holds(t - 1)
    assert abs(t - scalar_threshold_oracle(float(c))) <= 1 or t == 1


@given(st.fractions(min_value=Fraction(1, 10), max_value=20), st.fractions(min_value=0, max_value=5))
def test_threshold_monotone(c, d):
    assert chain.contradiction_threshold(c) <= chain.contradiction_threshold(c + d)


def test_small_constant_threshold_is_one():
    assert chain.contradiction_threshold(Fraction(1, 10)) == 1


def test_min_N_for_radius():
    n = chain.min_N_for_radius(Fraction(1, 2))
    r = 0.75
    ok = lambda N: (12 * N + 1) * math.log(1 / (1 - r)) <= N * math.log(N * N / 2)
    assert ok(n) and not ok(n - 1)
    assert 1000 <= n < 10_000


@given(st.fractions(min_value=Fraction(1, 100), max_value=Fraction(98, 100)), st.fractions(min_value=0, max_value=Fraction(1, 100)))
def test_min_N_monotone_in_q(q, dq):
    assert chain.min_N_for_radius(q) <= chain.min_N_for_radius(q + dq)


def test_min_N_at_r_one_half():
    # q_abs = 0 would give r = 1/2; take it just above
    n = chain.min_N_for_radius(Fraction(1, 10**9))
    ok = lambda N: (12 * N + 1) * math.log(2) <= N * math.log(N * N / 2)
    assert ok(n) and not ok(n - 1)


def test_algebraic_cutoff_examples():
    assert chain.algebraic_cutoff(2, 10).P == 67
    assert chain.algebraic_cutoff(1, 1).P == 5
    assert chain.algebraic_cutoff(1, 1, prime_floor=100).P == 101
    rep = chain.algebraic_cutoff(2, 10)
    assert rep.ratio == Fraction(67, 61)


@given(st.integers(1, 5), st.integers(1, 200))
def test_algebraic_cutoff_monotone_and_minimal(d, n):
    p = chain.algebraic_cutoff(d, n).P
    assert (p - 1) / 3 > d * n
    assert p <= chain.algebraic_cutoff(d, n + 1).P
    assert not any(chain.is_prime(k) and (k - 1) / 3 > d * n for k in range(2, p))


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_built_instances_satisfy_N2_le_3M(N):
    inst = chain.build_instance(N, q_abs=Fraction(1, 2), P=2)
    assert N * N <= 3 * inst.M
    assert 2 * inst.L <= N * N < 2 * (inst.L + 1)


def test_instance_rejects_wrong_N():
    f = build_auxiliary(3)
    with pytest.raises(ValueError):
        chain.ProofInstance(Fraction(1, 2), 4, f, 2)


def test_missing_P_is_a_precondition_error():
    inst = chain.build_instance(3, q_abs=Fraction(1, 2))
    led = chain.build_ledger(inst, {"C2": Fraction(1)}, c14=Fraction(5, 4))
    with pytest.raises(chain.PreconditionError):
        chain.lower_bound_ledger(inst, led)


def test_missing_constant_aborts():
    inst = chain.build_instance(3, q_abs=Fraction(1, 2), P=2)
    with pytest.raises(chain.MissingConstantError):
        chain.build_ledger(inst, {}, c14=Fraction(5, 4))
    with pytest.raises(chain.MissingConstantError):
        chain.ConstantLedger().get("C9")


def test_c6_certificate():
    cert = chain.certify_c6(Fraction(3, 4))
    prod = 1.0
    for n in range(1, 400):
        prod *= (1 - 0.75**n) ** 24
    assert float(cert.value) <= prod <= float(cert.value) * (1 + 1e-10)
    assert float(cert.boundary_min.mid()) >= float(cert.value)


def test_ledger_provenance(desk):
    led = desk.ledger.to_dict()
    needed = {"C1", "C2", "C3", "C4", "C5", "C6", "C7a", "C7b"} | {f"C{i}" for i in range(8, 19)}
    assert needed <= set(led)
    assert all(v["provenance"] in chain.PROVENANCES for v in led.values())
    assert {k for k, v in led.items() if v["provenance"] == chain.CERTIFIED} == {"C1", "C6", "C14"}
    assert led["C2"]["provenance"] == chain.USER


def test_desk_instance_is_determinate_and_consistent(desk):
    assert desk.determinate
    assert desk.violations == []
    assert desk.chain["final"].status == "holds"
    assert not desk.contradiction
    assert desk.instance.N < desk.min_N
    for ident in ("2L_le_N2", "N2_lt_2L2", "L_le_M", "2L2_le_2M2", "2M2_le_3M", "N_le_sqrt3M"):
        assert desk.chain[ident].holds


def test_desk_lower_bound_examples(desk):
    lb = desk.lower
    assert lb["C6_le_leading"].holds
    assert lb["log_length_A"].holds and lb["C3_form"].holds
    assert lb["F_qP_lower"].holds


def test_deg_alpha_example():
    # (P + 1) deg(q) deg(J(q)) with P = 2 and unit degrees
    inst = chain.build_instance(2, q_abs=Fraction(1, 2), P=2)
    assert (inst.P + 1) * inst.deg_q * inst.deg_Jq == 3


def test_routes_are_ordered(desk):
    routes = desk.routes
    assert set(routes["bounds"]) == {"blaschke", "jensen", "algebraic"}
    order = routes["order_at_instance"]
    assert [routes["bounds"][k] for k in order] == sorted(routes["bounds"].values())
    assert routes["blaschke_smallest_exponent"]
    exps = routes["growth"]["exponents"]
    assert 0.5 <= exps["blaschke"] < 0.75
    assert abs(exps["algebraic"] - 1) < 0.05


def test_route_bounds_match_definitions():
    b = chain.route_bounds(Fraction(1, 2), 10, 50, 1)
    rhs = 4 * 31 * 10 * math.log(50) / math.log(2)
    P = b["blaschke"]
    assert P**2 / math.log(P) <= rhs < (P + 1) ** 2 / math.log(P + 1)


def test_contradiction_at_large_M():
    # evaluating the final inequality far above the threshold gives a contradiction
    c18 = Fraction(3)
    t = chain.contradiction_threshold(c18)
    assert t > 1
    assert t > float(c18) ** 6 * math.log(t) ** 4


def test_run_is_deterministic(desk):
    import json

    again = chain.run_chain(chain.build_instance(4, q=Fraction(1, 2)))
    assert json.dumps(again.to_dict(), sort_keys=True) == json.dumps(desk.to_dict(), sort_keys=True)
