"""One test per acceptance criterion; each records a PASS/FAIL line for the summary."""

import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

import conftest
from transcert import chain
from transcert.auxfn import build_auxiliary, check_upper_bound, sample_disk
from transcert.heights import eval_height_bound, liouville_check, random_algebraic, root_height_bound
from transcert.modforms import certify_hecke, cusp_coeffs, stored_hecke_constant
from transcert.modpoly import (
    certify_phi_height,
    compute_phi_p,
    modular_polynomial,
    phi2_reference,
    verify_phi_identity,
)
from transcert.primes import certify_prime_bounds, sieve
from transcert.qseries import delta_expansion, e4_expansion, j_expansion
from transcert.siegel import exhaustive_small_solution, height, integer_siegel_bound, is_in_kernel, kernel_small_vector
from witnesses import evaluation_witness, root_witness


@pytest.fixture
def record(request):
    state = {}

    def _record(n, ok, detail):
        state["line"] = (n, f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
        conftest.ACCEPTANCE_LINES[n] = state["line"][1]
        print(state["line"][1])
        return ok

    yield _record
    if "line" not in state:  # the test died before recording
        name = request.node.name
        n = int(name.split("_")[1])
        conftest.ACCEPTANCE_LINES[n] = f"criterion {n:2d}: FAIL - {name} raised before finishing"


def test_01_qseries_exactness(record):
    t0 = time.perf_counter()
    j = j_expansion(500)
    head = [j[-1], j[0], j[1]]
    identity = (j * delta_expansion(501)).truncate(500) == (e4_expansion(500) ** 3).truncate(500)
    elapsed = time.perf_counter() - t0
    ok = head == [1, 744, 196884] and identity and elapsed < 10
    assert record(1, ok, f"J head {head}, J*Delta = E4^3 mod q^500: {identity}, {elapsed:.2f}s")


def test_02_hecke_certification(record):
    c1 = stored_hecke_constant().c1
    worst, violations = 0.0, 0
    for N in range(1, 5):
        for l in range(N + 1):
            rep = certify_hecke(cusp_coeffs(N, l, 200), c1)
            violations += len(rep.violations)
            worst = max(worst, rep.max_ratio)
    ok = violations == 0 and worst < 1
    assert record(2, ok, f"N <= 4, l <= N, k <= 200: {violations} violations, max ratio {worst:.3e}")


def test_03_siegel_agreement(record):
    rng = np.random.default_rng(20240603)
    confirmed = in_kernel = 0
    for _ in range(200):
        X = int(rng.integers(2, 7))
        Y = int(rng.integers(1, X // 2 + 1))
        m = rng.integers(-9, 10, size=(Y, X)).tolist()
        bound = integer_siegel_bound(X, Y, height(m))
        v = exhaustive_small_solution(m, bound)
        confirmed += v is not None and any(v) and is_in_kernel(m, v) and max(map(abs, v)) <= bound
        w, _ = kernel_small_vector(m)
        in_kernel += any(w) and is_in_kernel(m, w)
    ok = confirmed == 200 and in_kernel == 200
    assert record(3, ok, f"oracle within (XB)^(Y/(X-Y)): {confirmed}/200, kernel_small_vector in kernel: {in_kernel}/200")


@pytest.fixture(scope="module")
def built():
    return {N: build_auxiliary(N) for N in range(2, 7)}


def test_04_auxiliary_construction(record, built):
    rows = []
    ok = True
    for N, f in built.items():
        good = f.M >= N * N // 2 and f.d0 != 0 and f.poly.length <= f.length_bound() and f.dual_assembly_agrees
        ok &= good
        rows.append(f"N={N}:M={f.M}")
    assert record(4, ok, "M >= floor(N^2/2), d0 != 0, length bound, dual assembly for " + ", ".join(rows))


def test_05_upper_bound_samples(record, built):
    radius = Fraction(3, 4) - Fraction(1, 20)
    counts = []
    for N, f in built.items():
        pts = sample_disk(radius, 100)
        counts.append(sum(check_upper_bound(f, z, radius=Fraction(3, 4)).passed for z in pts))
    ok = counts == [100] * len(built)
    assert record(5, ok, f"certified samples passing per N=2..6 in |z| <= 0.7: {counts}")


def test_06_modular_polynomials(record):
    phi2_ok = compute_phi_p(2) == phi2_reference()
    ident = {p: verify_phi_identity(modular_polynomial(p), 30).passed for p in (2, 3, 5)}
    heights = {p: certify_phi_height(modular_polynomial(p)).passed for p in (2, 3, 5, 7)}
    root = modular_polynomial(2).evaluate(1728, 287496) == 0
    ok = phi2_ok and all(ident.values()) and all(heights.values()) and root
    assert record(6, ok, f"Phi2 exact {phi2_ok}, identity K=30 {ident}, height bound {heights}, Phi2(1728,287496)=0 {root}")


def test_07_heights(record):
    rng = np.random.default_rng(7)
    liou = sum(all(s.holds for s in liouville_check(random_algebraic(rng)).steps) for _ in range(500))
    ev = 0
    for _ in range(100):
        p, args, value = evaluation_witness(rng)
        ev += eval_height_bound(p, args, value).steps[0].holds
    rt = 0
    for _ in range(100):
        p, a, b = root_witness(rng)
        rt += root_height_bound(p, a, b).steps[0].holds
    ok = liou == 500 and ev == 100 and rt == 100
    assert record(7, ok, f"Liouville {liou}/500, evaluation height {ev}/100, root height {rt}/100")


def test_08_primes(record):
    def trial(n):
        return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))

    sieve_ok = [int(p) for p in sieve(10_000)] == [n for n in range(10_001) if trial(n)]
    t0 = time.perf_counter()
    rep = certify_prime_bounds(10**6)
    elapsed = time.perf_counter() - t0
    lower = rep.finding("sum_lower", "strict")
    ok = sieve_ok and elapsed < 60 and lower.threshold >= 3
    detail = (
        f"sieve = trial division to 1e4: {sieve_ok}; limit 1e6 in {elapsed:.1f}s; "
        f"certified threshold (strict lower sum) {lower.threshold}; claim x >= 11 violated: {rep.claim_violated} "
        f"at {lower.violations_from_claim}"
    )
    assert record(8, ok, detail)


def _oracle(c):
    import math

    g = lambda m: math.log(m) / 6 - math.log(c) - 2 * math.log(math.log(m)) / 3
    lo, hi = math.exp(4), 1e12
    for _ in range(300):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if g(mid) <= 0 else (lo, mid)
    return hi


def test_09_chain_engine(record):
    t = chain.contradiction_threshold(1)
    oracle = _oracle(1.0)
    run = chain.run_chain(chain.build_instance(4, q=Fraction(1, 2)))
    steps = run.lower.steps + run.chain.steps
    undetermined = [s.ident for s in steps if s.status == "undetermined"]
    routes = run.routes
    ordered = [routes["bounds"][k] for k in routes["order_at_instance"]] == sorted(routes["bounds"].values())
    ok = abs(t - oracle) <= 1 and not undetermined and len(routes["bounds"]) == 3 and ordered
    detail = (
        f"threshold(1) = {t} vs oracle {oracle:.2f}; {len(steps)} steps, undetermined {undetermined}; "
        f"routes {routes['bounds']} ordered {routes['order_at_instance']}"
    )
    assert record(9, ok, detail)


REPORT_COMMANDS = [
    ["chain", "run", "--q", "0.5", "--N", "4"],
    ["certify-hecke", "--N", "3", "--l", "2", "--trunc", "200"],
    ["primes", "certify", "--limit", "20000"],
    ["modpoly", "--p", "3", "--verify", "--certify"],
    ["height", "--minpoly=-1,-1,1"],
    ["chain", "cutoff", "--deg-q", "2", "--N", "10"],
]


def _reports():
    out = []
    for argv in REPORT_COMMANDS:
        proc = subprocess.run([sys.executable, "-m", "transcert.cli", *argv], capture_output=True)
        assert proc.stdout, f"{argv} produced no report: {proc.stderr.decode()}"
        out.append(proc.stdout)
    return out


def test_10_determinism(record):
    first, second = _reports(), _reports()
    same = sum(a == b and len(a) > 0 for a, b in zip(first, second))
    ok = same == len(REPORT_COMMANDS)
    assert record(10, ok, f"byte-identical JSON reports across two fresh runs: {same}/{len(REPORT_COMMANDS)}")
