"""The auxiliary polynomial ``A`` and the function ``F = Delta^(2N) A(z, J(z))``.

``A`` has degree ``< N`` in each variable and is chosen by the Siegel step so
that ``F`` vanishes to order at least ``L = floor(N^2 / 2)`` at ``z = 0``. The
rest of the module certifies the analytic facts used about ``F``: the upper
bound on ``|F(z)|``, the nonvanishing prime power ``F(q^P)``, the
Blaschke-product bound on the first good prime and the Jensen zero count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from flint import acb, acb_series, arb, fmpz_mat

from .modforms import cusp_coeffs, stored_hecke_constant
from .numerics import (
    DEFAULT_PREC,
    MAX_PREC,
    CannotCertifyError,
    HeckeTail,
    PrecisionError,
    abs_upper,
    arb_upper,
    delta_at,
    e4_at,
    eval_series_certified,
    precision,
    to_arb,
    to_ball,
)
from .primes import is_prime, primes_below
from .qseries import IntSeries, delta_power, j_expansion
from .report import BoundReport, Inequality, ball
from .siegel import NormReport, kernel_small_vector

# Series evaluation never uses more terms than this.
MAX_EVAL_TRUNC = 4096


class TruncationTooShortError(ValueError):
    """All stored coefficients of F vanish; rebuild with a larger truncation."""


class InvariantBreachError(AssertionError):
    pass


class PrimeScanExhaustedError(RuntimeError):
    def __init__(self, message: str, uncertain: list[tuple[int, float]]):
        super().__init__(message)
        self.uncertain = uncertain


# -- construction -------------------------------------------------------------------


@dataclass(frozen=True)
class AuxPolynomial:
    """``A(x, y) = sum a[i][l] x^i y^l`` with ``0 <= i, l < N``."""

    N: int
    a: tuple[tuple[int, ...], ...]

    @classmethod
    def from_vector(cls, N: int, v) -> "AuxPolynomial":
        """Unknowns are ordered ``i``-major: position ``i * N + l`` holds ``a[i][l]``."""
        if len(v) != N * N:
            raise ValueError("vector length must be N^2")
        return cls(N, tuple(tuple(int(v[i * N + l]) for l in range(N)) for i in range(N)))

    @property
    def length(self) -> int:
        return sum(abs(c) for row in self.a for c in row)

    @property
    def height(self) -> int:
        return max(abs(c) for row in self.a for c in row)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for row in self.a for c in row)

    def terms(self):
        for i, row in enumerate(self.a):
            for l, c in enumerate(row):
                if c:
                    yield i, l, c


def system_matrix(N: int, L: int) -> list[list[int]]:
    """Rows ``nu < L``, columns ``(i, l)``: the coefficient ``c_{N,l}(nu - i)`` of ``z^nu``."""
    K = max(L - 1, 1)
    tables = [cusp_coeffs(N, l, K) for l in range(N)]
    rows = []
    for nu in range(L):
        row = []
        for i in range(N):
            for l in range(N):
                row.append(tables[l][nu - i] if i <= min(nu, N - 1) and nu - i >= 0 else 0)
        rows.append(row)
    return rows


def assembled_series(A: AuxPolynomial, trunc: int) -> IntSeries:
    """``F`` mod ``z^trunc`` from the cusp-form tables: ``sum a_{i,l} z^i c_{N,l}``."""
    N = A.N
    coeffs = [0] * trunc
    for i, l, a in A.terms():
        table = cusp_coeffs(N, l, trunc - 1).coeffs
        for k, c in table.items():
            if k + i < trunc:
                coeffs[k + i] += a * c
    return IntSeries(0, coeffs, trunc)


def direct_series(A: AuxPolynomial, trunc: int) -> IntSeries:
    """``F`` mod ``z^trunc`` as the product ``Delta^(2N) * A(z, J(z))`` of Laurent series."""
    N = A.N
    j = j_expansion(trunc)
    inner = IntSeries.zero(trunc - 2 * N)
    powers = {0: IntSeries.one(trunc)}
    for i, l, a in A.terms():
        if l not in powers:
            powers[l] = j**l
        inner = inner + (powers[l].shift(i) * a).truncate(trunc - 2 * N)
    d = delta_power(2 * N, trunc + N)
    return (d * inner).truncate(trunc)


@dataclass
class AuxFunction:
    poly: AuxPolynomial
    N: int
    L: int
    series: IntSeries
    M: int
    d0: int
    c1: Fraction
    siegel: NormReport | None = None
    dual_assembly_agrees: bool = True
    length_bound_holds: bool = True

    @property
    def trunc(self) -> int:
        return self.series.trunc

    def series_to(self, trunc: int) -> IntSeries:
        if trunc <= self.trunc:
            return self.series.truncate(trunc)
        return _cached_series(self.poly, trunc)

    def tail(self) -> HeckeTail:
        """``|e_k| <= L(A) c1^N k^(12N)`` for every coefficient of ``F``."""
        return HeckeTail(self.N, self.c1, scale=self.poly.length)

    def evaluate(self, z, trunc: int | None = None) -> acb:
        """Certified ``F(z)`` from the series with its Hecke tail."""
        return eval_series_certified(self.series_to(trunc or self.trunc), z, self.tail())

    def evaluate_product(self, z) -> acb:
        """Certified ``F(z) = sum a_{i,l} z^i Delta^(2N-l) E4^(3l)`` from the product formulas."""
        z = to_ball(z)
        d = delta_at(z)
        e3 = e4_at(z) ** 3
        total = acb(0)
        for i, l, a in self.poly.terms():
            total += a * z**i * d ** (2 * self.N - l) * e3**l
        return total

    def evaluate_reduced(self, z) -> acb:
        """``H = Delta^(N-1) A(z, J(z))``: the same zeros as ``G`` on ``0 < |z| < 1``
        (``Delta`` does not vanish there), with vanishing order ``M - N - 1`` at 0.
        ``z`` may be an order-2 ``acb_series`` to enclose the derivative too."""
        if not isinstance(z, acb_series):
            z = to_ball(z)
        d = delta_at(z)
        e3 = e4_at(z) ** 3
        total = acb(0)
        for i, l, a in self.poly.terms():
            total += a * z**i * d ** (self.N - 1 - l) * e3**l
        return total

    def length_bound(self) -> Fraction:
        """``N^4 c1^N L^(12N)``, the Siegel-route bound on ``L(A)``."""
        return self.N**4 * self.c1**self.N * self.L ** (12 * self.N)

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "L": self.L,
            "M": self.M,
            "d0": str(self.d0),
            "trunc": self.trunc,
            "length": str(self.poly.length),
            "coefficients": [[str(c) for c in row] for row in self.poly.a],
            "dual_assembly_agrees": self.dual_assembly_agrees,
            "length_bound_holds": self.length_bound_holds,
            "siegel": self.siegel.to_dict() if self.siegel else None,
        }


@lru_cache(maxsize=64)
def _cached_series(A: AuxPolynomial, trunc: int) -> IntSeries:
    return assembled_series(A, trunc)


def default_trunc(N: int) -> int:
    return N * N // 2 + 4 * N + 16


def build_auxiliary(N: int, trunc: int | None = None, c1: Fraction | None = None) -> AuxFunction:
    """Solve the vanishing system by the Siegel step and return ``F`` with its order ``M``."""
    if N < 2:
        raise ValueError("N must be at least 2")
    L = N * N // 2
    trunc = default_trunc(N) if trunc is None else trunc
    if trunc <= L:
        raise TruncationTooShortError(f"trunc={trunc} must exceed L={L}")
    c1 = stored_hecke_constant().c1 if c1 is None else Fraction(c1)

    m = system_matrix(N, L)
    v, norm = kernel_small_vector(m)
    A = AuxPolynomial.from_vector(N, v)
    if A.is_zero:
        raise InvariantBreachError("Siegel step returned the zero polynomial")

    series = assembled_series(A, trunc)
    agrees = series == direct_series(A, trunc)
    if series.is_zero:
        raise TruncationTooShortError(f"F vanishes to order >= {trunc}; increase the truncation")
    M = series.valuation
    if M < L or M < N + 1:
        raise InvariantBreachError(f"vanishing order M={M} below L={L} or N+1")
    f = AuxFunction(A, N, L, series, M, series[M], c1, norm, agrees)
    f.length_bound_holds = A.length <= f.length_bound()
    return f


def independence_rank(d: int) -> int:
    """Rank of the coefficients of ``z^i Delta^(2d) J^l`` (``0 <= i, l < d``) on
    ``q^(2d) .. q^(2d + 2d^2 - 1)``; full rank ``d^2`` means no nonzero ``A`` kills them all."""
    lo, hi = 2 * d, 2 * d + 2 * d * d
    tables = [cusp_coeffs(d, l, hi) for l in range(d)]
    rows = []
    for k in range(lo, hi):
        rows.append([tables[l][k - i] if k - i >= 0 else 0 for i in range(d) for l in range(d)])
    return fmpz_mat(rows).rank()


# -- the upper bound on |F(z)| -----------------------------------------------------------


def _ln(x) -> arb:
    return to_arb(x).log() if not isinstance(x, arb) else x.log()


@dataclass
class UpperBoundReport:
    N: int
    M: int
    z_abs: arb
    f_abs: arb
    schwarz_rhs: arb
    c5_rhs: arb
    simplified_rhs: arb
    depend_nonq_holds: bool
    eval_trunc: int
    method: str
    steps: list[Inequality] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.holds for s in self.steps if s.ident != "simplified")

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "M": self.M,
            "z_abs": ball(self.z_abs),
            "eval_trunc": self.eval_trunc,
            "method": self.method,
            "depend_nonq_precondition": "met" if self.depend_nonq_holds else "unmet",
            "steps": [s.to_dict() for s in self.steps],
            "pass": self.passed,
        }


def c4_power(N: int, c1: Fraction) -> Fraction:
    """``C4^N = N^4 c1^(2N)``: from ``L(A) <= N^4 c1^N L^(12N)`` times the Hecke bound."""
    return N**4 * Fraction(c1) ** (2 * N)


def c5_power(N: int, M: int, c1: Fraction) -> arb:
    """``C5^N`` with ``C5 = 12^12 C4 (1 + 1/M)^12``, absorbing ``(12N)! <= (12N)^(12N)``."""
    return to_arb(c4_power(N, c1)) * arb(12) ** (12 * N) * (1 + arb(1) / M) ** (12 * N)


def depend_nonq_holds(N: int, r) -> bool:
    """``(1/(1-r))^(12N+1) <= (N^2/2)^N`` decided in log form (raises if undecidable)."""
    r = to_arb(r)
    lhs = -(12 * N + 1) * (1 - r).log()
    rhs = N * (arb(N * N) / 2).log()
    if lhs <= rhs:
        return True
    if lhs > rhs:
        return False
    raise PrecisionError("precondition undecidable at this precision")


def _abs_sum_bound(f: AuxFunction, r: arb, T: int) -> arb:
    # sum_{k<T} |e_k| r^k plus the part of the Schwarz majorant beyond T, term by term.
    K = 12 * f.N
    head = arb(0)
    for k, c in f.series_to(T).items():
        head += abs(c) * r**k
    n0 = max(T - f.M, 0)
    partial = arb(0)
    w = arb(1)
    for j in range(1, K + 1):
        w *= j
    # w_n = (n+1)...(n+K), updated in place
    for n in range(n0):
        partial += w * r**n
        w = w * (n + 1 + K) / (n + 1)
    rest = arb.fac_ui(K) / (1 - r) ** (K + 1) - partial
    scale = f.poly.length * to_arb(f.c1) ** f.N * r**f.M * arb(f.M + 1) ** K
    return head + scale * rest


def check_upper_bound(f: AuxFunction, z, radius=None, prec: int = DEFAULT_PREC) -> UpperBoundReport:
    """Certify ``|F(z)| <= |z|^M C4^N L^(12N) (M+1)^(12N) (12N)! / (1-|z|)^(12N+1)``.

    The same quantity with ``(M+1)^(12N)(12N)!`` replaced by ``C5`` powers is
    checked too. The simplified ``|z|^M M^(31N)`` is evaluated and reported
    together with whether its precondition holds at ``radius`` (default ``|z|``).
    """
    N, M, L = f.N, f.M, f.L
    K = 12 * N
    with precision(prec):
        z = to_ball(z)
        r = abs_upper(z)
        if not r < 1:
            raise CannotCertifyError("|z| must be < 1")
        r_true = abs(z)
        radius = r if radius is None else to_arb(radius)

        common = r**M * to_arb(c4_power(N, f.c1)) * arb(L) ** K / (1 - r) ** (K + 1)
        schwarz = common * arb(M + 1) ** K * arb.fac_ui(K)
        c5 = r**M * c5_power(N, M, f.c1) * arb(L) ** K * arb(M) ** K * arb(N) ** K / (1 - r) ** (K + 1)
        simplified = r**M * arb(M) ** (31 * N)

        T = _eval_trunc(f, r)
        method = "series"
        f_abs = None
        if T is not None:
            try:
                f_abs = abs(f.evaluate(z, T))
            except PrecisionError:
                f_abs = None
        if f_abs is None or not f_abs <= schwarz:
            bound = _abs_sum_bound(f, r, f.trunc)
            f_abs = arb(0, bound.upper()) if f_abs is None else f_abs
            if not f_abs <= schwarz:
                f_abs = arb(0, bound.upper())
                method = "majorant"
            T = T or f.trunc
        steps = [
            Inequality("schwarz", f_abs, schwarz, "C4^N L^12N (M+1)^12N (12N)! |z|^M / (1-|z|)^(12N+1)"),
            Inequality("c5", f_abs, c5, "C5^N L^12N M^12N N^12N |z|^M / (1-|z|)^(12N+1)"),
            Inequality("simplified", f_abs, simplified, "|z|^M M^31N"),
        ]
        try:
            pre = depend_nonq_holds(N, radius)
        except PrecisionError:
            pre = False
    return UpperBoundReport(N, M, r_true, f_abs, schwarz, c5, simplified, pre, T, method, steps)


def _eval_trunc(f: AuxFunction, r: arb) -> int | None:
    # Enough terms that consecutive Hecke-majorant terms shrink by (1+r)/2.
    K = 12 * f.N
    ratio = float(((1 + r) / (2 * r)).log().lower()) if r > 0 else math.inf
    if ratio <= 0:
        return None
    T = max(f.trunc, f.M + math.ceil(K / ratio) + 1)
    return T if T <= MAX_EVAL_TRUNC else None


def sample_disk(radius, count: int, rings: int = 10) -> list[acb]:
    """``count`` deterministic points ``rho e^(i theta)`` spread over ``|z| <= radius``."""
    pts: list[acb] = []
    per, extra = divmod(count, rings)
    for k in range(rings):
        rho = to_arb(radius) * (k + 1) / rings
        n = per + (1 if k < extra else 0)
        for t in range(n):
            theta = 2 * arb.pi() * (to_arb(Fraction(k, 7)) + t) / n
            pts.append(acb(rho * theta.cos(), rho * theta.sin()))
    return pts


# -- prime powers ----------------------------------------------------------------------


@dataclass
class GoodPrime:
    P: int
    value: acb
    uncertain: list[tuple[int, float]]

    def to_dict(self) -> dict:
        return {
            "P": self.P,
            "F_qP": ball(self.value),
            "uncertain": [{"p": p, "radius": r} for p, r in self.uncertain],
        }


def _prime_candidates(pmax: int, residue: tuple[int, int] | None):
    if residue is not None:
        a, d = residue
        if math.gcd(a, d) != 1:
            raise ValueError(f"gcd({a}, {d}) != 1")
    for p in range(2, pmax + 1):
        if is_prime(p) and (residue is None or p % residue[1] == residue[0] % residue[1]):
            yield p


def first_good_prime(
    q, f: AuxFunction, pmax: int, residue: tuple[int, int] | None = None, prec: int = DEFAULT_PREC
) -> GoodPrime:
    """Smallest prime ``P <= pmax`` (optionally ``P = a mod d``) with ``F(q^P)`` certified nonzero."""
    uncertain: list[tuple[int, float]] = []
    with precision(prec):
        q = to_ball(q)
        rq = abs_upper(q)
        if not (rq < 1) or q.contains(0):
            raise CannotCertifyError("need 0 < |q| < 1")
    for p in _prime_candidates(pmax, residue):
        value = None
        bits = prec
        while bits <= MAX_PREC:
            with precision(bits):
                v = f.evaluate_product(to_ball(q) ** p)
                if not v.contains(0):
                    value = v
                    break
            bits *= 2
        if value is not None:
            return GoodPrime(p, value, uncertain)
        uncertain.append((p, float(abs_upper(v).mid()) if v.is_finite() else math.inf))
    raise PrimeScanExhaustedError(f"no prime <= {pmax} gives a certified nonzero F(q^P)", uncertain)


# -- Blaschke product bound -------------------------------------------------------------


@dataclass
class BlaschkeReport:
    P: int
    assumed_zero_primes: list[int]
    identity_samples: int
    identity_holds: bool
    c15: Fraction
    c15_precondition: bool
    chain: BoundReport

    @property
    def passed(self) -> bool:
        return self.identity_holds and all(s.holds for s in self.chain.steps)

    def to_dict(self) -> dict:
        return {
            "P": self.P,
            "mode": "hypothesis",
            "assumed_zero_primes": self.assumed_zero_primes,
            "identity": {"samples": self.identity_samples, "holds": self.identity_holds},
            "c15": str(self.c15),
            "c15_precondition_P_ge_4c14": self.c15_precondition,
            "chain": self.chain.to_dict(),
        }


def boundary_identity_holds(r, z: acb, w: acb) -> bool:
    """``|r^2 - conj(w) z| = |r (z - w)|`` for ``|z| = r``, certified up to ball radii."""
    r = to_arb(r)
    lhs = abs(r * r - w.conjugate() * z)
    rhs = abs(r * (z - w))
    return (lhs - rhs).contains(0)


C15 = Fraction(4)


def blaschke_prime_bound(q_abs, f: AuxFunction, P: int, c14, samples: int = 16, prec: int = DEFAULT_PREC) -> BlaschkeReport:
    """Evaluate the Blaschke-product chain for ``P``, assuming ``F(q^p) = 0`` for primes ``p < P``."""
    if not is_prime(P):
        raise ValueError("P must be prime")
    N, M = f.N, f.M
    small = primes_below(P)
    with precision(prec):
        qa = to_arb(q_abs)
        if not (qa > 0 and qa < 1):
            raise ValueError("need 0 < q_abs < 1")
        r = (1 + qa) / 2
        ok = True
        count = 0
        for k in range(samples):
            theta = 2 * arb.pi() * k / samples
            z = acb(r * theta.cos(), r * theta.sin())
            for p in [None] + small:
                if p is None:
                    w = acb(0)
                else:
                    phi = arb(k + p) / 3
                    w = acb(qa**p * phi.cos(), qa**p * phi.sin())
                ok = ok and boundary_identity_holds(r, z, w)
                count += 1

        log_rhs = 31 * N * arb(M).log()
        lq = -qa.log()
        lr = -r.log()
        pi_p = len(small)
        sigma = sum(small)
        rep = BoundReport("blaschke")
        rep.add(
            "H0_bound",
            arb(abs(f.d0)).log() - pi_p * lr + sigma * lq,
            log_rhs,
            "log(|d0| r^pi(P) |q|^-sum p) <= 31N log M",
        )
        rep.add("prime_power_chain", -pi_p * lr + sigma * lq, log_rhs, "log(r^pi(P) |q|^-sum p) <= 31N log M")
        c14a = to_arb(c14)
        lp = arb(P).log()
        rep.add(
            "chebyshev_form",
            arb(P) ** 2 / (2 * lp) * lq - c14a * lr * P / lp,
            log_rhs,
            "P^2/(2 log P) log(1/|q|) - C14 log(1/r) P/log P <= 31N log M",
        )
        rep.add(
            "bound_on_P",
            arb(P) ** 2 / lp,
            to_arb(C15) * log_rhs / lq,
            "P^2/log P <= C15 31N log M / log(1/|q|)",
        )
        pre = bool(arb(P) >= 4 * c14a)
    return BlaschkeReport(P, small, count, ok, C15, pre, rep)


# -- Jensen zero count ----------------------------------------------------------------


@dataclass
class JensenReport:
    contour_radius: Fraction
    winding: int
    order_at_zero: int
    zero_count: int
    bound: arb
    arcs: int

    @property
    def passed(self) -> bool:
        return bool(arb(self.zero_count) <= self.bound)

    def to_dict(self) -> dict:
        return {
            "contour_radius": str(self.contour_radius),
            "winding_H": self.winding,
            "order_at_zero_H": self.order_at_zero,
            "zero_count_G": self.zero_count,
            "bound": ball(self.bound),
            "arcs": self.arcs,
            "pass": self.passed,
        }


def jensen_bound(q_abs, M: int, N: int) -> arb:
    """``log(M^(31N)) / log(r / |q|)`` with ``r = (1 + |q|)/2`` and ``|G(0)| >= 1``."""
    qa = to_arb(q_abs)
    r = (1 + qa) / 2
    return 31 * N * arb(M).log() / (r / qa).log()


def _mean_value_enclosure(func, centre: acb, offset: acb) -> acb | None:
    """``func(centre) + func'(region) * offset`` over ``region = centre + offset``.

    Much tighter than evaluating ``func`` on the region directly, whose balls
    grow with the sum of the absolute values of all terms.
    """
    jet = func(acb_series([centre + offset, 1], prec=2))
    value = func(centre) + jet[1] * offset
    return value if value.is_finite() else None


def winding_number(func, radius: Fraction, arcs: int = 64, max_depth: int = 14) -> tuple[int, int]:
    """Certified winding number of ``func`` around 0 along ``|z| = radius``.

    Each arc is covered by a ball; when ``func`` of that ball excludes 0 the
    argument varies by less than ``pi`` along the arc, so the increment is the
    principal argument of ``func(end) / func(start)``.
    """
    rho = to_arb(radius)
    two_pi = 2 * arb.pi()
    cache: dict[Fraction, acb] = {}

    def point(t: Fraction) -> acb:
        if t not in cache:
            theta = two_pi * to_arb(t)
            cache[t] = func(acb(rho * theta.cos(), rho * theta.sin()))
        return cache[t]

    total = arb(0)
    used = 0
    stack = [(Fraction(k, arcs), Fraction(k + 1, arcs), 0) for k in range(arcs)]
    while stack:
        a, b, depth = stack.pop()
        mid = (a + b) / 2
        theta = two_pi * to_arb(mid)
        half = rho * two_pi * to_arb((b - a) / 2)
        centre = acb(rho * theta.cos(), rho * theta.sin())
        offset = acb(arb(0, half.upper()), arb(0, half.upper()))
        enclosure = _mean_value_enclosure(func, centre, offset)
        inc = None
        if enclosure is not None and not enclosure.contains(0):
            inc = (point(b) / point(a)).arg()
            if not inc.is_finite() or inc.rad() > 0.1:
                inc = None
        if inc is None:
            if depth >= max_depth:
                raise CannotCertifyError("contour passes too close to a zero")
            stack.append((a, mid, depth + 1))
            stack.append((mid, b, depth + 1))
            continue
        total += inc
        used += 1
    w = total / two_pi
    n = round(float(w.mid()))
    if not (w.contains(n) and w.rad() < 0.5):
        raise CannotCertifyError("winding number not certified")
    return n, used


def jensen_zero_bound(q, f: AuxFunction, eps: Fraction | None = None, retries: int = 3, prec: int = DEFAULT_PREC) -> JensenReport:
    """Count zeros of ``G = z^-M F`` in ``|z| < |q| + eps`` and compare with the Jensen bound at ``|q|``.

    The count is a winding number of ``H = Delta^(N-1) A(z, J(z))`` minus its
    order at 0; it can only overcount the zeros in ``|z| < |q|``.
    """
    with precision(prec):
        q = to_ball(q)
        qa = abs(q)
        q_up = arb_upper(abs_upper(q))
        if not q_up < 1:
            raise CannotCertifyError("need |q| < 1")
        eps = Fraction(1, 1000) * (1 - q_up) if eps is None else Fraction(eps)
        bound = jensen_bound(qa, f.M, f.N)
        last: Exception | None = None
        for _ in range(retries + 1):
            radius = q_up + eps
            try:
                w, used = winding_number(f.evaluate_reduced, radius)
                order = f.M - f.N - 1
                return JensenReport(radius, w, order, w - order, bound, used)
            except CannotCertifyError as exc:
                last = exc
                eps = eps * Fraction(17, 10)
        raise CannotCertifyError(f"contour certification failed after {retries} perturbations: {last}")
