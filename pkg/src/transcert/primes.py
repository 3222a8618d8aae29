"""Prime tables and certified checks of the classical prime-sum inequalities.

The two-sided bound ``x^2 / (2 log x) <= sum_{p < x} p <= x^2 / log x`` and
the Chebyshev bounds ``x / log x <= pi(x) <= C14 x / log x`` are evaluated at
every integer ``x`` up to a limit. Comparisons are done in floating point and
every case within a relative margin of a tie is re-decided with Arb balls, so
a reported violation is a certified violation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from flint import arb

from .numerics import arb_upper, decimal_string, precision, round_up

CLAIMED_THRESHOLD = 11
_TIE_MARGIN = 1e-9


class SieveLimitError(ValueError):
    pass


def sieve(limit: int) -> np.ndarray:
    """Sorted array of the primes ``p <= limit``."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.flatnonzero(is_p).astype(np.int64)


def is_prime(n: int) -> bool:
    """Trial division; the independent oracle for the sieve."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def next_prime(n: int) -> int:
    """Smallest prime ``>= n``."""
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


@dataclass(frozen=True)
class PrimeTable:
    """Primes up to ``limit`` with cumulative counts and sums indexed by ``x``.

    ``count_le[x] = #{p <= x}`` and ``sum_le[x] = sum_{p <= x} p``.
    """

    limit: int
    primes: np.ndarray
    count_le: np.ndarray
    sum_le: np.ndarray

    @classmethod
    def build(cls, limit: int, progression: tuple[int, int] | None = None) -> "PrimeTable":
        ps = sieve(limit)
        if progression is not None:
            a, d = _check_progression(progression)
            ps = ps[ps % d == a % d]
        marks = np.zeros(limit + 1, dtype=np.int64)
        marks[ps] = 1
        weights = np.zeros(limit + 1, dtype=np.int64)
        weights[ps] = ps
        return cls(limit, ps, np.cumsum(marks), np.cumsum(weights))

    def stats(self, x: int, inclusive: bool = False) -> tuple[int, int]:
        """``(pi, sigma)`` over primes ``p < x`` (or ``p <= x`` when ``inclusive``)."""
        top = x if inclusive else x - 1
        if top > self.limit:
            raise SieveLimitError(f"x={x} is beyond the sieve limit {self.limit}")
        if top < 0:
            return 0, 0
        return int(self.count_le[top]), int(self.sum_le[top])


def _check_progression(progression: tuple[int, int]) -> tuple[int, int]:
    a, d = progression
    if d < 1:
        raise ValueError("modulus must be positive")
    if math.gcd(a, d) != 1:
        raise ValueError(f"gcd({a}, {d}) != 1")
    return a, d


@lru_cache(maxsize=8)
def prime_table(limit: int, progression: tuple[int, int] | None = None) -> PrimeTable:
    return PrimeTable.build(limit, progression)


def prime_stats(
    x: int, progression: tuple[int, int] | None = None, inclusive: bool = False
) -> tuple[int, int]:
    """Exact ``(pi, sigma)`` over primes below ``x`` (strict by default), optionally in a progression."""
    if x < 0:
        raise ValueError("x must be non-negative")
    if progression is not None:
        _check_progression(progression)
    limit = max(x, 16)
    return prime_table(limit, progression).stats(x, inclusive)


def primes_below(x: int) -> list[int]:
    return [int(p) for p in sieve(x - 1)] if x > 2 else []


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


# -- certified comparison -------------------------------------------------------


def _certified_le(lhs_num: int, rhs_kind: str, x: int, phi: int) -> bool:
    """Decide ``lhs <= rhs(x)`` exactly with Arb, escalating precision."""
    for bits in (128, 256, 1024):
        with precision(bits):
            logx = arb(x).log()
            rhs = _rhs(rhs_kind, arb(x), logx, phi)
            lhs = arb(lhs_num)
            if lhs <= rhs:
                return True
            if lhs > rhs:
                return False
    raise ArithmeticError(f"could not separate the two sides at x={x}")


def _certified_ge(lhs_num: int, rhs_kind: str, x: int, phi: int) -> bool:
    for bits in (128, 256, 1024):
        with precision(bits):
            logx = arb(x).log()
            rhs = _rhs(rhs_kind, arb(x), logx, phi)
            lhs = arb(lhs_num)
            if lhs >= rhs:
                return True
            if lhs < rhs:
                return False
    raise ArithmeticError(f"could not separate the two sides at x={x}")


def _rhs(kind, x, logx, phi):
    if kind == "half_sq":
        return x * x / (2 * phi * logx)
    if kind == "sq":
        return x * x / (phi * logx)
    if kind == "lin":
        return x / (phi * logx)
    raise ValueError(kind)


def _float_rhs(kind: str, xs: np.ndarray, phi: int) -> np.ndarray:
    x = xs.astype(np.float64)
    lg = np.log(x)
    if kind == "half_sq":
        return x * x / (2 * phi * lg)
    if kind == "sq":
        return x * x / (phi * lg)
    return x / (phi * lg)


def _evaluate(values: np.ndarray, xs: np.ndarray, kind: str, phi: int, direction: str) -> np.ndarray:
    """Boolean array: does ``values (direction) rhs(x)`` hold, certified."""
    rhs = _float_rhs(kind, xs, phi)
    v = values.astype(np.float64)
    holds = v <= rhs if direction == "le" else v >= rhs
    close = np.abs(v - rhs) <= _TIE_MARGIN * np.maximum(np.abs(rhs), 1.0)
    decide = _certified_le if direction == "le" else _certified_ge
    for i in np.flatnonzero(close):
        holds[i] = decide(int(values[i]), kind, int(xs[i]), phi)
    return holds


@dataclass
class InequalityFinding:
    name: str
    convention: str
    threshold: int
    violations_from_claim: list[int] = field(default_factory=list)
    violation_count: int = 0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "convention": self.convention,
            "certified_threshold": self.threshold,
            "violation_count": self.violation_count,
            "violations_at_or_above_claim": self.violations_from_claim,
            "claim_holds": not self.violations_from_claim,
        }


def _finding(name: str, convention: str, xs: np.ndarray, holds: np.ndarray, claim: int) -> InequalityFinding:
    bad = xs[~holds]
    threshold = int(bad[-1]) + 1 if bad.size else int(xs[0])
    from_claim = [int(x) for x in bad if x >= claim]
    return InequalityFinding(name, convention, threshold, from_claim, int(bad.size))


@dataclass
class PrimeBoundsReport:
    limit: int
    progression: tuple[int, int] | None
    findings: list[InequalityFinding]
    c14: Fraction
    c14_argmax: int
    chebyshev_lower_threshold: int

    @property
    def claim_violated(self) -> bool:
        return any(f.violations_from_claim for f in self.findings if f.name.startswith("sum_"))

    def finding(self, name: str, convention: str) -> InequalityFinding:
        for f in self.findings:
            if f.name == name and f.convention == convention:
                return f
        raise KeyError((name, convention))

    def to_dict(self) -> dict:
        return {
            "limit": self.limit,
            "progression": list(self.progression) if self.progression else None,
            "claimed_threshold": CLAIMED_THRESHOLD,
            "claim_violated": self.claim_violated,
            "findings": [f.to_dict() for f in self.findings],
            "c14_empirical": {"hi": decimal_string(self.c14), "argmax_x": self.c14_argmax},
            "chebyshev_lower_threshold": self.chebyshev_lower_threshold,
        }


def certify_prime_bounds(limit: int, progression: tuple[int, int] | None = None) -> PrimeBoundsReport:
    """Evaluate the prime-sum and Chebyshev inequalities for every ``3 <= x <= limit``.

    For a progression ``(a, d)`` only primes ``p = a mod d`` are counted and the
    right-hand sides are divided by ``phi(d)``.
    """
    if limit < 100:
        raise ValueError("limit must be at least 100")
    phi = 1
    if progression is not None:
        _check_progression(progression)
        phi = euler_phi(progression[1])
    table = prime_table(limit, progression)
    xs = np.arange(3, limit + 1, dtype=np.int64)
    findings = []
    for convention, shift in (("strict", 1), ("inclusive", 0)):
        sums = table.sum_le[xs - shift]
        lo = _evaluate(sums, xs, "half_sq", phi, "ge")
        hi = _evaluate(sums, xs, "sq", phi, "le")
        findings.append(_finding("sum_lower", convention, xs, lo, CLAIMED_THRESHOLD))
        findings.append(_finding("sum_upper", convention, xs, hi, CLAIMED_THRESHOLD))

    counts = table.count_le[xs]  # pi(x) counts p <= x
    cheb = _evaluate(counts, xs, "lin", phi, "ge")
    cheb_finding = _finding("chebyshev_lower", "inclusive", xs, cheb, CLAIMED_THRESHOLD)
    findings.append(cheb_finding)

    ratios = counts.astype(np.float64) * np.log(xs.astype(np.float64)) * phi / xs
    k = int(np.argmax(ratios))
    x_star = int(xs[k])
    c14 = _c14_upper(int(counts[k]), x_star, phi)
    return PrimeBoundsReport(limit, progression, findings, c14, x_star, cheb_finding.threshold)


def _c14_upper(count: int, x: int, phi: int) -> Fraction:
    with precision(128):
        return round_up(arb_upper(arb(count) * arb(x).log() * phi / x))
