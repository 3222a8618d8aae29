"""Classical modular polynomials of prime level and their certified properties.

``Phi_p(X, J(q))`` has the ``p + 1`` roots ``J(q^p)`` and
``J(zeta^i q^(1/p))``. Their power sums are integral q-series:

    sum_i J(zeta^i w)^k = p * (terms of J(w)^k whose exponent is divisible by p),

with ``w = q^(1/p)``, because ``sum_i zeta^(i n)`` is ``p`` or ``0``. Newton's
identities turn the power sums into the elementary symmetric functions, and
each of those is rewritten as a polynomial in ``J`` by cancelling poles. Every
step is exact integer arithmetic and is checked (exact divisions, vanishing
remainders, symmetry).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from flint import acb, arb, fmpz_poly

from .heights import AlgebraicNumber, IntPolynomial
from .numerics import DEFAULT_PREC, j_at, nome, precision, to_arb
from .qseries import IntSeries, j_expansion
from .report import FAILS, HOLDS, BoundReport, interval

SUPPORTED_PRIMES = (2, 3, 5, 7)

# Reference table, independent of the computation below: coefficient of
# X^a Y^b for a >= b.
PHI2_REFERENCE: dict[tuple[int, int], int] = {
    (3, 0): 1,
    (2, 2): -1,
    (2, 1): 1488,
    (2, 0): -162000,
    (1, 1): 40773375,
    (1, 0): 8748000000,
    (0, 0): -157464000000000,
}


class DeterminationError(ArithmeticError):
    """The q-expansion data did not determine an integral polynomial."""


class IdentityFailure(AssertionError):
    pass


class UnsupportedValueError(ValueError):
    pass


# -- level arithmetic ---------------------------------------------------------------


def factorize(n: int) -> dict[int, int]:
    if n < 1:
        raise ValueError("n must be positive")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class LevelInvariants:
    n: int
    psi: int
    kappa: arb
    lam: arb

    def to_dict(self) -> dict:
        return {"n": self.n, "psi": self.psi, "kappa": interval(self.kappa), "lambda": interval(self.lam)}


def dedekind_psi(n: int) -> int:
    """``psi(n) = n prod_{p | n} (1 + 1/p)``."""
    out = Fraction(n)
    for p in factorize(n):
        out *= Fraction(p + 1, p)
    return int(out)


def level_invariants(n: int) -> LevelInvariants:
    """``psi(n)``, ``kappa_n = sum_{p|n} log p / p`` and
    ``lambda_n = sum_{p^e || n} (p^e - 1) / (p^(e-1) (p^2 - 1)) log p``."""
    fac = factorize(n)
    kappa = arb(0)
    lam = arb(0)
    for p, e in fac.items():
        lg = arb(p).log()
        kappa += lg / p
        lam += to_arb(Fraction(p**e - 1, p ** (e - 1) * (p * p - 1))) * lg
    return LevelInvariants(n, dedekind_psi(n), kappa, lam)


# -- the polynomial ------------------------------------------------------------------


@dataclass(frozen=True)
class ModularPolynomial:
    """Symmetric ``Phi_N(X, Y)``; ``coeffs`` maps ``(a, b)`` to the coefficient of ``X^a Y^b``."""

    level: int
    coeffs: tuple[tuple[tuple[int, int], int], ...]

    @classmethod
    def from_dict(cls, level: int, d: dict[tuple[int, int], int]) -> "ModularPolynomial":
        return cls(level, tuple(sorted((k, int(c)) for k, c in d.items() if c)))

    @classmethod
    def from_half(cls, level: int, half: dict[tuple[int, int], int]) -> "ModularPolynomial":
        """Expand a table of ``a >= b`` entries by symmetry."""
        d: dict[tuple[int, int], int] = {}
        for (a, b), c in half.items():
            if a < b:
                raise ValueError("half tables store a >= b only")
            d[(a, b)] = c
            d[(b, a)] = c
        return cls.from_dict(level, d)

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.coeffs)

    def coefficient(self, a: int, b: int) -> int:
        return self.as_dict().get((a, b), 0)

    def as_int_polynomial(self) -> IntPolynomial:
        return IntPolynomial.from_dict(self.as_dict(), 2)

    @property
    def degree_x(self) -> int:
        return max(a for (a, _), _ in self.coeffs)

    @property
    def degree_y(self) -> int:
        return max(b for (_, b), _ in self.coeffs)

    @property
    def is_symmetric(self) -> bool:
        d = self.as_dict()
        return all(d.get((b, a)) == c for (a, b), c in d.items())

    @property
    def is_monic_in_x(self) -> bool:
        top = self.degree_x
        return [((a, b), c) for (a, b), c in self.coeffs if a == top] == [((top, 0), 1)]

    @property
    def height(self) -> int:
        return max(abs(c) for _, c in self.coeffs)

    @property
    def length(self) -> int:
        return sum(abs(c) for _, c in self.coeffs)

    def evaluate(self, x, y) -> Fraction:
        return self.as_int_polynomial().evaluate_exact([x, y])

    def specialize_y(self, y: Fraction) -> fmpz_poly:
        """``den(y)^deg_Y * Phi(X, y)`` as an integer polynomial in ``X``."""
        y = Fraction(y)
        dy = self.degree_y
        out = [Fraction(0)] * (self.degree_x + 1)
        for (a, b), c in self.coeffs:
            out[a] += c * y**b * y.denominator**dy
        if any(v.denominator != 1 for v in out):
            raise AssertionError("specialization is not integral")
        return fmpz_poly([int(v) for v in out])

    def dumps(self) -> str:
        """Lines ``a b c`` (coefficient ``c`` of ``X^a Y^b``) for ``a >= b``."""
        lines = [f"# level {self.level}"]
        for (a, b), c in sorted(self.coeffs, reverse=True):
            if a >= b:
                lines.append(f"{a} {b} {c}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, level: int | None = None) -> "ModularPolynomial":
        half: dict[tuple[int, int], int] = {}
        for ln in text.splitlines():
            ln = ln.strip()
            if not ln:
                continue
            if ln.startswith("#"):
                parts = ln[1:].split()
                if len(parts) == 2 and parts[0] == "level" and level is None:
                    level = int(parts[1])
                continue
            a, b, c = (int(t) for t in ln.split())
            half[(a, b)] = c
        if level is None:
            raise ValueError("level not given")
        return cls.from_half(level, half)

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def read(cls, path: str | Path) -> "ModularPolynomial":
        return cls.loads(Path(path).read_text())

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "degree": self.degree_x,
            "terms": [[a, b, str(c)] for (a, b), c in sorted(self.coeffs, reverse=True) if a >= b],
        }


def phi2_reference() -> ModularPolynomial:
    return ModularPolynomial.from_half(2, PHI2_REFERENCE)


def _trace_series(jk: IntSeries, p: int) -> IntSeries:
    """``p`` times the terms of ``jk`` whose exponent is divisible by ``p``, re-indexed ``w^(p n) -> q^n``."""
    v = -((-jk.valuation) // p)  # ceil(valuation / p)
    t = -((-jk.trunc) // p)
    out = [p * jk[p * n] for n in range(v, t)]
    return IntSeries(v, out, t)


def _exact_div(s: IntSeries, m: int) -> IntSeries:
    if any(c % m for c in s.coeffs):
        raise DeterminationError(f"Newton identity division by {m} is not exact")
    return IntSeries(s.valuation, [c // m for c in s.coeffs], s.trunc) if not s.is_zero else s


def _as_polynomial_in_j(s: IntSeries, max_degree: int, jpows: list[IntSeries]) -> dict[int, int]:
    """Coefficients ``a_b`` with ``s = sum a_b J^b``; the remainder must vanish to ``s.trunc``."""
    out: dict[int, int] = {}
    rest = s
    if not rest.is_zero and rest.valuation < -max_degree:
        raise DeterminationError(f"pole of order {-rest.valuation} exceeds {max_degree}")
    for b in range(max_degree, -1, -1):
        c = rest[-b]
        if c:
            out[b] = c
            rest = rest - jpows[b].scale(c)
    if not rest.is_zero:
        raise DeterminationError(f"nonzero remainder at q^{rest.valuation}")
    return out


def _phi_from_expansions(p: int, K: int) -> ModularPolynomial:
    d = p + 1
    # Generous working truncation; the final check below demands >= K.
    T = K + 2 * d * d + 4
    jw = j_expansion(p * T)
    jq = j_expansion(T)
    power_sums: list[IntSeries] = []
    jk = IntSeries.one(p * T + 1)
    jpk = IntSeries.one(p * T + 1)
    jp = jq.inflate(p)
    for _ in range(d):
        jk = jk * jw
        jpk = jpk * jp
        power_sums.append(jpk + _trace_series(jk, p))
    elem = [IntSeries.one(T + d)]
    for m in range(1, d + 1):
        acc = None
        for i in range(1, m + 1):
            term = elem[m - i] * power_sums[i - 1]
            if i % 2 == 0:
                term = -term
            acc = term if acc is None else acc + term
        elem.append(_exact_div(acc, m))
    jpows = [IntSeries.one(T + d)]
    for _ in range(d):
        jpows.append(jpows[-1] * jq)
    coeffs: dict[tuple[int, int], int] = {}
    for m in range(d + 1):
        if elem[m].trunc < K:
            raise DeterminationError(f"elementary function {m} known only to q^{elem[m].trunc}")
        poly = _as_polynomial_in_j(elem[m].truncate(K), d, jpows)
        sign = -1 if m % 2 else 1
        for b, c in poly.items():
            coeffs[(d - m, b)] = sign * c
    return ModularPolynomial.from_dict(p, coeffs)


def default_determination_trunc(p: int) -> int:
    return (p + 1) * (p + 1) + 8


def compute_phi_p(p: int, K: int | None = None) -> ModularPolynomial:
    """``Phi_p`` for a prime ``p`` in ``{2, 3, 5, 7}``.

    The symmetric functions are matched against polynomials in ``J`` through
    ``q^(K-1)``; the result is recomputed with a longer window to confirm that
    the coefficients have stabilized.
    """
    if p not in SUPPORTED_PRIMES:
        raise ValueError(f"level must be one of {SUPPORTED_PRIMES}")
    K = default_determination_trunc(p) if K is None else K
    if K < 1:
        raise ValueError("K must be positive")
    phi = _phi_from_expansions(p, K)
    if _phi_from_expansions(p, K + p + 1) != phi:
        raise DeterminationError("coefficients did not stabilize")
    if not (phi.is_symmetric and phi.is_monic_in_x and phi.degree_x == p + 1 and phi.degree_y == p + 1):
        raise DeterminationError("result is not a symmetric monic polynomial of degree p + 1")
    return phi


@lru_cache(maxsize=None)
def modular_polynomial(p: int) -> ModularPolynomial:
    return compute_phi_p(p)


# -- certification -------------------------------------------------------------------


@dataclass
class IdentityReport:
    level: int
    K: int
    passed: bool
    first_offending_exponent: int | None

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "K": self.K,
            "pass": self.passed,
            "first_offending_exponent": self.first_offending_exponent,
        }


def verify_phi_identity(phi: ModularPolynomial, K: int = 30) -> IdentityReport:
    """Check ``Phi(J(q^p), J(q)) = 0 mod q^K`` by exact series substitution."""
    p = phi.level
    dx, dy = phi.degree_x, phi.degree_y
    T = K + p * dx + dy + 2
    jq = j_expansion(T)
    jp = jq.inflate(p)
    xs = [IntSeries.one(T + p * dx + 1)]
    for _ in range(dx):
        xs.append(xs[-1] * jp)
    ys = [IntSeries.one(T + dy + 1)]
    for _ in range(dy):
        ys.append(ys[-1] * jq)
    total = IntSeries.zero(K)
    for (a, b), c in phi.coeffs:
        term = (xs[a] * ys[b]).scale(c)
        if term.trunc < K:
            raise AssertionError("internal error: substitution truncation too short")
        total = total + term.truncate(K)
    residual = total.truncate(K)
    if residual.is_zero:
        return IdentityReport(p, K, True, None)
    return IdentityReport(p, K, False, residual.valuation)


@dataclass
class PhiHeightReport:
    level: int
    H: int
    L: int
    h: arb
    l: arb
    bounds: BoundReport
    cohen_constant: arb

    @property
    def passed(self) -> bool:
        return all(s.status == HOLDS for s in self.bounds.steps)

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "H": str(self.H),
            "L": str(self.L),
            "h": interval(self.h),
            "l": interval(self.l),
            "checks": self.bounds.to_dict()["steps"],
            "cohen_empirical_constant": interval(self.cohen_constant),
            "pass": self.passed,
        }


def prime_height_bound(p: int) -> arb:
    """``6 p log p + 16 p + 14 sqrt(p) log p``."""
    lg = arb(p).log()
    return 6 * p * lg + 16 * p + 14 * arb(p).sqrt() * lg


def certify_phi_height(phi: ModularPolynomial, prec: int = DEFAULT_PREC) -> PhiHeightReport:
    """Exact ``H``, ``L`` and the explicit height bounds, each with certified sides.

    The Cohen-type asymptotic has an unnamed ``O(1)``; its empirical value
    ``h / (6 psi) - log N + 2 kappa`` is reported rather than checked.
    """
    n = phi.level
    with precision(prec):
        inv = level_invariants(n)
        h = arb(phi.height).log()
        l = arb(phi.length).log()
        lg = arb(n).log()
        rep = BoundReport(f"phi_{n}_height")
        if len(factorize(n)) == 1 and factorize(n).get(n) == 1:
            rep.add("prime_explicit", h, prime_height_bound(n), "h <= 6p log p + 16p + 14 sqrt(p) log p")
            rep.add("log_length", l, 2 * arb(n + 2).log() + prime_height_bound(n))
        six_psi = 6 * inv.psi
        rep.add("psi_lower", six_psi * (lg - 2 * inv.lam - to_arb(Fraction("0.0351"))), h)
        rep.add("psi_upper", h, six_psi * (lg - 2 * inv.lam + to_arb(Fraction("9.5387"))))
        rep.add("length_ge_height", h, l)
        cohen = h / six_psi - lg + 2 * inv.kappa
    return PhiHeightReport(n, phi.height, phi.length, h, l, rep, cohen)


# -- specialization degrees ----------------------------------------------------------


def reduce_form(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Reduced positive definite form equivalent under SL2(Z) to ``(a, b, c)``.

    The root ``tau = (-b + sqrt(b^2 - 4ac)) / (2a)`` moves to the standard
    fundamental domain, so ``j`` is unchanged.
    """
    if b * b - 4 * a * c >= 0:
        raise ValueError("form must have negative discriminant")
    if a < 0:
        a, b, c = -a, -b, -c
    while True:
        # translate: b into (-a, a]
        k = (a - b) // (2 * a)
        b, c = b + 2 * k * a, a * k * k + b * k + c
        if a > c:
            a, b, c = c, -b, a
            continue
        break
    if (a == c or b == a) and b < 0:
        b = -b
    return a, b, c


def cm_j_value(a: int, b: int, c: int, prec: int = DEFAULT_PREC):
    """Ball of ``j(tau)`` for the CM point ``a tau^2 + b tau + c = 0`` (``j = 1728`` at ``i``)."""
    ra, rb, rc = reduce_form(a, b, c)
    disc = rb * rb - 4 * ra * rc
    with precision(prec):
        tau = acb(arb(-rb), arb(-disc).sqrt()) / (2 * ra)
        return j_at(nome(tau))


def multiplied_form(a: int, b: int, c: int, p: int) -> tuple[int, int, int]:
    """Form whose root is ``p tau`` for the root ``tau`` of ``(a, b, c)``."""
    na, nb, nc = a, b * p, c * p * p
    g = math.gcd(math.gcd(na, nb), nc)
    return na // g, nb // g, nc // g


@dataclass
class SpecializationReport:
    level: int
    j0: Fraction
    factor_degrees: list[int]
    relevant_degree: int | None
    bound: Fraction
    applicable: bool
    status: str
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "j0": str(self.j0),
            "factor_degrees": self.factor_degrees,
            "relevant_degree": self.relevant_degree,
            "bound": str(self.bound),
            "bound_applicable": self.applicable,
            "status": self.status,
            "note": self.note,
        }


def specialization_degree(
    phi: ModularPolynomial, j0: AlgebraicNumber | Fraction | int, cm: tuple[int, int, int] | None = None,
    prec: int = DEFAULT_PREC,
) -> SpecializationReport:
    """Degrees of the irreducible factors of ``Phi_p(X, j0)`` over ``Q`` for rational ``j0``.

    With CM data ``(a, b, c)`` for ``tau`` (``j(tau) = j0``) the factor
    carrying ``j(p tau)`` is located numerically and ``(p - 1)/3`` is checked
    against its degree when ``p`` does not divide ``a``. Without CM data the
    bound is checked against the smallest factor degree.
    """
    if isinstance(j0, AlgebraicNumber):
        if not j0.is_rational:
            raise UnsupportedValueError("only rational j0 is supported")
        j0 = j0.as_fraction()
    j0 = Fraction(j0)
    p = phi.level
    poly = phi.specialize_y(j0)
    _, factors = poly.factor()
    degrees = sorted(int(g.degree()) for g, e in factors for _ in range(int(e)))
    bound = Fraction(p - 1, 3)
    if cm is None:
        relevant = None
        applicable = True
        target = min(degrees)
        note = "no CM data: bound checked against the smallest factor"
    else:
        a, b, c = cm
        with precision(prec):
            if not cm_j_value(a, b, c, prec).contains(to_arb(j0)):
                raise UnsupportedValueError(f"CM data {cm} does not match j0 = {j0}")
            jp = cm_j_value(*multiplied_form(a, b, c, p), prec)
            hits = []
            for g, _ in factors:
                roots = [r for r, _ in g.complex_roots()]
                if any(r.overlaps(jp) for r in roots):
                    hits.append(int(g.degree()))
        if len(hits) != 1:
            raise UnsupportedValueError("could not single out the factor carrying j(p tau)")
        relevant = hits[0]
        target = relevant
        applicable = a % p != 0
        note = f"j(p tau) lies on a factor of degree {relevant}"
    if not applicable:
        status = "not_applicable"
    else:
        status = HOLDS if bound <= target else FAILS
    return SpecializationReport(p, j0, degrees, relevant, bound, applicable, status, note)


__all__ = [
    "DeterminationError",
    "IdentityReport",
    "LevelInvariants",
    "ModularPolynomial",
    "PHI2_REFERENCE",
    "PhiHeightReport",
    "SUPPORTED_PRIMES",
    "SpecializationReport",
    "certify_phi_height",
    "cm_j_value",
    "compute_phi_p",
    "dedekind_psi",
    "level_invariants",
    "modular_polynomial",
    "phi2_reference",
    "prime_height_bound",
    "reduce_form",
    "specialization_degree",
    "verify_phi_identity",
]
