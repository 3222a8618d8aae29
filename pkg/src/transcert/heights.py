"""Algebraic numbers, Mahler measure and Weil height, and the height lemmas.

An :class:`AlgebraicNumber` is an irreducible primitive integer polynomial
together with a ball isolating one of its roots. Heights are computed from
certified enclosures of all roots; ties that balls cannot separate are
decided exactly in integers whenever the Mahler measures involved are
integers (for instance rationals, or numbers with all conjugates on one side
of the unit circle).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Mapping, Sequence

from flint import acb, arb, fmpz_mpoly_ctx, fmpz_poly

from .numerics import DEFAULT_PREC, MAX_PREC, PrecisionError, arb_upper, precision, to_arb, to_ball
from .report import FAILS, HOLDS, UNDETERMINED, BoundReport, interval


class InvalidMinpolyError(ValueError):
    pass


class InconsistentWitnessError(ValueError):
    """The supplied exact value does not match the numerical evaluation."""


class PreconditionError(ValueError):
    pass


# -- polynomials ------------------------------------------------------------------


@dataclass(frozen=True)
class IntPolynomial:
    """Sparse multivariate integer polynomial; ``terms`` maps exponent tuples to nonzero coefficients."""

    arity: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def from_dict(cls, d: Mapping[tuple[int, ...], int], arity: int | None = None) -> "IntPolynomial":
        items = [(tuple(int(e) for e in k), int(c)) for k, c in d.items() if int(c) != 0]
        if arity is None:
            if not items:
                raise ValueError("arity is required for the zero polynomial")
            arity = len(items[0][0])
        for k, _ in items:
            if len(k) != arity or any(e < 0 for e in k):
                raise ValueError(f"bad exponent tuple {k} for arity {arity}")
        merged: dict[tuple[int, ...], int] = {}
        for k, c in items:
            merged[k] = merged.get(k, 0) + c
        return cls(arity, tuple(sorted((k, c) for k, c in merged.items() if c)))

    @classmethod
    def univariate(cls, coeffs: Sequence[int]) -> "IntPolynomial":
        return cls.from_dict({(i,): c for i, c in enumerate(coeffs)}, 1)

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def height(self) -> int:
        """``H(P) = max |c|``."""
        return max((abs(c) for _, c in self.terms), default=0)

    @property
    def length(self) -> int:
        """``L(P) = sum |c|``."""
        return sum(abs(c) for _, c in self.terms)

    def degree(self, var: int) -> int:
        return max((k[var] for k, _ in self.terms), default=0)

    def evaluate(self, args: Sequence) -> acb:
        """Ball evaluation at ball (or exact) arguments."""
        if len(args) != self.arity:
            raise ValueError("wrong number of arguments")
        xs = [to_ball(a) for a in args]
        total = acb(0)
        for k, c in self.terms:
            t = acb(c)
            for x, e in zip(xs, k):
                if e:
                    t *= x**e
            total += t
        return total

    def evaluate_exact(self, args: Sequence[Fraction | int]) -> Fraction:
        total = Fraction(0)
        for k, c in self.terms:
            t = Fraction(c)
            for x, e in zip(args, k):
                t *= Fraction(x) ** e
            total += t
        return total


# -- algebraic numbers ------------------------------------------------------------


@lru_cache(maxsize=4096)
def _roots(coeffs: tuple[int, ...], bits: int) -> tuple[acb, ...]:
    with precision(bits):
        roots = fmpz_poly(list(coeffs)).complex_roots()
    out = []
    for r, mult in roots:
        out.extend([r] * int(mult))
    return tuple(out)


def _root_key(r: acb) -> tuple[float, float]:
    return (float(r.real.mid()), float(r.imag.mid()))


def _check_minpoly(coeffs: Sequence[int]) -> tuple[int, ...]:
    c = [int(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    if len(c) < 2:
        raise InvalidMinpolyError("a minimal polynomial has degree at least 1")
    if c[-1] < 0:
        c = [-x for x in c]
    p = fmpz_poly(c)
    if int(p.content()) != 1:
        raise InvalidMinpolyError("minimal polynomial must be primitive")
    _, factors = p.factor()
    if len(factors) != 1 or int(factors[0][1]) != 1:
        raise InvalidMinpolyError(f"{c} is not irreducible over Q")
    return tuple(c)


@dataclass(frozen=True)
class AlgebraicNumber:
    """Root of an irreducible primitive integer polynomial with positive leading coefficient.

    ``minpoly`` lists coefficients from the constant term up; ``root`` is a
    ball that overlaps exactly one root.
    """

    minpoly: tuple[int, ...]
    root: acb

    @classmethod
    def from_minpoly(cls, coeffs: Sequence[int], approx=None, index: int | None = None) -> "AlgebraicNumber":
        """Pick the root nearest ``approx``, or the ``index``-th root in (real, imag) order."""
        mp = _check_minpoly(coeffs)
        roots = sorted(_roots(mp, DEFAULT_PREC), key=_root_key)
        if approx is not None:
            a = complex(approx)
            root = min(roots, key=lambda r: abs(complex(*_root_key(r)) - a))
        else:
            root = roots[index or 0]
        return cls(mp, root)

    @classmethod
    def rational(cls, num: int, den: int = 1) -> "AlgebraicNumber":
        x = Fraction(num, den)
        return cls((-x.numerator, x.denominator), acb(to_arb(x)))

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @property
    def poly(self) -> fmpz_poly:
        return fmpz_poly(list(self.minpoly))

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("not a rational number")
        return Fraction(-self.minpoly[0], self.minpoly[1])

    @property
    def is_zero(self) -> bool:
        return self.minpoly == (0, 1)

    def value(self, bits: int = DEFAULT_PREC) -> acb:
        """The root refined at ``bits`` of working precision."""
        if bits <= DEFAULT_PREC:
            return self.root
        hits = [r for r in _roots(self.minpoly, bits) if r.overlaps(self.root)]
        if len(hits) != 1:
            raise PrecisionError("stored root ball no longer isolates a unique root")
        return hits[0]

    def conjugates(self, bits: int = DEFAULT_PREC) -> tuple[acb, ...]:
        return _roots(self.minpoly, bits)

    def inverse(self) -> "AlgebraicNumber":
        if self.is_zero:
            raise ZeroDivisionError("zero has no inverse")
        rev = tuple(reversed(self.minpoly))
        if rev[-1] < 0:
            rev = tuple(-c for c in rev)
        return AlgebraicNumber(rev, 1 / self.root)

    def to_dict(self) -> dict:
        from .report import ball

        return {"minpoly": [str(c) for c in self.minpoly], "degree": self.degree, "root": ball(self.root)}


# -- Mahler measure and heights ---------------------------------------------------


def _max_one(x: arb) -> tuple[arb, bool]:
    """Enclosure of ``max(1, x)`` for ``x >= 0`` and whether ``x`` straddles 1."""
    if x > 1:
        return x, False
    if x < 1:
        return arb(1), False
    hi = max(Fraction(1), arb_upper(x))
    return to_arb((1 + hi) / 2) + arb(0, to_arb((hi - 1) / 2).upper()), True


def mahler_measure(coeffs: Sequence[int], prec: int = DEFAULT_PREC) -> arb:
    """Certified ``M(P) = |lead| prod max(1, |root|)``.

    A root ball that straddles the unit circle triggers a precision increase;
    cyclotomic polynomials are recognized exactly (``M = 1``). If a root lies
    exactly on the circle the enclosure ``[1, hi]`` is used for its factor.
    """
    c = [int(x) for x in coeffs]
    p = fmpz_poly(c)
    lead = abs(int(p.leading_coefficient()))
    if p.degree() < 1:
        raise ValueError("need a non-constant polynomial")
    if lead == 1 and all(int(g.is_cyclotomic()) for g, _ in p.factor()[1]):
        return arb(1)
    bits = prec
    while True:
        with precision(bits):
            total = arb(lead)
            straddle = False
            for r in _roots(tuple(c), bits):
                f, s = _max_one(abs(r))
                straddle |= s
                total *= f
        if not straddle or bits >= MAX_PREC // 4:
            return total
        bits *= 2


def exact_mahler(a: AlgebraicNumber, prec: int = DEFAULT_PREC) -> int | None:
    """The Mahler measure as an integer when every conjugate lies on one side of the unit circle."""
    if a.is_rational:
        x = a.as_fraction()
        return max(abs(x.numerator), x.denominator)
    p = a.poly
    if int(p.is_cyclotomic()):
        return 1
    inside = outside = 0
    for r in a.conjugates(prec):
        m = abs(r)
        if m <= 1:
            inside += 1
        elif m >= 1:
            outside += 1
        else:
            return None
    if outside == 0:
        return a.minpoly[-1]
    if inside == 0:
        return abs(a.minpoly[0])
    return None


@dataclass(frozen=True)
class HeightMeasures:
    degree: int
    mahler: arb
    log_mahler: arb
    weil_h: arb

    def to_dict(self) -> dict:
        return {
            "deg": self.degree,
            "M": interval(self.mahler),
            "m": interval(self.log_mahler),
            "h": interval(self.weil_h),
        }


def height_measures(a: AlgebraicNumber, prec: int = DEFAULT_PREC) -> HeightMeasures:
    """``(M(a), m(a) = log M(a), h(a) = m(a) / deg(a))`` as certified enclosures."""
    with precision(prec):
        M = mahler_measure(a.minpoly, prec)
        m = M.log()
        if m.lower() < 0:
            m = _clip_nonneg(m)
        return HeightMeasures(a.degree, M, m, m / a.degree)


def _clip_nonneg(x: arb) -> arb:
    # M >= 1 always, so log M >= 0; drop the negative part of the ball.
    hi = max(Fraction(0), arb_upper(x))
    return to_arb(hi / 2) + arb(0, to_arb(hi / 2).upper())


def polynomial_height(p: IntPolynomial) -> arb:
    """``h(P) = log H(P)``."""
    return arb(p.height).log()


def polynomial_log_length(p: IntPolynomial) -> arb:
    """``l(P) = log L(P)``."""
    return arb(p.length).log()


# -- the inequalities -------------------------------------------------------------


def _resolve(step, exact: bool | None, note: str) -> None:
    if step.status == UNDETERMINED and exact is not None:
        step.status = HOLDS if exact else FAILS
        step.note = (step.note + "; " if step.note else "") + note


def liouville_check(a: AlgebraicNumber, prec: int = DEFAULT_PREC) -> BoundReport:
    """``log |a| >= -deg(a) h(a)``, reported as ``-m(a) <= log |a|``.

    When the balls overlap (equality cases such as ``a = 1/3``) the inequality
    is settled by the factorization
    ``|a| M(a) = |c_0| max(1, |a|) prod_{b != a} max(1, 1/|b|) >= 1``.
    """
    if a.is_zero:
        raise ValueError("Liouville's inequality needs a nonzero algebraic number")
    report = BoundReport("liouville")
    with precision(prec):
        hm = height_measures(a, prec)
        log_abs = abs(a.value(prec)).log()
        step = report.add("liouville", -hm.log_mahler, log_abs)
        _resolve(step, abs(a.minpoly[0]) >= 1, "equality case settled by |c0| >= 1")
        report.slack = log_abs + hm.log_mahler
    return report


def eval_height_bound(
    p: IntPolynomial, args: Sequence[AlgebraicNumber], value: AlgebraicNumber, prec: int = DEFAULT_PREC
) -> BoundReport:
    """``h(P(a_1..a_n)) <= log L(P) + sum deg_i(P) h(a_i)`` for a supplied exact value."""
    if p.is_zero:
        raise PreconditionError("P must be nonzero")
    if len(args) != p.arity:
        raise ValueError("wrong number of arguments")
    with precision(prec):
        numeric = p.evaluate([a.value(prec) for a in args])
        if not numeric.overlaps(value.value(prec)):
            raise InconsistentWitnessError("the supplied value does not match P(args)")
        lhs = height_measures(value, prec).weil_h
        rhs = polynomial_log_length(p)
        for i, a in enumerate(args):
            rhs += p.degree(i) * height_measures(a, prec).weil_h
        report = BoundReport("evaluation_height")
        step = report.add("evaluation_height", lhs, rhs)
        _resolve(step, _exact_eval_compare(p, args, value), "decided exactly in integers")
        if step.status == UNDETERMINED:
            D = reduce(math.lcm, [value.degree] + [a.degree for a in args])
            terms = [(p.length, D), (value, -(D // value.degree))]
            terms += [(a, p.degree(i) * D // a.degree) for i, a in enumerate(args)]
            if certify_log_zero(terms):
                _resolve(step, True, "equality certified by root separation")
    return report


def _exact_eval_compare(p: IntPolynomial, args, value) -> bool | None:
    # h(v) <= log L + sum d_i h(a_i)  <=>  M(v)^(D/dv) <= L^D prod M(a_i)^(d_i D/deg a_i)
    # arguments P does not depend on contribute nothing
    used = [(i, a) for i, a in enumerate(args) if p.degree(i) > 0]
    ms = [exact_mahler(a) for _, a in used]
    mv = exact_mahler(value)
    if mv is None or any(m is None for m in ms):
        return None
    D = reduce(math.lcm, [value.degree] + [a.degree for _, a in used])
    rhs = p.length**D
    for (i, a), m in zip(used, ms):
        rhs *= m ** (p.degree(i) * D // a.degree)
    return mv ** (D // value.degree) <= rhs


def _mahler_as_number(a: AlgebraicNumber) -> tuple[int, Fraction] | None:
    """Bounds ``(degree, height)`` for ``M(a)`` viewed as an algebraic number.

    With ``S`` the ``k`` conjugates outside the unit circle, ``M(a) = |lead prod_S r|``.
    Its conjugates are among the ``C(d, k)`` products ``lead prod_T r`` over
    ``k``-subsets, each of modulus at most ``M(a)``, and ``lead^(k-1) M(a)`` is an
    algebraic integer, so ``h(M(a)) <= (k - 1) log lead + log M(a)``.
    ``None`` when some conjugate cannot be placed strictly off the circle.
    """
    if a.is_rational:
        return 1, Fraction(0)  # integer Mahler measure, handled by the caller
    lead = a.minpoly[-1]
    outside = 0
    for r in a.conjugates(DEFAULT_PREC):
        m = abs(r)
        if m > 1:
            outside += 1
        elif not m < 1:
            return None
    if outside == 0:
        return 1, Fraction(0)
    h = (outside - 1) * math.log(lead) + float(arb_upper(mahler_measure(a.minpoly)))
    return math.comb(a.degree, outside), Fraction(h) * Fraction(1001, 1000) + 1


def certify_log_zero(terms: Sequence[tuple[AlgebraicNumber | int, int]]) -> bool:
    """Prove ``sum e log M(x) = 0`` exactly for integers or algebraic numbers ``x``.

    ``X = prod M(x)^e`` is algebraic of degree at most ``D`` and height at most
    ``H``. If ``X != 1`` then Liouville's inequality gives
    ``log |X - 1| >= -D (H + log 2)``, so a tighter enclosure forces ``X = 1``.
    Returns ``False`` when no proof is found within ``MAX_PREC``.
    """
    D, H = 1, Fraction(0)
    for x, e in terms:
        if e == 0:
            continue
        if isinstance(x, int):
            H += abs(e) * Fraction(math.log(x)) * Fraction(1001, 1000)
            continue
        data = _mahler_as_number(x)
        if data is None:
            return False
        if data[0] == 1:
            m = exact_mahler(x)
            if m is None:
                return False
            H += abs(e) * Fraction(math.log(m)) * Fraction(1001, 1000)
            continue
        D *= data[0]
        H += abs(e) * data[1]
    gap = D * (H + 1)  # log 2 < 1, in nats
    bits = int(gap / Fraction(math.log(2))) + 64
    if bits > MAX_PREC:
        return False
    with precision(bits):
        total = arb(0)
        for x, e in terms:
            if e == 0:
                continue
            m = arb(x) if isinstance(x, int) else mahler_measure(x.minpoly, bits)
            total += e * m.log()
        t = arb_upper(abs(total))
        if t == 0:
            return True
        dev = to_arb(t).exp() - 1  # |X - 1| <= exp|log X| - 1
        return bool(dev.log() < -to_arb(gap))


def _mpoly_ctx(names: Sequence[str]):
    return fmpz_mpoly_ctx.get(tuple(names), "lex")


def _to_mpoly(p: IntPolynomial, ctx):
    return ctx.from_dict({k: c for k, c in p.terms})


def _univariate_mpoly(coeffs: Sequence[int], var: int, ctx):
    n = ctx.nvars()
    d = {}
    for e, c in enumerate(coeffs):
        if c:
            k = [0] * n
            k[var] = e
            d[tuple(k)] = int(c)
    return ctx.from_dict(d)


def eliminate(p: IntPolynomial, args: Sequence[AlgebraicNumber]) -> fmpz_poly:
    """``Res`` over every ``x_i`` of ``z - P(x)`` against the minimal polynomial of ``args[i]``.

    The result is an integer polynomial in ``z`` vanishing at ``P(args)``.
    """
    names = [f"x{i}" for i in range(p.arity)] + ["z"]
    ctx = _mpoly_ctx(names)
    n = len(names)
    z = ctx.gens()[-1]
    lifted = ctx.from_dict({k + (0,): c for k, c in p.terms}) if p.terms else ctx.from_dict({})
    r = z - lifted
    for i, a in enumerate(args):
        r = r.resultant(_univariate_mpoly(a.minpoly, i, ctx), names[i])
    coeffs = [0] * (r.total_degree() + 1 if not r.is_zero() else 1)
    for k, c in r.to_dict().items():
        if any(k[:-1]):
            raise AssertionError("elimination left a variable behind")
        coeffs[k[n - 1]] = int(c)
    return fmpz_poly(coeffs)


def select_root(poly: fmpz_poly, target, prec: int = DEFAULT_PREC) -> AlgebraicNumber:
    """The algebraic number among the roots of ``poly`` that ``target(bits)`` encloses.

    ``target`` maps a working precision to a ball; precision is doubled until
    exactly one root of one irreducible factor overlaps it.
    """
    _, factors = poly.factor()
    bits = prec
    while bits <= MAX_PREC:
        with precision(bits):
            t = target(bits)
            hits = []
            for g, _ in factors:
                mp = _check_minpoly([int(c) for c in g.coeffs()])
                for r in _roots(mp, bits):
                    if r.overlaps(t):
                        hits.append((mp, r))
        if len(hits) == 1:
            return AlgebraicNumber(*hits[0])
        if not hits:
            raise InconsistentWitnessError("no root of the eliminant matches the target")
        bits *= 2
    raise PrecisionError("could not isolate the target root")


def value_of(p: IntPolynomial, args: Sequence[AlgebraicNumber], prec: int = DEFAULT_PREC) -> AlgebraicNumber:
    """Exact witness for ``P(args)``: its minimal polynomial and an isolating ball."""
    elim = eliminate(p, args)
    if elim.is_zero():
        raise AssertionError("eliminant vanished identically")
    return select_root(elim, lambda bits: p.evaluate([a.value(bits) for a in args]), prec)


def algebraic_sum(a: AlgebraicNumber, b: AlgebraicNumber) -> AlgebraicNumber:
    return value_of(IntPolynomial.from_dict({(1, 0): 1, (0, 1): 1}), [a, b])


def algebraic_difference(a: AlgebraicNumber, b: AlgebraicNumber) -> AlgebraicNumber:
    return value_of(IntPolynomial.from_dict({(1, 0): 1, (0, 1): -1}), [a, b])


def algebraic_product(a: AlgebraicNumber, b: AlgebraicNumber) -> AlgebraicNumber:
    return value_of(IntPolynomial.from_dict({(1, 1): 1}), [a, b])


def _specialize_x(p: IntPolynomial, a: AlgebraicNumber) -> list[int]:
    """Indices ``k`` whose coefficient of ``Y^k`` in ``P(a, Y)`` is nonzero, decided exactly."""
    by_k: dict[int, dict[int, int]] = {}
    for (i, k), c in p.terms:
        by_k.setdefault(k, {})[i] = c
    nonzero = []
    for k, cs in by_k.items():
        g = fmpz_poly([cs.get(i, 0) for i in range(max(cs) + 1)])
        # g(a) = 0 exactly iff the minimal polynomial of a divides g
        if g.is_zero() or (g.degree() >= a.degree and (g % a.poly).is_zero()):
            continue
        nonzero.append(k)
    return sorted(nonzero)


def relation_holds(p: IntPolynomial, a: AlgebraicNumber, b: AlgebraicNumber, prec: int = DEFAULT_PREC) -> bool:
    """``P(a, b) = 0``: the ball contains 0 and ``minpoly(b)`` divides ``Res_X(minpoly(a), P)``."""
    with precision(prec):
        if not p.evaluate([a.value(prec), b.value(prec)]).contains(0):
            return False
    ctx = _mpoly_ctx(["x", "y"])
    res = _to_mpoly(p, ctx).resultant(_univariate_mpoly(a.minpoly, 0, ctx), "x")
    coeffs = [0] * (max((k[1] for k in res.to_dict()), default=0) + 1)
    for k, c in res.to_dict().items():
        coeffs[k[1]] = int(c)
    r = fmpz_poly(coeffs)
    if r.is_zero():
        return True
    return r.degree() >= b.degree and (r % b.poly).is_zero()


def root_height_bound(p: IntPolynomial, a: AlgebraicNumber, b: AlgebraicNumber, prec: int = DEFAULT_PREC) -> BoundReport:
    """``m(b) <= deg(a) (log L(P) + deg_x(P) h(a))`` for ``P(a, b) = 0``."""
    if p.arity != 2:
        raise ValueError("P must be bivariate")
    if not any(k > 0 for k in _specialize_x(p, a)):
        raise PreconditionError("P(a, Y) is a constant polynomial")
    if not relation_holds(p, a, b, prec):
        raise PreconditionError("P(a, b) = 0 could not be certified")
    with precision(prec):
        lhs = height_measures(b, prec).log_mahler
        rhs = a.degree * (polynomial_log_length(p) + p.degree(0) * height_measures(a, prec).weil_h)
        report = BoundReport("root_height")
        step = report.add("root_height", lhs, rhs)
        ma, mb = exact_mahler(a), exact_mahler(b)
        exact = None if ma is None or mb is None else mb <= p.length ** a.degree * ma ** p.degree(0)
        _resolve(step, exact, "decided exactly in integers")
        if step.status == UNDETERMINED:
            terms = [(p.length, a.degree), (a, p.degree(0)), (b, -1)]
            if certify_log_zero(terms):
                _resolve(step, True, "equality certified by root separation")
    return report


def isogeny_height_check(
    j1: AlgebraicNumber, jn: AlgebraicNumber, n: int, c2, prec: int = DEFAULT_PREC
) -> BoundReport:
    """``h(jn) <= 2 h(j1) + 6 log(1 + n) + c2``, with the minimal admissible ``c2`` reported.

    For prime ``n`` with a computable modular polynomial the pair is also
    checked to satisfy ``Phi_n(j1, jn) = 0``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    report = BoundReport("isogeny_height")
    with precision(prec):
        h1 = height_measures(j1, prec).weil_h
        hn = height_measures(jn, prec).weil_h
        c2b = to_arb(Fraction(c2))
        base = 2 * h1 + 6 * arb(1 + n).log()
        report.add("isogeny_height", hn, base + c2b)
        report.minimal_c2 = hn - base
    report.modular_relation = _isogeny_relation(j1, jn, n, prec)
    return report


def _isogeny_relation(j1, jn, n, prec) -> bool | None:
    from .modpoly import SUPPORTED_PRIMES, modular_polynomial

    if n == 1:
        return j1.minpoly == jn.minpoly and j1.root.overlaps(jn.root)
    if n not in SUPPORTED_PRIMES:
        return None
    phi = modular_polynomial(n)
    if j1.is_rational and jn.is_rational:
        return phi.as_int_polynomial().evaluate_exact([j1.as_fraction(), jn.as_fraction()]) == 0
    return relation_holds(phi.as_int_polynomial(), j1, jn, prec)


def report_dict(report: BoundReport) -> dict:
    """JSON form of a height report, including its extra fields."""
    d = report.to_dict()
    for key in ("slack", "minimal_c2"):
        if hasattr(report, key):
            d[key] = interval(getattr(report, key))
    if hasattr(report, "modular_relation"):
        d["modular_relation"] = report.modular_relation
    return d


def parse_minpoly(text: str) -> list[int]:
    """``"c0,c1,..."`` into integers."""
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t != ""]
    except ValueError as exc:
        raise InvalidMinpolyError(f"cannot parse {text!r}") from exc


def random_algebraic(rng, max_degree: int = 6, max_coeff: int = 9) -> AlgebraicNumber:
    """A nonzero algebraic number of degree ``<= max_degree`` from a random integer polynomial."""
    while True:
        d = int(rng.integers(1, max_degree + 1))
        c = [int(x) for x in rng.integers(-max_coeff, max_coeff + 1, size=d + 1)]
        if c[-1] == 0 or c[0] == 0:
            continue
        _, factors = fmpz_poly(c).factor()
        g = [int(x) for x in factors[int(rng.integers(0, len(factors)))][0].coeffs()]
        if len(g) < 2 or g[0] == 0:
            continue
        if g[-1] < 0:
            g = [-x for x in g]
        return AlgebraicNumber.from_minpoly(g, index=int(rng.integers(0, len(g) - 1)))
