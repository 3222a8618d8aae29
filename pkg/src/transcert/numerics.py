"""Certified complex ball arithmetic and series evaluation with tail majorants.

Balls are Arb balls (``flint.acb`` / ``flint.arb``); every operation rounds
outward. Working precision is set per call through :func:`precision`.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from flint import acb, acb_poly, acb_series, arb, ctx, fmpq, fmpz

from .qseries import IntSeries

Ball = acb
Real = Union[int, Fraction, arb]

DEFAULT_PREC = 128
MAX_PREC = 4096


class CertificationError(ArithmeticError):
    """An enclosure could not decide the question asked of it."""


class PrecisionError(CertificationError):
    """Ball radii blew up; retry at a higher working precision."""


class CannotCertifyError(CertificationError):
    pass


class DivergenceError(ValueError):
    pass


@contextmanager
def precision(bits: int | None) -> Iterator[int]:
    """Temporarily set the working precision (in bits) of all ball arithmetic."""
    old = ctx.prec
    ctx.prec = max(int(bits or DEFAULT_PREC), 16)
    try:
        yield ctx.prec
    finally:
        ctx.prec = old


def to_arb(x: Real | str | float) -> arb:
    if isinstance(x, arb):
        return x
    if isinstance(x, Fraction):
        return arb(fmpq(x.numerator, x.denominator))
    if isinstance(x, int):
        return arb(fmpz(x))
    if isinstance(x, str):
        return to_arb(Fraction(x))
    if isinstance(x, float):
        return arb(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a real ball")


def to_ball(x) -> acb:
    if isinstance(x, acb):
        return x
    if isinstance(x, complex):
        return acb(x.real, x.imag)
    if isinstance(x, tuple):
        return acb(to_arb(x[0]), to_arb(x[1]))
    return acb(to_arb(x))


def arb_upper(x: arb) -> Fraction:
    """Exact rational upper bound of a real ball."""
    if not x.is_finite():
        raise PrecisionError("ball is not finite")
    m, e = x.mid().man_exp()
    rm, re_ = x.rad().man_exp()
    return _dyadic(m, e) + _dyadic(rm, re_)


def arb_lower(x: arb) -> Fraction:
    """Exact rational lower bound of a real ball."""
    if not x.is_finite():
        raise PrecisionError("ball is not finite")
    m, e = x.mid().man_exp()
    rm, re_ = x.rad().man_exp()
    return _dyadic(m, e) - _dyadic(rm, re_)


def _dyadic(m, e) -> Fraction:
    m, e = int(m), int(e)
    return Fraction(m * 2**e) if e >= 0 else Fraction(m, 2**-e)


def abs_upper(z: acb) -> arb:
    """An exact (zero-radius) real bound ``>= |z|`` for every point of ``z``."""
    return arb(z.abs_upper())


def is_ball_finite(z) -> bool:
    if isinstance(z, acb):
        return z.real.is_finite() and z.imag.is_finite()
    return z.is_finite()


def decide_le(lhs: arb, rhs: arb) -> str:
    """``"holds"`` if ``lhs <= rhs`` everywhere, ``"fails"`` if ``lhs > rhs`` everywhere."""
    if lhs <= rhs:
        return "holds"
    if lhs > rhs:
        return "fails"
    return "undetermined"


def schwarz_tail_majorant(M: int, K: int, r: Real) -> arb:
    """Upper bound ``(M+1)^K K! / (1-r)^(K+1)`` for ``sum_{n>=0} (M+n)^K r^n``."""
    r = to_arb(r)
    if not r < 1:
        raise DivergenceError("the series diverges unless r < 1")
    if not r >= 0:
        raise ValueError("r must be non-negative")
    return arb(M + 1) ** K * arb.fac_ui(K) / (1 - r) ** (K + 1)


def power_tail_majorant(K: int, T: int, r: Real) -> arb:
    """Upper bound for ``sum_{k>=T} k^K r^k``.

    Two closed forms are used and the smaller taken: the Schwarz-type bound
    after the shift ``k = T + n``, and, once consecutive terms decrease by at
    least the ratio ``rho = (1 + 1/T)^K r < 1``, the geometric bound
    ``T^K r^T / (1 - rho)``.
    """
    r = to_arb(r)
    if not r < 1:
        raise DivergenceError("the series diverges unless r < 1")
    if T <= 0:
        return schwarz_tail_majorant(0, K, r)
    best = r**T * schwarz_tail_majorant(T, K, r)
    rho = (1 + arb(1) / T) ** K * r
    if rho < 1:
        geometric = arb(T) ** K * r**T / (1 - rho)
        if geometric.upper() < best.upper():
            best = geometric
    return best


@dataclass(frozen=True)
class HeckeTail:
    """Coefficient majorant ``|c(k)| <= scale * c1^N * k^(12N)`` for dropped indices."""

    N: int
    c1: Fraction
    scale: int = 1

    def bound(self, trunc: int, r: arb) -> arb:
        return self.scale * to_arb(self.c1) ** self.N * power_tail_majorant(12 * self.N, trunc, r)


def error_ball(rad: arb) -> acb:
    """Complex ball centred at 0 containing the disk of radius ``rad``."""
    e = arb(0, arb(rad.upper()))
    return acb(e, e)


def eval_polynomial(coeffs, z: acb) -> acb:
    if not coeffs:
        return acb(0)
    return acb_poly([acb(fmpz(c)) for c in coeffs])(z)


def eval_series_certified(s: IntSeries, z, tail: HeckeTail | None = None) -> acb:
    """Enclosure of the series at ``z``.

    With ``tail=None`` only the stored (truncated) polynomial is evaluated.
    With a :class:`HeckeTail` the result encloses the full infinite series,
    assuming its coefficients obey the tail's majorant beyond ``s.trunc``.
    """
    z = to_ball(z)
    r = abs_upper(z)
    if tail is not None and not r < 1:
        raise CannotCertifyError("z ball reaches the unit circle; tail cannot be bounded")
    if s.is_zero:
        value = acb(0)
    else:
        value = eval_polynomial(s.coeffs, z)
        if s.valuation:
            value = value * z**s.valuation
    if tail is not None:
        value = value + error_ball(tail.bound(s.trunc, r))
    if not is_ball_finite(value):
        raise PrecisionError("series enclosure is not finite")
    return value


def _terms_for(r: arb) -> int:
    # enough factors that r^(n0+1) is below the working precision
    lo = arb_upper(-r.log()) if r > 0 else None
    if lo is None or lo == 0:
        raise CannotCertifyError("nome must satisfy 0 < |z| < 1")
    return min(int(ctx.prec * 0.7 / float(lo)) + 2, 100_000)


def _base(z):
    """``(z, centre ball)``; ``z`` may be a first-order ``acb_series``."""
    if isinstance(z, acb_series):
        return z, z[0]
    z = to_ball(z)
    return z, z


def _with_tail(z, value, tail0: arb, tail1: arb | None):
    """Add ``tail0`` to the value and, for series input, ``tail1`` to the derivative."""
    if isinstance(z, acb_series):
        return value + acb_series([error_ball(tail0), error_ball(tail1)], prec=2)
    return value + error_ball(tail0)


def euler_product(z, power: int = 1):
    """Enclosure of ``prod_{n>=1} (1 - z^n)^power`` for a ball ``|z| < 1``.

    ``z`` may also be an ``acb_series`` of order 2, in which case the
    derivative is enclosed as well (tail included).
    """
    z, c = _base(z)
    r = abs_upper(c)
    if not r < 1:
        raise CannotCertifyError("z ball reaches the unit circle")
    if r == 0:
        return acb(1) if z is c else acb_series([1], prec=2)
    n0 = _terms_for(r)
    # Re(1 - z^n) > 0 on the disk, so principal logs add up to a log of the
    # product; one exponential avoids the radius growth of repeated powering.
    s = acb(0)
    zn = acb(1)
    for _ in range(n0):
        zn = zn * z
        s = s + (1 - zn).log()
    # |sum_{n>n0} log(1 - z^n)| <= r^(n0+1) / (1 - r)^2, and the derivative
    # of the tail is at most sum_{n>n0} n r^(n-1) / (1 - r).
    tail0 = r ** (n0 + 1) / (1 - r) ** 2
    tail1 = power_tail_majorant(1, n0 + 1, r) / (r * (1 - r))
    return (power * _with_tail(z, s, tail0, tail1)).exp()


def e4_at(z):
    """Enclosure of ``E4 = 1 + 240 sum n^3 z^n / (1 - z^n)``; accepts order-2 series."""
    z, c = _base(z)
    r = abs_upper(c)
    if not r < 1:
        raise CannotCertifyError("z ball reaches the unit circle")
    n0 = _terms_for(r) if r > 0 else 1
    total = acb(0)
    zn = acb(1)
    for n in range(1, n0 + 1):
        zn = zn * z
        total = total + n**3 * zn / (1 - zn)
    tail0 = power_tail_majorant(3, n0 + 1, r) / (1 - r)
    tail1 = power_tail_majorant(4, n0 + 1, r) / (r * (1 - r) ** 2) if r > 0 else arb(0)
    return 1 + 240 * _with_tail(z, total, tail0, tail1)


def delta_at(z):
    """``Delta = z prod (1 - z^n)^24`` as a function of the nome."""
    z, _ = _base(z)
    return z * euler_product(z, 24)


def j_at(z) -> acb:
    """``J = E4^3 / Delta`` as a function of the nome (``z != 0``)."""
    z, _ = _base(z)
    return e4_at(z) ** 3 / delta_at(z)


def nome(tau) -> acb:
    """``exp(2 pi i tau)``."""
    return (2 * arb.pi() * acb(0, 1) * to_ball(tau)).exp()


def q_to_tau(z: acb) -> acb:
    """A ball of ``tau`` with ``exp(2 pi i tau) = z``, avoiding the log branch cut."""
    mid = z.mid()
    phi = mid.arg() if not mid.is_zero() else arb(0)
    phi = arb(phi.mid())
    rot = acb(phi.cos(), -phi.sin())
    return ((z * rot).log() + acb(0, phi)) / (2 * arb.pi() * acb(0, 1))


def round_up(x: Fraction, digits: int = 12) -> Fraction:
    """Smallest decimal with ``digits`` significant digits that is ``>= x``."""
    if x <= 0:
        return Fraction(math.floor(x * 10**digits), 10**digits)
    e = math.floor(math.log10(x)) - digits + 1
    scale = Fraction(10) ** e
    return math.ceil(x / scale) * scale


def decimal_string(x: Fraction) -> str:
    """Exact decimal string of a terminating fraction."""
    k = 0
    while (x * 10**k).denominator != 1:
        k += 1
        if k > 400:
            raise ValueError("not a terminating decimal")
    n = abs(x.numerator * 10**k // x.denominator)
    sign = "-" if x < 0 else ""
    if k == 0:
        return f"{sign}{n}"
    s = str(n).rjust(k + 1, "0")
    return f"{sign}{s[:-k]}.{s[-k:]}"
