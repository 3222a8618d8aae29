"""Cusp forms ``Delta^(2N) J^l`` and the explicit Hecke coefficient bound.

For a cusp form ``f`` of weight ``w`` put ``C(f) = e^(2 pi) sup_H Im(tau)^(w/2) |f(tau)|``;
then ``|f(k)| <= C(f) k^(w/2)``. The constant ``C1 = max(1, C(Delta^2), C(Delta^2 J))``
controls every ``Delta^(2N) J^l`` with ``l <= N`` through ``C(gh) <= C(g) C(h)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from flint import acb, arb, fmpq

from .numerics import (
    DEFAULT_PREC,
    PrecisionError,
    arb_lower,
    arb_upper,
    delta_at,
    e4_at,
    nome,
    decimal_string,
    precision,
    round_up,
)
from .qseries import IntSeries, delta_power, e4_expansion, j_expansion

Y_CUTOFF = 2
# Fundamental-domain search rectangle for Re(tau) >= 0 (symmetry covers the
# other half); it contains every point of the domain with Im(tau) <= Y_CUTOFF.
_X_RANGE = (Fraction(0), Fraction(1, 2))
_Y_RANGE = (Fraction(3, 4), Fraction(Y_CUTOFF))
_BASE_SIDE = Fraction(1, 16)
_PRUNE_SAMPLES = 48


class PoleNotCancelledError(ValueError):
    pass


@dataclass(frozen=True)
class CuspCoeffTable:
    N: int
    l: int
    coeffs: IntSeries

    @property
    def weight(self) -> int:
        return 24 * self.N

    @property
    def K(self) -> int:
        return self.coeffs.trunc - 1

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k]


@lru_cache(maxsize=256)
def cusp_coeffs(N: int, l: int, K: int) -> CuspCoeffTable:
    """Exact coefficients of ``Delta^(2N) J^l`` for ``q^k``, ``k <= K``.

    Computed as ``Delta^(2N-l) E4^(3l)`` since ``Delta J = E4^3``.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if l < 0:
        raise ValueError("l must be non-negative")
    if l > N:
        raise PoleNotCancelledError(f"l={l} > N={N}: the pole of J^l is not cancelled")
    trunc = K + 1
    series = delta_power(2 * N - l, trunc)
    if l:
        series = (series * e4_expansion(trunc) ** (3 * l)).truncate(trunc)
    return CuspCoeffTable(N, l, series)


def cusp_coeffs_via_j(N: int, l: int, K: int) -> IntSeries:
    """Same series as :func:`cusp_coeffs`, through ``Delta^(2N)`` times ``J^l``."""
    trunc = K + 1
    d = delta_power(2 * N, trunc + l)
    if l == 0:
        return d.truncate(trunc)
    return (d * j_expansion(trunc) ** l).truncate(trunc)


# -- the constant C1 ----------------------------------------------------------


@dataclass(frozen=True)
class HeckeConstant:
    c_delta2: Fraction
    c_delta2j: Fraction
    grid_depth: int
    precision_bits: int

    @property
    def c1(self) -> Fraction:
        return max(Fraction(1), self.c_delta2, self.c_delta2j)

    def product_bound(self, N: int, l: int) -> Fraction:
        """Certified ``C(Delta^(2(N-l)) (Delta^2 J)^l) <= C(Delta^2)^(N-l) C(Delta^2 J)^l``."""
        return self.c_delta2 ** (N - l) * self.c_delta2j**l


def _phi_delta2(tau: acb) -> arb:
    q = nome(tau)
    return tau.imag**12 * abs(delta_at(q)) ** 2


def _phi_delta2j(tau: acb) -> arb:
    # Delta^2 J = Delta E4^3 avoids dividing by Delta
    q = nome(tau)
    return tau.imag**12 * abs(delta_at(q) * e4_at(q) ** 3)


def _box(x0: Fraction, y0: Fraction, side: Fraction) -> acb:
    h = side / 2
    cx, cy, r = x0 + h, y0 + h, h
    return acb(arb(_q(cx), _q(r)), arb(_q(cy), _q(r)))


def _q(x: Fraction) -> arb:
    return arb(fmpq(x.numerator, x.denominator))


def _box_upper(phi, x0, y0, side) -> Fraction | float:
    v = phi(_box(x0, y0, side))
    return arb_upper(v) if v.is_finite() else math.inf


def _refine(phi, x0, y0, side, depth, prune_below) -> Fraction | float:
    own = _box_upper(phi, x0, y0, side)
    if depth == 0 or own <= prune_below:
        if own == math.inf:
            raise PrecisionError("box enclosure is not finite; increase grid_depth or precision")
        return own
    h = side / 2
    children = max(
        _refine(phi, x0 + dx, y0 + dy, h, depth - 1, prune_below)
        for dx in (0, h)
        for dy in (0, h)
    )
    return min(own, children)


def _sample_lower(phi) -> Fraction:
    # Depth-independent lower bound for the supremum from point evaluations;
    # keeps pruning identical across depths so refinement is monotone.
    (xa, xb), (ya, yb) = _X_RANGE, _Y_RANGE
    best = Fraction(0)
    for i in range(_PRUNE_SAMPLES + 1):
        for j in range(_PRUNE_SAMPLES + 1):
            x = xa + (xb - xa) * i / _PRUNE_SAMPLES
            y = ya + (yb - ya) * j / _PRUNE_SAMPLES
            v = phi(acb(_q(x), _q(y)))
            best = max(best, arb_lower(v))
    return best


def _grid_sup(phi, depth: int) -> Fraction:
    prune = _sample_lower(phi)
    (xa, xb), (ya, yb) = _X_RANGE, _Y_RANGE
    nx = int((xb - xa) / _BASE_SIDE)
    ny = int((yb - ya) / _BASE_SIDE)
    return max(
        _refine(phi, xa + i * _BASE_SIDE, ya + j * _BASE_SIDE, _BASE_SIDE, depth, prune)
        for i in range(nx)
        for j in range(ny)
    )


def _product_majorant(x: arb, power: int, terms: int = 8) -> arb:
    # prod_{n>=1} (1 + x^n)^power <= prod_{n<=terms} (1+x^n)^power * exp(power x^(terms+1)/(1-x))
    p = arb(1)
    for n in range(1, terms + 1):
        p *= (1 + x**n) ** power
    return p * (power * x ** (terms + 1) / (1 - x)).exp()


def _tail_sup_delta2() -> Fraction:
    # For Im(tau) >= 2: y^12 |Delta|^2 <= y^12 x^2 prod(1+x^n)^48 with x = e^(-2 pi y),
    # which decreases in y there, so its value at y = 2 bounds the tail.
    y = arb(Y_CUTOFF)
    x = (-2 * arb.pi() * y).exp()
    return arb_upper(y**12 * x**2 * _product_majorant(x, 48))


def _tail_sup_delta2j() -> Fraction:
    # Delta^2 J = Delta E4^3 with |E4| <= 1 + 240 x (1 + 4x + x^2) / (1 - x)^5;
    # y^12 e^(-2 pi y) decreases for y >= 12 / (2 pi).
    y = arb(Y_CUTOFF)
    x = (-2 * arb.pi() * y).exp()
    e4 = 1 + 240 * x * (1 + 4 * x + x * x) / (1 - x) ** 5
    return arb_upper(y**12 * x * _product_majorant(x, 24) * e4**3)


def estimate_hecke_constant(grid_depth: int, prec: int = DEFAULT_PREC) -> HeckeConstant:
    """Certified upper bounds for ``C(Delta^2)`` and ``C(Delta^2 J)``."""
    if grid_depth < 0:
        raise ValueError("grid_depth must be non-negative")
    with precision(prec):
        e2pi = arb_upper((2 * arb.pi()).exp())
        out = []
        for phi, tail in ((_phi_delta2, _tail_sup_delta2), (_phi_delta2j, _tail_sup_delta2j)):
            sup = max(_grid_sup(phi, grid_depth), tail())
            out.append(round_up(e2pi * sup))
    return HeckeConstant(out[0], out[1], grid_depth, prec)


def hecke_constant_to_dict(h: HeckeConstant) -> dict:
    return {
        "c_delta2": decimal_string(h.c_delta2),
        "c_delta2j": decimal_string(h.c_delta2j),
        "c1": decimal_string(h.c1),
        "grid_depth": h.grid_depth,
        "precision_bits": h.precision_bits,
        "y_cutoff": Y_CUTOFF,
    }


def hecke_constant_from_dict(d: dict) -> HeckeConstant:
    h = HeckeConstant(
        Fraction(d["c_delta2"]), Fraction(d["c_delta2j"]), int(d["grid_depth"]), int(d["precision_bits"])
    )
    if "c1" in d and Fraction(d["c1"]) != h.c1:
        raise ValueError("stored c1 disagrees with max(1, c_delta2, c_delta2j)")
    return h


@lru_cache(maxsize=1)
def stored_hecke_constant() -> HeckeConstant:
    """The C1 computed once and shipped with the package."""
    text = resources.files("transcert").joinpath("data/hecke_constant.json").read_text()
    return hecke_constant_from_dict(json.loads(text))


# -- certification --------------------------------------------------------------


@dataclass
class HeckeReport:
    N: int
    l: int
    K: int
    c1: Fraction
    max_ratio: float
    argmax_k: int | None
    violations: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "l": self.l,
            "K": self.K,
            "c1": decimal_string(self.c1),
            "max_ratio": self.max_ratio,
            "argmax_k": self.argmax_k,
            "violations": self.violations,
            "pass": self.passed,
        }


def certify_hecke(table: CuspCoeffTable, c1: Fraction) -> HeckeReport:
    """Check ``|c_{N,l}(k)| <= c1^N k^(12N)`` exactly for every stored ``k >= 1``."""
    N = table.N
    c1 = Fraction(c1)
    num, den = c1.numerator**N, c1.denominator**N
    best, arg, bad = Fraction(0), None, []
    for k, c in table.coeffs.items():
        if k < 1:
            bad.append(k)  # a cusp form has no constant or polar terms
            continue
        bound = num * k ** (12 * N)
        ratio = Fraction(abs(c) * den, bound)
        if ratio > 1:
            bad.append(k)
        if ratio > best:
            best, arg = ratio, k
    return HeckeReport(N, table.l, table.K, c1, float(best), arg, bad)
