"""Inequality records shared by the certification modules, and their JSON form."""

from __future__ import annotations

import decimal
from dataclasses import dataclass, field
from fractions import Fraction

from flint import acb, arb

from .numerics import arb_lower, arb_upper, decide_le

HOLDS = "holds"
FAILS = "fails"
UNDETERMINED = "undetermined"


def interval(x: arb) -> dict:
    """``{lo, hi}`` with 17 significant digits, rounded outward."""
    if not x.is_finite():
        return {"lo": "-inf", "hi": "inf"}
    return {"lo": _fmt(arb_lower(x), down=True), "hi": _fmt(arb_upper(x), down=False)}


def ball(z) -> dict:
    """``{mid, rad}`` for a real ball, or ``{re, im}`` of those for a complex one."""
    if isinstance(z, acb):
        return {"re": ball(z.real), "im": ball(z.imag)}
    if not z.is_finite():
        return {"mid": "nan", "rad": "inf"}
    lo, hi = arb_lower(z), arb_upper(z)
    m = (lo + hi) / 2
    r = (hi - lo) / 2
    return {"mid": _fmt(m, down=None), "rad": _fmt(r + abs(m) * Fraction(1, 10**16), down=False)}


def _fmt(x: Fraction, down: bool | None) -> str:
    """17-significant-digit decimal; rounded toward -inf/+inf or to nearest."""
    if x == 0:
        return "0"
    ctx = decimal.Context(prec=17)
    if down is True:
        ctx.rounding = decimal.ROUND_FLOOR
    elif down is False:
        ctx.rounding = decimal.ROUND_CEILING
    else:
        ctx.rounding = decimal.ROUND_HALF_EVEN
    num = decimal.Decimal(x.numerator)
    den = decimal.Decimal(x.denominator)
    return format(ctx.divide(num, den), "G")


@dataclass
class Inequality:
    """One checked inequality ``lhs <= rhs`` with certified enclosures."""

    ident: str
    lhs: arb
    rhs: arb
    note: str = ""
    status: str = field(init=False)

    def __post_init__(self) -> None:
        if not (self.lhs.is_finite() and self.rhs.is_finite()):
            self.status = UNDETERMINED
        else:
            self.status = decide_le(self.lhs, self.rhs)

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    def to_dict(self) -> dict:
        d = {"id": self.ident, "lhs": interval(self.lhs), "rhs": interval(self.rhs), "status": self.status}
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class BoundReport:
    title: str
    steps: list[Inequality] = field(default_factory=list)

    def add(self, ident: str, lhs: arb, rhs: arb, note: str = "") -> Inequality:
        step = Inequality(ident, lhs, rhs, note)
        self.steps.append(step)
        return step

    def __getitem__(self, ident: str) -> Inequality:
        for s in self.steps:
            if s.ident == ident:
                return s
        raise KeyError(ident)

    @property
    def determinate(self) -> bool:
        return all(s.status != UNDETERMINED for s in self.steps)

    def to_dict(self) -> dict:
        return {"title": self.title, "steps": [s.to_dict() for s in self.steps]}
