"""Parameter ledger and the end-to-end inequality chain.

Every constant ``C1 .. C18`` the chain uses is an explicit number in a
:class:`ConstantLedger` carrying a provenance tag and, for reconstructed
constants, the closed form it was derived from. The chain is then evaluated
step by step with Arb balls; a step whose enclosures overlap is retried at
higher precision and reported as undetermined if the budget runs out.

Two kinds of input coexist. Analytic data (``F``, ``q``, ``F(q^P)``) is
certified. Arithmetic data about ``q`` and ``J(q)`` (degrees and heights) can
only be hypothetical, since the chain is a proof by contradiction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Callable

import numpy as np
from flint import acb, arb

from .auxfn import AuxFunction, blaschke_prime_bound, build_auxiliary, first_good_prime
from .auxfn import C15 as AUX_C15
from .modforms import stored_hecke_constant
from .numerics import (
    DEFAULT_PREC,
    CannotCertifyError,
    abs_upper,
    arb_lower,
    arb_upper,
    euler_product,
    precision,
    round_up,
    to_arb,
    to_ball,
)
from .primes import PrimeBoundsReport, certify_prime_bounds, is_prime, next_prime
from .report import FAILS, HOLDS, UNDETERMINED, BoundReport, interval

CERTIFIED = "certified-computed"
RECONSTRUCTED = "reconstructed-closed-form"
USER = "user-configured"
PROVENANCES = (CERTIFIED, RECONSTRUCTED, USER)

PREC_BUDGET = (DEFAULT_PREC, 256, 512, 1024)


class MissingConstantError(KeyError):
    """A chain step asked for a constant the ledger does not hold."""


class PreconditionError(ValueError):
    pass


# -- constants -----------------------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    name: str
    value: Fraction
    provenance: str
    derivation: str

    def __post_init__(self) -> None:
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    def to_dict(self) -> dict:
        return {"value": str(self.value), "provenance": self.provenance, "derivation": self.derivation}


@dataclass
class ConstantLedger:
    constants: dict[str, Constant] = field(default_factory=dict)

    def set(self, name: str, value, provenance: str, derivation: str) -> Fraction:
        value = value if isinstance(value, Fraction) else Fraction(value)
        self.constants[name] = Constant(name, value, provenance, derivation)
        return value

    def get(self, name: str) -> Fraction:
        try:
            return self.constants[name].value
        except KeyError:
            raise MissingConstantError(f"constant {name} is not in the ledger") from None

    def ball(self, name: str) -> arb:
        return to_arb(self.get(name))

    def __contains__(self, name: str) -> bool:
        return name in self.constants

    def to_dict(self) -> dict:
        return {k: self.constants[k].to_dict() for k in sorted(self.constants, key=_constant_order)}


def _constant_order(name: str):
    digits = "".join(ch for ch in name if ch.isdigit())
    return (int(digits) if digits else 0, name)


def load_user_constants(path: str | None = None) -> dict[str, Fraction]:
    """User-configured constants from a JSON file (the packaged default if ``path`` is None)."""
    if path is None:
        text = resources.files("transcert").joinpath("data/constants.json").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    raw = json.loads(text).get("constants", {})
    return {name: Fraction(str(entry["value"])) for name, entry in raw.items()}


def _up(x: arb) -> Fraction:
    return round_up(arb_upper(x))


def _down(x: arb, digits: int = 12) -> Fraction:
    """Largest decimal with ``digits`` significant digits that is ``<= x`` (``x > 0``)."""
    lo = arb_lower(x)
    if lo <= 0:
        raise CannotCertifyError("lower bound is not positive")
    e = math.floor(math.log10(lo)) - digits + 1
    scale = Fraction(10) ** e
    return math.floor(lo / scale) * scale


# -- instance ------------------------------------------------------------------------


@dataclass
class ProofInstance:
    """``N``, ``L``, ``M``, ``P`` and the data of ``q`` the chain runs on."""

    q_abs: Fraction
    N: int
    f: AuxFunction
    P: int | None
    deg_q: int = 1
    h_q: Fraction = Fraction(69, 100)
    deg_Jq: int = 1
    h_Jq: Fraction = Fraction(0)
    q: acb | None = None
    F_qP: acb | None = None

    def __post_init__(self) -> None:
        if not 0 < self.q_abs < 1:
            raise ValueError("q_abs must lie in (0, 1)")
        if self.f.N != self.N:
            raise ValueError("auxiliary function built for another N")
        if self.deg_q < 1 or self.deg_Jq < 1:
            raise ValueError("degrees must be positive")
        if self.h_q < 0 or self.h_Jq < 0:
            raise ValueError("heights must be non-negative")
        L = self.L
        if not (2 * L <= self.N**2 < 2 * (L + 1)) or self.M < L:
            raise ValueError("instance breaks 2L <= N^2 < 2(L+1) or M >= L")

    @property
    def L(self) -> int:
        return self.N * self.N // 2

    @property
    def M(self) -> int:
        return self.f.M

    @property
    def r(self) -> Fraction:
        return (1 + self.q_abs) / 2

    @property
    def mode(self) -> str:
        return "analytic" if self.q is not None else "hypothetical"

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "q_abs": str(self.q_abs),
            "N": self.N,
            "L": self.L,
            "M": self.M,
            "P": self.P,
            "r": str(self.r),
            "d0": str(self.f.d0),
            "hypothetical": {
                "deg_q": self.deg_q,
                "h_q": str(self.h_q),
                "deg_Jq": self.deg_Jq,
                "h_Jq": str(self.h_Jq),
            },
        }


def build_instance(
    N: int,
    q=None,
    q_abs=None,
    P: int | None = None,
    deg_q: int = 1,
    h_q=Fraction(69, 100),
    deg_Jq: int = 1,
    h_Jq=Fraction(0),
    pmax: int = 200,
    prec: int = DEFAULT_PREC,
) -> ProofInstance:
    """Build ``F`` for ``N``; with ``q`` given, ``P`` defaults to the first prime with ``F(q^P) != 0``."""
    f = build_auxiliary(N)
    value = None
    if q is not None:
        with precision(prec):
            qb = to_ball(q)
            if q_abs is None:
                q_abs = Fraction(str(q)) if isinstance(q, (int, Fraction, str)) else arb_upper(abs_upper(qb))
            if P is None:
                good = first_good_prime(qb, f, pmax, prec=prec)
                P, value = good.P, good.value
            else:
                value = f.evaluate_product(qb**P)
                if value.contains(0):
                    raise CannotCertifyError(f"F(q^{P}) is not certified nonzero")
    if q_abs is None:
        raise ValueError("either q or q_abs is required")
    if P is not None and not is_prime(P):
        raise ValueError("P must be prime")
    q_ball = to_ball(q) if q is not None else None
    return ProofInstance(
        Fraction(q_abs), N, f, P, deg_q, Fraction(h_q), deg_Jq, Fraction(h_Jq), q_ball, value
    )


# -- the radius condition -----------------------------------------------------------


def _radius_condition(N: int, r: arb) -> str:
    lhs = -(12 * N + 1) * (1 - r).log()
    rhs = N * (arb(N * N) / 2).log()
    if lhs <= rhs:
        return HOLDS
    if lhs > rhs:
        return FAILS
    return UNDETERMINED


def min_N_for_radius(q_abs) -> int:
    """Smallest ``N`` with ``(1/(1-r))^(12N+1) <= (N^2/2)^N`` for ``r = (1 + q_abs)/2``.

    In log form the difference is convex in ``N`` and negative near 0, so
    there is exactly one crossing, located by doubling and bisection.
    """
    q_abs = Fraction(q_abs)
    if not 0 < q_abs < 1:
        raise ValueError("q_abs must lie in (0, 1)")
    for bits in PREC_BUDGET:
        with precision(bits):
            r = to_arb((1 + q_abs) / 2)
            try:
                hi = 1
                while _decided(_radius_condition(hi, r)) != HOLDS:
                    hi *= 2
                lo = hi // 2
                while hi - lo > 1:
                    mid = (lo + hi) // 2
                    if _decided(_radius_condition(mid, r)) == HOLDS:
                        hi = mid
                    else:
                        lo = mid
                return hi
            except _Undecided:
                continue
    raise CannotCertifyError("radius condition undecidable within the precision budget")


class _Undecided(Exception):
    pass


def _decided(status: str) -> str:
    if status == UNDETERMINED:
        raise _Undecided
    return status


# -- C6 ------------------------------------------------------------------------------


@dataclass
class C6Certificate:
    value: Fraction
    radius: Fraction
    boundary_min: arb
    samples: int

    def to_dict(self) -> dict:
        return {
            "C6": str(self.value),
            "radius": str(self.radius),
            "boundary_min_abs": interval(self.boundary_min),
            "samples": self.samples,
        }


def certify_c6(radius, samples: int = 64, prec: int = DEFAULT_PREC) -> C6Certificate:
    """A lower bound for ``|z^-1 Delta(z)| = |prod (1 - z^n)^24|`` on ``|z| <= radius``.

    ``|1 - z^n| >= 1 - |z|^n >= 1 - radius^n`` bounds each factor, so the
    product at ``z = radius`` is the exact minimum; it is certified and the
    boundary samples confirm nothing smaller is seen.
    """
    radius = Fraction(radius)
    if not 0 < radius < 1:
        raise ValueError("radius must lie in (0, 1)")
    with precision(prec):
        r = to_arb(radius)
        value = _down(euler_product(acb(r), 24).real)
        lows = []
        for k in range(samples):
            t = 2 * arb.pi() * k / samples
            lows.append(abs(euler_product(acb(r * t.cos(), r * t.sin()), 24)))
        bmin = lows[0]
        for x in lows[1:]:
            if arb_lower(x) < arb_lower(bmin):
                bmin = x
    return C6Certificate(value, radius, bmin, samples)


# -- the ledger -----------------------------------------------------------------------


def build_ledger(
    inst: ProofInstance,
    user: dict[str, Fraction] | None = None,
    c14: Fraction | PrimeBoundsReport | None = None,
    c6: C6Certificate | None = None,
    prime_limit: int = 100_000,
    prec: int = DEFAULT_PREC,
) -> ConstantLedger:
    """Populate ``C1 .. C18`` for the instance; ``C2`` must come from ``user``."""
    user = load_user_constants() if user is None else user
    led = ConstantLedger()
    c1 = stored_hecke_constant().c1
    led.set("C1", c1, CERTIFIED, "max(1, C(Delta^2), C(Delta^2 J)) over the fundamental domain")
    if "C2" not in user:
        raise MissingConstantError("constant C2 is not configured")
    led.set("C2", user["C2"], USER, "isogeny height constant: h(J(q^n)) <= 2h(J(q)) + 6 log(1+n) + C2")
    if c14 is None:
        c14 = certify_prime_bounds(prime_limit)
    if isinstance(c14, PrimeBoundsReport):
        c14_note = f"max pi(x) log(x)/x over 3 <= x <= {c14.limit} (argmax {c14.c14_argmax})"
        c14 = c14.c14
    else:
        c14_note = "supplied by the caller"
    c6 = certify_c6(inst.r, prec=prec) if c6 is None else c6
    with precision(prec):
        lq = -to_arb(inst.q_abs).log()
        e4e = (arb(4) / arb.const_e()).exp()
        C1 = to_arb(c1)
        c3 = led.set("C3", _up(e4e * C1), RECONSTRUCTED, "e^(4/e) C1, since N^(4/N) <= e^(4/e)")
        c4 = led.set("C4", _up(to_arb(c3) * C1), RECONSTRUCTED, "C3 C1, so C4^N >= N^4 C1^(2N)")
        led.set(
            "C5",
            _up(arb(12) ** 12 * to_arb(c4) * (1 + arb(1) / inst.M) ** 12),
            RECONSTRUCTED,
            f"12^12 C4 (1 + 1/M)^12 at M = {inst.M}",
        )
        led.set("C6", c6.value, CERTIFIED, f"prod (1 - r^n)^24 at r = {inst.r}, the minimum of |z^-1 Delta| on |z| <= r")
        c7a = led.set(
            "C7a",
            _up(2 + (1 / to_arb(c6.value)).log() / lq),
            RECONSTRUCTED,
            "2 + log(1/C6)/log(1/|q|), valid for P >= 2",
        )
        c7b = led.set(
            "C7b",
            _up(6 * arb(3).log() / arb(2).log() + to_arb(led.get("C2")) / arb(2).log()),
            RECONSTRUCTED,
            "6 log 3/log 2 + C2/log 2, so 6 log(1+P) + C2 <= C7b log P for P >= 2",
        )
        m = max(Fraction(25), c7b, inst.h_q, 2 * inst.h_Jq)
        c8 = led.set(
            "C8",
            inst.deg_q * inst.deg_Jq * m,
            RECONSTRUCTED,
            "deg(q) deg(J(q)) max{1, 25, C7b, h(q), 2h(J(q))}",
        )
        c9 = led.set(
            "C9",
            _up(to_arb(c8) * arb(3) / 2 * (1 + (1 + arb(2).log()) / 2)),
            RECONSTRUCTED,
            "C8 (3/2)(1 + (1 + log 2)/2): P+1 <= 3P/2 and log P + 1 <= (1 + log 2)P/2",
        )
        c10 = led.set("C10", _up(to_arb(c9) + to_arb(c7a) * lq), RECONSTRUCTED, "C9 + C7a log(1/|q|)")
        c11 = led.set("C11", c10, RECONSTRUCTED, "C10 (the combined inequality in log form)")
        c12 = led.set("C12", _up(to_arb(max(c11, Fraction(1))) / lq), RECONSTRUCTED, "max(C11, 1)/log(1/|q|)")
        c13 = led.set(
            "C13",
            _up(arb(33) / 2 * arb(3).sqrt() * to_arb(c12)),
            RECONSTRUCTED,
            "16.5 sqrt(3) C12: N <= sqrt(3M), log P <= P, log N <= log M, 31/P <= 15.5",
        )
        led.set("C14", c14, CERTIFIED, c14_note)
        c15 = led.set("C15", AUX_C15, RECONSTRUCTED, "4, valid when P >= 4 C14")
        c16 = led.set(
            "C16",
            _up(31 * arb(3).sqrt() * to_arb(c15) / lq),
            RECONSTRUCTED,
            "31 sqrt(3) C15/log(1/|q|)",
        )
        c17 = led.set(
            "C17",
            _up(to_arb(c13) * _max1(to_arb(c16) ** (arb(2) / 3))),
            RECONSTRUCTED,
            "C13 max(1, C16^(2/3))",
        )
        led.set("C18", 2 * c17, RECONSTRUCTED, "2 C17, since log M <= (sqrt(M) log M)^(2/3)")
    return led


def _max1(x: arb) -> arb:
    return x if x >= 1 else arb(1) if x < 1 else arb(1).union(x)


# -- evaluation with precision escalation -----------------------------------------------


def _escalate(build: Callable[[], BoundReport], budget=PREC_BUDGET) -> BoundReport:
    rep = None
    for bits in budget:
        with precision(bits):
            rep = build()
        if rep.determinate:
            break
    return rep


def _need_P(inst: ProofInstance) -> int:
    if inst.P is None:
        raise PreconditionError("the instance has no chosen P")
    return inst.P


def _logs(inst: ProofInstance):
    return to_arb(inst.q_abs), -to_arb(inst.q_abs).log(), arb(inst.N).log(), arb(inst.M).log()


def lower_bound_ledger(inst: ProofInstance, led: ConstantLedger) -> BoundReport:
    """The lower bound for ``|F(q^P)|``: ``Delta`` part, degree and height of ``alpha``, ``C8 .. C10``."""
    P = _need_P(inst)
    if inst.q is not None and inst.F_qP is None:
        raise PreconditionError("q is supplied but F(q^P) has not been certified")

    def build() -> BoundReport:
        N, dq, dJ = inst.N, inst.deg_q, inst.deg_Jq
        qa, lq, lN, _ = _logs(inst)
        lP = arb(P).log()
        c = led.ball
        rep = BoundReport("lower_bound")
        rep.add("C6_le_leading", c("C6"), arb(1), "C6 <= |z^-1 Delta(z)| at z = 0")
        with precision(DEFAULT_PREC):
            cert = certify_c6(inst.r, samples=32)
        rep.add("C6_boundary", c("C6"), cert.boundary_min, "C6 <= min |prod(1 - z^n)^24| on sampled |z| = r")
        rep.add(
            "delta_lower",
            -c("C7a") * lq * N * P,
            2 * N * c("C6").log() - 2 * N * P * lq,
            "log: exp(-C7a log(1/|q|) NP) <= C6^(2N) |q|^(2NP)",
        )
        if inst.q is not None:
            d_abs = abs(euler_product(inst.q**P, 24))
            rep.add("C6_at_qP", c("C6"), d_abs, "C6 <= |Delta(q^P)|/|q|^P")
        lenA = arb(inst.f.poly.length)
        rep.add(
            "siegel_length",
            lenA.log(),
            4 * lN + N * c("C1").log() + 12 * N * arb(inst.L).log(),
            "log L(A) <= log(N^4 C1^N L^(12N))",
        )
        c3_form = N * c("C3").log() + 12 * N * (arb(N * N) / 2).log()
        rep.add("C3_form", lenA.log(), c3_form, "log L(A) <= log(C3^N (N^2/2)^(12N))")
        rep.add("log_length_A", c3_form, 25 * N * lN, "log(C3^N (N^2/2)^(12N)) <= 25 N log N")
        deg_alpha = arb((P + 1) * dq * dJ)
        hq, hJ = to_arb(inst.h_q), to_arb(inst.h_Jq)
        h_iso = 2 * hJ + 6 * arb(1 + P).log() + c("C2")
        h_alpha = lenA.log() + N * P * hq + N * h_iso
        h_c7 = lenA.log() + N * P * hq + N * c("C7b") * lP + 2 * N * hJ
        rep.add("height_C7b", h_alpha, h_c7, "N(6 log(1+P) + C2) <= N C7b log P")
        rep.add(
            "height_25NlogN",
            deg_alpha * h_c7,
            deg_alpha * (25 * N * lN + N * P * hq + N * c("C7b") * lP + 2 * N * hJ),
            "log L(A) <= 25 N log N",
        )
        c8_form = c("C8") * N * (P + 1) * (P + lN + lP + 1)
        rep.add(
            "C8",
            deg_alpha * (25 * N * lN + N * P * hq + N * c("C7b") * lP + 2 * N * hJ),
            c8_form,
            "deg(alpha) h(alpha) <= C8 N (P+1)(P + log N + log P + 1)",
        )
        c9_form = c("C9") * N * P * (P + lN)
        rep.add("C9", c8_form, c9_form, "C8 N (P+1)(P + log N + log P + 1) <= C9 N P (P + log N)")
        lower = -(c("C7a") * lq * N * P + c9_form)
        rep.add(
            "C10",
            -c("C10") * N * P * (P + lN),
            lower,
            "-C10 NP(P + log N) <= -C7a log(1/|q|) NP - C9 NP(P + log N)",
        )
        if inst.F_qP is not None:
            logF = abs(inst.F_qP).log()
            rep.add("F_qP_lower", -c("C10") * N * P * (P + lN), logF, "certified log|F(q^P)| against the bound")
            alpha = inst.F_qP / (inst.q**P * euler_product(inst.q**P, 24)) ** (2 * N)
            rep.add(
                "alpha_liouville",
                -deg_alpha * h_alpha,
                abs(alpha).log(),
                "log|alpha| >= -deg(alpha) h(alpha) with hypothetical heights",
            )
        return rep

    return _escalate(build)


# Steps whose failure reflects the parameter regime (N below the radius
# threshold, M below 729, P below 4 C14), not an error in the chain.
REGIME_STEPS = frozenset({"depend_nonq", "M_power_31", "C15_precondition"})
VERDICT_STEP = "final"


def contradiction_chain(inst: ProofInstance, led: ConstantLedger, blaschke_samples: int = 16) -> BoundReport:
    """Evaluate the upper-bound, Blaschke and final-contradiction inequalities in order."""
    P = _need_P(inst)
    bl = blaschke_prime_bound(inst.q_abs, inst.f, P, led.get("C14"), samples=blaschke_samples)

    def build() -> BoundReport:
        N, L, M = inst.N, inst.L, inst.M
        qa, lq, lN, lM = _logs(inst)
        lP = arb(P).log()
        c = led.ball
        sM = arb(M).sqrt()
        rep = BoundReport("contradiction")
        rep.add("2L_le_N2", arb(2 * L), arb(N * N))
        rep.add("N2_lt_2L2", arb(N * N), arb(2 * L + 1), "N^2 < 2(L+1) over the integers")
        rep.add("L_le_M", arb(L), arb(M))
        rep.add("2L2_le_2M2", arb(2 * (L + 1)), arb(2 * (M + 1)))
        rep.add("2M2_le_3M", arb(2 * (M + 1)), arb(3 * M))
        rep.add("N_le_sqrt3M", arb(N), (3 * arb(M)).sqrt())
        r = to_arb(inst.r)
        rep.add(
            "depend_nonq",
            -(12 * N + 1) * (1 - r).log(),
            N * (arb(N * N) / 2).log(),
            "(1/(1-r))^(12N+1) <= (N^2/2)^N",
        )
        rep.add("depend_M", arb(N * N) / 2, arb(M), "(N^2/2)^N <= M^N")
        rep.add("LMN_le", arb(L * M * N).log(), (arb(M) ** 2 * (3 * arb(M)).sqrt()).log(), "LMN <= M^2 sqrt(3M)")
        rep.add("M_power_31", 6 * N * arb(3).log() + 30 * N * lM, 31 * N * lM, "3^(6N) M^(30N) <= M^(31N)")
        if inst.F_qP is not None:
            rep.add(
                "upper_at_qP",
                abs(inst.F_qP).log(),
                -lq * P * M + 31 * N * lM,
                "|F(q^P)| <= |q|^(PM) M^(31N)",
            )
        rep.add(
            "combine_C11",
            lq * P * M,
            c("C11") * N * P * (P + lN) + 31 * N * lM,
            "log(1/|q|) PM <= C11 NP(P + log N) + 31 N log M",
        )
        c12_rhs = c("C12") * N * (P + lP + lN + 31 * lM / P)
        rep.add("C12", arb(M), c12_rhs, "M <= C12 N(P + log P + log N + 31 log M/P)")
        c13_rhs = c("C13") * sM * (P + lM)
        rep.add("C13_absorb", c12_rhs, c13_rhs, "C12 N(...) <= C13 sqrt(M)(P + log M)")
        rep.add("C13", arb(M), c13_rhs, "M <= C13 sqrt(M)(P + log M)")
        for step in bl.chain.steps:
            rep.add(f"blaschke_{step.ident}", step.lhs, step.rhs, step.note)
        rep.add("C15_precondition", 4 * c("C14"), arb(P), "P >= 4 C14")
        bound_S = c("C15") * 31 * N * lM / lq
        rep.add("P32", arb(P) ** (arb(3) / 2), arb(P) ** 2 / lP, "P^(3/2) <= P^2/log P")
        rep.add("C16", bound_S, c("C16") * sM * lM, "C15 31 N log M/log(1/|q|) <= C16 sqrt(M) log M")
        rep.add("P_bound_C16", arb(P) ** (arb(3) / 2), c("C16") * sM * lM, "P^(3/2) <= C16 sqrt(M) log M")
        x = (sM * lM) ** (arb(2) / 3)
        rep.add(
            "C17",
            c("C13") * sM * (P + lM),
            c("C17") * sM * (lM + x),
            "C13 sqrt(M)(P + log M) <= C17 sqrt(M)(log M + (sqrt(M) log M)^(2/3))",
        )
        rep.add("C18_absorb", lM + x, 2 * x, "log M + (sqrt(M) log M)^(2/3) <= 2 (sqrt(M) log M)^(2/3)")
        rep.add(VERDICT_STEP, arb(M), c("C18") * arb(M) ** (arb(5) / 6) * lM ** (arb(2) / 3), "M <= C18 M^(5/6)(log M)^(2/3)")
        return rep

    return _escalate(build)


# -- the final threshold ------------------------------------------------------------------


def _threshold_status(M: int, c: arb) -> str:
    # M > c M^(5/6)(log M)^(2/3)  <=>  M > c^6 (log M)^4
    lhs = arb(M)
    rhs = c**6 * arb(M).log() ** 4
    if lhs > rhs:
        return HOLDS
    if lhs <= rhs:
        return FAILS
    return UNDETERMINED


def contradiction_threshold(c18) -> int:
    """Smallest ``M0`` such that ``M > c18 M^(5/6) (log M)^(2/3)`` for every ``M >= M0``.

    ``M^(1/6) / (log M)^(2/3)`` decreases up to ``e^4`` and increases after,
    so the threshold is either 1 or the single crossing beyond ``e^4``.
    """
    c18 = Fraction(c18) if not isinstance(c18, arb) else c18
    for bits in PREC_BUDGET:
        with precision(bits):
            c = to_arb(c18)
            if not c > 0:
                raise ValueError("c18 must be positive")
            try:
                # the minimum of the ratio over integers sits at 54 or 55
                if all(_decided(_threshold_status(m, c)) == HOLDS for m in (54, 55)):
                    return 1
                lo, hi = 55, 110
                while _decided(_threshold_status(hi, c)) != HOLDS:
                    lo, hi = hi, hi * 2
                while hi - lo > 1:
                    mid = (lo + hi) // 2
                    if _decided(_threshold_status(mid, c)) == HOLDS:
                        hi = mid
                    else:
                        lo = mid
                return hi
            except _Undecided:
                continue
    raise CannotCertifyError("threshold undecidable within the precision budget")


# -- routes for P ---------------------------------------------------------------------


@dataclass(frozen=True)
class CutoffReport:
    deg_q: int
    n: int
    prime_floor: int
    P: int
    ratio: Fraction

    def to_dict(self) -> dict:
        return {
            "deg_q": self.deg_q,
            "N": self.n,
            "prime_floor": self.prime_floor,
            "P": self.P,
            "ratio_P_over_3degN_plus_1": {"num": self.ratio.numerator, "den": self.ratio.denominator},
            "ratio": float(self.ratio),
        }


def algebraic_cutoff(deg_q: int, n: int, prime_floor: int = 2) -> CutoffReport:
    """Smallest prime ``p >= prime_floor`` with ``(p - 1)/3 > deg_q n``."""
    if deg_q < 1 or n < 1 or prime_floor < 1:
        raise ValueError("deg_q, n and prime_floor must be positive")
    start = max(prime_floor, 3 * deg_q * n + 2)
    p = start if is_prime(start) else next_prime(start)
    return CutoffReport(deg_q, n, prime_floor, p, Fraction(p, 3 * deg_q * n + 1))


def _largest_int(pred: Callable[[int], bool], lo: int) -> int:
    """Largest ``x >= lo`` with ``pred`` true, for ``pred`` true at ``lo`` and eventually false."""
    hi = max(2 * lo, 4)
    while pred(hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo


def route_bounds(q_abs, N: int, M: int, deg_q: int, c15=AUX_C15, cheb_threshold: int = 17, prime_floor: int = 2) -> dict:
    """The three upper bounds for ``P`` on one instance.

    ``blaschke``: largest ``P`` with ``P^2/log P <= C15 31 N log M / log(1/|q|)``.
    ``jensen``: zeros ``q^p`` (``p < P`` prime) lie in ``|z| < |q|``, so
    ``pi(P) <= 31 N log M / log(r/|q|)``; with ``pi(x) >= x/log x`` for
    ``x >= cheb_threshold`` this gives ``P/log P <= `` the same quantity.
    ``algebraic``: the degree cutoff prime.
    """
    q_abs = Fraction(q_abs)
    with precision(DEFAULT_PREC):
        qa = to_arb(q_abs)
        r = (1 + qa) / 2
        lM = arb(M).log()
        rhs_s = to_arb(Fraction(c15)) * 31 * N * lM / (-qa.log())
        rhs_j = 31 * N * lM / (r / qa).log()

        def below_s(x: int) -> bool:
            return bool(arb(x) ** 2 / arb(x).log() <= rhs_s)

        def below_j(x: int) -> bool:
            return bool(arb(x) / arb(x).log() <= rhs_j)

        s = _largest_int(below_s, 2) if below_s(2) else 2
        j = _largest_int(below_j, 3) if below_j(3) else 3
    j = max(j, cheb_threshold)
    a = algebraic_cutoff(deg_q, N, prime_floor).P
    return {"blaschke": s, "jensen": j, "algebraic": a}


ROUTE_GRID = (16, 64, 256, 1024, 4096, 16384, 65536)


def route_exponents(q_abs, deg_q: int = 1, grid=ROUTE_GRID, fit_points: int = 4) -> dict:
    """Log-log slopes of each route's ``P`` bound against ``N`` (with ``M = floor(N^2/2)``)."""
    rows = [route_bounds(q_abs, n, max(n * n // 2, 2), deg_q) for n in grid]
    xs = np.log(np.array(grid[-fit_points:], dtype=float))
    out = {}
    for name in ("blaschke", "jensen", "algebraic"):
        ys = np.log(np.array([row[name] for row in rows[-fit_points:]], dtype=float))
        out[name] = round(float(np.polyfit(xs, ys, 1)[0]), 6)
    return {"grid": list(grid), "fit_points": fit_points, "bounds": rows, "exponents": out}


def compare_routes(inst: ProofInstance, led: ConstantLedger, cheb_threshold: int = 17) -> dict:
    bounds = route_bounds(inst.q_abs, inst.N, inst.M, inst.deg_q, led.get("C15"), cheb_threshold)
    growth = route_exponents(inst.q_abs, inst.deg_q)
    exps = growth["exponents"]
    return {
        "bounds": bounds,
        "order_at_instance": sorted(bounds, key=lambda k: (bounds[k], k)),
        "growth": growth,
        "order_by_exponent": sorted(exps, key=lambda k: (exps[k], k)),
        "blaschke_smallest_exponent": exps["blaschke"] < min(exps["jensen"], exps["algebraic"]),
    }


# -- the whole run ---------------------------------------------------------------------


@dataclass
class ChainRun:
    instance: ProofInstance
    ledger: ConstantLedger
    lower: BoundReport
    chain: BoundReport
    routes: dict
    threshold: int
    min_N: int
    c6: C6Certificate

    @property
    def determinate(self) -> bool:
        return self.lower.determinate and self.chain.determinate

    @property
    def violations(self) -> list[str]:
        """Failed steps that are neither regime preconditions nor the verdict."""
        bad = [s.ident for s in self.lower.steps if s.status == FAILS]
        bad += [
            s.ident
            for s in self.chain.steps
            if s.status == FAILS and s.ident not in REGIME_STEPS and s.ident != VERDICT_STEP
        ]
        return bad

    @property
    def contradiction(self) -> bool:
        return self.chain[VERDICT_STEP].status == FAILS

    def to_dict(self) -> dict:
        return {
            "instance": self.instance.to_dict(),
            "ledger": self.ledger.to_dict(),
            "c6_certificate": self.c6.to_dict(),
            "lower_bound": self.lower.to_dict(),
            "contradiction_chain": self.chain.to_dict(),
            "regime_steps": sorted(REGIME_STEPS),
            "routes": self.routes,
            "contradiction_threshold_M": self.threshold,
            "min_N_for_radius": self.min_N,
            "summary": {
                "determinate": self.determinate,
                "violations": self.violations,
                "contradiction_reached": self.contradiction,
                "M": self.instance.M,
            },
        }


def run_chain(
    inst: ProofInstance,
    user: dict[str, Fraction] | None = None,
    c14: Fraction | None = None,
    prime_limit: int = 100_000,
) -> ChainRun:
    c6 = certify_c6(inst.r)
    primes = certify_prime_bounds(prime_limit)
    led = build_ledger(inst, user, primes if c14 is None else c14, c6, prime_limit)
    cheb = primes.chebyshev_lower_threshold
    lower = lower_bound_ledger(inst, led)
    chain = contradiction_chain(inst, led)
    routes = compare_routes(inst, led, cheb)
    return ChainRun(
        inst, led, lower, chain, routes, contradiction_threshold(led.get("C18")), min_N_for_radius(inst.q_abs), c6
    )
