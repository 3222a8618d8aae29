"""Exact truncated Laurent series over the integers.

An :class:`IntSeries` stores the coefficients of ``q^v, q^(v+1), ..., q^(t-1)``
and is known modulo ``q^t``. The canonical expansions of the discriminant
``Delta``, the Eisenstein series ``E4`` and the modular invariant ``J`` are
provided as generators; everything downstream is built from them.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

BELOW_TRUNCATION = "below-truncation"

# Below this operand length schoolbook convolution is used.
KRONECKER_THRESHOLD = 24


class InvalidTruncationError(ValueError):
    pass


class IntSeries:
    """Truncated Laurent series ``sum c_k q^(valuation + k)`` known mod ``q^trunc``.

    The zero series (every known coefficient vanishes) is stored with empty
    ``coeffs`` and ``valuation == trunc``; otherwise ``coeffs[0] != 0``.
    Instances are immutable.
    """

    __slots__ = ("_valuation", "_coeffs", "_trunc")

    def __init__(self, valuation: int, coeffs: Iterable[int], trunc: int):
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) != trunc - valuation:
            raise InvalidTruncationError(
                f"expected {trunc - valuation} coefficients, got {len(coeffs)}"
            )
        start = 0
        while start < len(coeffs) and coeffs[start] == 0:
            start += 1
        if start == len(coeffs):
            self._valuation = trunc
            self._coeffs: tuple[int, ...] = ()
        else:
            self._valuation = valuation + start
            self._coeffs = tuple(coeffs[start:])
        self._trunc = trunc

    @classmethod
    def zero(cls, trunc: int) -> "IntSeries":
        return cls(trunc, (), trunc)

    @classmethod
    def one(cls, trunc: int) -> "IntSeries":
        if trunc <= 0:
            raise InvalidTruncationError("the constant 1 needs trunc > 0")
        return cls(0, [1] + [0] * (trunc - 1), trunc)

    @classmethod
    def monomial(cls, exponent: int, coeff: int, trunc: int) -> "IntSeries":
        if exponent >= trunc:
            return cls.zero(trunc)
        return cls(exponent, [coeff] + [0] * (trunc - exponent - 1), trunc)

    @property
    def valuation(self) -> int:
        return self._valuation

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self._coeffs

    @property
    def trunc(self) -> int:
        return self._trunc

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def __getitem__(self, n: int) -> int:
        """Coefficient of ``q^n``; raises for exponents at or beyond ``trunc``."""
        if n >= self._trunc:
            raise IndexError(f"q^{n} is beyond the truncation q^{self._trunc}")
        if n < self._valuation:
            return 0
        return self._coeffs[n - self._valuation]

    def items(self):
        """Pairs ``(exponent, coefficient)`` for every stored coefficient."""
        v = self._valuation
        return ((v + k, c) for k, c in enumerate(self._coeffs))

    def dense(self, start: int) -> list[int]:
        """Coefficients of ``q^start .. q^(trunc-1)``; ``start`` must not exceed the valuation."""
        if start > self._valuation:
            raise ValueError("start lies above the valuation")
        return [0] * (self._valuation - start) + list(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntSeries):
            return NotImplemented
        return (
            self._valuation == other._valuation
            and self._trunc == other._trunc
            and self._coeffs == other._coeffs
        )

    def __hash__(self) -> int:
        return hash((self._valuation, self._coeffs, self._trunc))

    def __repr__(self) -> str:
        shown = " + ".join(f"{c}*q^{e}" for e, c in list(self.items())[:4])
        more = " + ..." if len(self._coeffs) > 4 else ""
        return f"IntSeries({shown or '0'}{more} + O(q^{self._trunc}))"

    # -- arithmetic ------------------------------------------------------

    def truncate(self, trunc: int) -> "IntSeries":
        """Forget coefficients at and above ``q^trunc`` (never extends)."""
        if trunc > self._trunc:
            raise InvalidTruncationError(
                f"cannot extend a series known mod q^{self._trunc} to q^{trunc}"
            )
        if trunc <= self._valuation:
            return IntSeries.zero(trunc)
        return IntSeries(self._valuation, self._coeffs[: trunc - self._valuation], trunc)

    def _add(self, other: "IntSeries", sign: int) -> "IntSeries":
        t = min(self._trunc, other._trunc)
        v = min(self._valuation, other._valuation, t)
        out = [0] * (t - v)
        for e, c in self.items():
            if e < t:
                out[e - v] += c
        for e, c in other.items():
            if e < t:
                out[e - v] += sign * c
        return IntSeries(v, out, t)

    def __add__(self, other):
        if isinstance(other, int):
            other = IntSeries.monomial(0, other, self._trunc) if self._trunc > 0 else IntSeries.zero(self._trunc)
        return self._add(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return self + (-other)
        return self._add(other, -1)

    def __neg__(self) -> "IntSeries":
        return IntSeries(self._valuation, [-c for c in self._coeffs], self._trunc) if self._coeffs else self

    def scale(self, k: int) -> "IntSeries":
        if k == 0:
            return IntSeries.zero(self._trunc)
        return IntSeries(self._valuation, [k * c for c in self._coeffs], self._trunc)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, IntSeries):
            return NotImplemented
        t = min(self._trunc + other._valuation, other._trunc + self._valuation)
        v = self._valuation + other._valuation
        if self.is_zero or other.is_zero or v >= t:
            return IntSeries.zero(t)
        n = t - v
        prod = convolve(self._coeffs[:n], other._coeffs[:n], n)
        return IntSeries(v, prod, t)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "IntSeries":
        """``self**e``; with ``v`` the valuation the result is known mod ``q^(e*v + trunc - v)``."""
        return _power(self, e)

    def shift(self, i: int) -> "IntSeries":
        """Multiply by ``q^i``."""
        if self.is_zero:
            return IntSeries.zero(self._trunc + i)
        return IntSeries(self._valuation + i, self._coeffs, self._trunc + i)

    def inflate(self, k: int) -> "IntSeries":
        """Substitute ``q -> q^k`` for a positive integer ``k``."""
        if k <= 0:
            raise ValueError("inflation factor must be positive")
        if self.is_zero:
            return IntSeries.zero(self._trunc * k)
        v = self._valuation * k
        t = self._trunc * k
        out = [0] * (t - v)
        for j, c in enumerate(self._coeffs):
            out[j * k] = c
        return IntSeries(v, out, t)

    def inverse(self) -> "IntSeries":
        """Exact inverse; the leading coefficient must be a unit (+1 or -1)."""
        if self.is_zero:
            raise ZeroDivisionError("series is zero to its truncation")
        lead = self._coeffs[0]
        if lead not in (1, -1):
            raise ArithmeticError("inverse needs a leading coefficient of +1 or -1")
        rel = self._trunc - self._valuation
        unit = IntSeries(0, self._coeffs, rel)
        inv = IntSeries(0, [lead], 1)
        prec = 1
        while prec < rel:
            prec = min(2 * prec, rel)
            a = unit.truncate(prec)
            b = _pad(inv, prec)
            # Newton step b <- b (2 - a b)
            inv = (b * (IntSeries.monomial(0, 2, prec) - a * b)).truncate(prec)
        return inv.shift(-self._valuation)

    def __truediv__(self, other: "IntSeries") -> "IntSeries":
        return self * other.inverse()


def _pad(s: IntSeries, trunc: int) -> IntSeries:
    # Zero-extend an exactly known polynomial approximation; used only inside
    # Newton iteration where the padded coefficients are recomputed.
    return IntSeries(0, s.dense(0) + [0] * (trunc - s.trunc), trunc)


def _power(s: IntSeries, e: int) -> IntSeries:
    if e < 0:
        raise ValueError("negative powers are not supported; use inverse()")
    v, rel = s.valuation, s.trunc - s.valuation
    if e == 0:
        return IntSeries.one(rel) if rel > 0 else IntSeries.zero(rel)
    if s.is_zero:
        return IntSeries.zero(e * v + rel)
    unit = IntSeries(0, s.coeffs, rel)
    result = None
    base = unit
    k = e
    while k:
        if k & 1:
            result = base if result is None else result * base
        k >>= 1
        if k:
            base = base * base
    return result.shift(e * v)


def convolve(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """First ``n`` coefficients of the product of two coefficient lists."""
    la, lb = min(len(a), n), min(len(b), n)
    if min(la, lb) < KRONECKER_THRESHOLD:
        return _schoolbook(a[:la], b[:lb], n)
    return _kronecker(a[:la], b[:lb], n)


def _schoolbook(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    out = [0] * n
    for i, x in enumerate(a):
        if x == 0:
            continue
        lim = min(len(b), n - i)
        for j in range(lim):
            out[i + j] += x * b[j]
    return out


def _kronecker(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    # Pack both operands into one big integer each, multiply once, unpack.
    # Signed digits are made non-negative by adding a bias in every slot.
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if ma == 0 or mb == 0:
        return [0] * n
    bits = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 2
    bits = -(-bits // 8) * 8
    A = 0
    for x in reversed(a):
        A = (A << bits) + x
    B = 0
    for x in reversed(b):
        B = (B << bits) + x
    slots = len(a) + len(b) - 1
    half = 1 << (bits - 1)
    bias = half * (((1 << (bits * slots)) - 1) // ((1 << bits) - 1))
    D = A * B + bias
    width = bits // 8
    raw = D.to_bytes(slots * width, "little")
    m = min(n, slots)
    out = [int.from_bytes(raw[k * width:(k + 1) * width], "little") - half for k in range(m)]
    return out + [0] * (n - m)


# -- canonical expansions ------------------------------------------------


def eta_cubed(trunc: int) -> IntSeries:
    """``prod (1 - q^n)^3`` mod ``q^trunc`` via Jacobi's triangular-number identity."""
    out = [0] * trunc
    k = 0
    while k * (k + 1) // 2 < trunc:
        out[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return IntSeries(0, out, trunc)


def delta_expansion(K: int) -> IntSeries:
    """``Delta = q prod (1 - q^n)^24`` known mod ``q^K``."""
    if K < 2:
        raise InvalidTruncationError("delta_expansion needs K >= 2")
    return (eta_cubed(K - 1) ** 8).shift(1)


def sigma3_table(n: int) -> list[int]:
    """``sigma_3(k)`` for ``0 <= k < n`` (entry 0 unused)."""
    sig = [0] * n
    for d in range(1, n):
        d3 = d ** 3
        for m in range(d, n, d):
            sig[m] += d3
    return sig


def e4_expansion(K: int) -> IntSeries:
    """``E4 = 1 + 240 sum sigma_3(n) q^n`` known mod ``q^K``."""
    if K < 1:
        raise InvalidTruncationError("e4_expansion needs K >= 1")
    sig = sigma3_table(K)
    return IntSeries(0, [1] + [240 * s for s in sig[1:]], K)


def j_expansion(K: int) -> IntSeries:
    """``J = E4^3 / Delta = 1/q + 744 + 196884 q + ...`` known mod ``q^K``."""
    if K < 0:
        raise InvalidTruncationError("j_expansion needs K >= 0")
    e4 = e4_expansion(K + 1)
    return e4 ** 3 * delta_expansion(K + 2).inverse()


def delta_power(m: int, K: int) -> IntSeries:
    """``Delta^m`` known mod ``q^K`` (for ``m >= 1``)."""
    if m < 1:
        raise ValueError("exponent must be positive")
    base = delta_expansion(max(2, K - m + 1))
    return (base ** m).truncate(K) if K >= m else IntSeries.zero(K)


def vanishing_order(s: IntSeries) -> int | str:
    """Exponent of the first nonzero coefficient, or ``BELOW_TRUNCATION``."""
    return BELOW_TRUNCATION if s.is_zero else s.valuation


# -- series file format ---------------------------------------------------
# First line "valuation trunc", then one decimal coefficient per line for
# q^valuation .. q^(trunc-1).


def dumps_series(s: IntSeries) -> str:
    lines = [f"{s.valuation} {s.trunc}"]
    lines.extend(str(c) for c in s.coeffs)
    return "\n".join(lines) + "\n"


def loads_series(text: str) -> IntSeries:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty series file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("first line must be 'valuation trunc'")
    v, t = int(head[0]), int(head[1])
    return IntSeries(v, [int(x) for x in lines[1:]], t)


def write_series(s: IntSeries, path: str | Path) -> None:
    Path(path).write_text(dumps_series(s))


def read_series(path: str | Path) -> IntSeries:
    return loads_series(Path(path).read_text())
