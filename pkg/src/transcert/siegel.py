"""Small integer solutions of underdetermined homogeneous systems.

For an integer ``Y x X`` matrix ``m`` with ``X > Y`` and ``B = max |m_ij|``
there is a nonzero ``x`` in ``Z^X`` with ``m x = 0`` and
``|x|_inf <= (X B)^(Y/(X-Y))``. :func:`kernel_small_vector` finds a short
kernel vector by lattice reduction of an exact kernel basis;
:func:`exhaustive_small_solution` is the brute-force oracle used to check it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from flint import fmpz_mat

IntMatrix = Sequence[Sequence[int]]

DEFAULT_BUDGET = 10_000_000
_INT64_SAFE = 2**62


class UnderdeterminedViolationError(ValueError):
    """The system has at least as many equations as unknowns."""


class EnumerationTooLargeError(RuntimeError):
    pass


@dataclass(frozen=True)
class NormReport:
    sup_norm: int
    siegel_bound: float
    bound_met: bool
    X: int
    Y: int
    B: int
    kernel_rank: int
    method: str

    def to_dict(self) -> dict:
        return {
            "sup_norm": self.sup_norm,
            "siegel_bound": self.siegel_bound,
            "bound_met": self.bound_met,
            "X": self.X,
            "Y": self.Y,
            "B": self.B,
            "kernel_rank": self.kernel_rank,
            "method": self.method,
        }


def _shape(m: IntMatrix) -> tuple[int, int]:
    Y = len(m)
    if Y == 0:
        raise ValueError("matrix must have at least one row")
    X = len(m[0])
    if X == 0 or any(len(row) != X for row in m):
        raise ValueError("matrix rows must be non-empty and of equal length")
    return Y, X


def height(m: IntMatrix) -> int:
    """``B = max(1, max |m_ij|)``; the floor at 1 keeps the bound meaningful for zero rows."""
    return max(1, max(abs(int(v)) for row in m for v in row))


def siegel_bound_holds(sup_norm: int, X: int, Y: int, B: int) -> bool:
    """Exact test of ``sup_norm <= (X B)^(Y/(X-Y))``."""
    return sup_norm ** (X - Y) <= (X * B) ** Y


def siegel_bound(X: int, Y: int, B: int) -> float:
    return float((X * B) ** (Y / (X - Y)))


def integer_siegel_bound(X: int, Y: int, B: int) -> int:
    """Largest integer ``b`` with ``b <= (X B)^(Y/(X-Y))``."""
    target = (X * B) ** Y
    b = max(1, int(siegel_bound(X, Y, B)))
    while b ** (X - Y) > target:
        b -= 1
    while (b + 1) ** (X - Y) <= target:
        b += 1
    return b


def is_in_kernel(m: IntMatrix, v: Sequence[int]) -> bool:
    return all(sum(int(a) * int(x) for a, x in zip(row, v)) == 0 for row in m)


def _normalized(v: Sequence[int]) -> tuple[int, ...]:
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def _sort_key(v: tuple[int, ...]) -> tuple:
    return (max(abs(x) for x in v), v)


def kernel_basis(m: IntMatrix) -> list[list[int]]:
    """A basis of the saturated kernel lattice ``{x in Z^X : m x = 0}``.

    The Hermite normal form of ``[m^T | I]`` is reached by unimodular row
    operations, so the rows whose ``m^T`` part vanishes span the full kernel.
    """
    Y, X = _shape(m)
    aug = [[int(m[r][c]) for r in range(Y)] + [int(c == k) for k in range(X)] for c in range(X)]
    h = fmpz_mat(aug).hnf().tolist()
    basis = []
    for row in h:
        if all(v == 0 for v in row[:Y]) and any(row[Y:]):
            basis.append([int(v) for v in row[Y:]])
    return basis


def kernel_small_vector(m: IntMatrix, budget: int = DEFAULT_BUDGET) -> tuple[tuple[int, ...], NormReport]:
    """Nonzero kernel vector of small sup-norm, with the Siegel bound report.

    Among the LLL-reduced kernel basis vectors the smallest sup-norm wins,
    ties broken lexicographically after making the first nonzero entry
    positive. When that vector misses the Siegel bound and ``X >= 2Y`` the
    exhaustive oracle is consulted within ``budget``.
    """
    Y, X = _shape(m)
    if X <= Y:
        raise UnderdeterminedViolationError(f"need more unknowns than equations, got X={X}, Y={Y}")
    B = height(m)
    if all(int(v) == 0 for row in m for v in row):
        v = tuple(int(k == 0) for k in range(X))
        return v, NormReport(1, siegel_bound(X, Y, B), True, X, Y, B, X, "unit")

    basis = kernel_basis(m)
    reduced = fmpz_mat(basis).lll().tolist()
    candidates = [_normalized([int(x) for x in row]) for row in reduced if any(row)]
    best = min(candidates, key=_sort_key)
    method = "lll"
    sup = max(abs(x) for x in best)
    met = siegel_bound_holds(sup, X, Y, B)
    if not met and X >= 2 * Y:
        try:
            alt = exhaustive_small_solution(m, integer_siegel_bound(X, Y, B), budget)
        except EnumerationTooLargeError:
            alt = None
        if alt is not None:
            best, method = alt, "exhaustive"
            sup = max(abs(x) for x in best)
            met = siegel_bound_holds(sup, X, Y, B)
    if not is_in_kernel(m, best):
        raise AssertionError("internal error: returned vector is not in the kernel")
    return best, NormReport(sup, siegel_bound(X, Y, B), met, X, Y, B, len(basis), method)


# -- exhaustive oracle -----------------------------------------------------------


def _independent_rows(m: list[list[int]]) -> list[int]:
    rows: list[int] = []
    for i in range(len(m)):
        trial = rows + [i]
        if fmpz_mat([m[k] for k in trial]).rank() == len(trial):
            rows = trial
    return rows


def _pivot_columns(sub: list[list[int]]) -> list[int]:
    r, X = len(sub), len(sub[0])
    cols: list[int] = []
    for c in range(X):
        trial = cols + [c]
        if fmpz_mat([[row[k] for k in trial] for row in sub]).rank() == len(trial):
            cols = trial
        if len(cols) == r:
            break
    return cols


def enumeration_cost(m: IntMatrix, bound: int) -> int:
    """Number of free-coordinate assignments the oracle visits: ``(2 bound + 1)^(X - rank)``."""
    _, X = _shape(m)
    r = fmpz_mat([[int(v) for v in row] for row in m]).rank()
    return (2 * bound + 1) ** (X - r)


def exhaustive_small_solution(
    m: IntMatrix, bound: int, budget: int = DEFAULT_BUDGET
) -> tuple[int, ...] | None:
    """Lexicographically first normalized kernel vector with sup-norm ``<= bound``, or ``None``.

    Only the ``X - rank`` free coordinates are enumerated; the pivot
    coordinates follow from the adjugate of an invertible minor, with
    divisibility and size checked exactly.
    """
    Y, X = _shape(m)
    if bound < 1:
        raise ValueError("bound must be positive")
    mat = [[int(v) for v in row] for row in m]
    rows = _independent_rows(mat)
    r = len(rows)
    cost = (2 * bound + 1) ** (X - r)
    if cost > budget:
        raise EnumerationTooLargeError(f"{cost} assignments exceed the budget {budget}")
    if r == 0:
        return tuple(int(k == 0) for k in range(X))
    sub = [mat[i] for i in rows]
    piv = _pivot_columns(sub)
    free = [c for c in range(X) if c not in piv]
    if not free:
        return None
    A_p = fmpz_mat([[row[c] for c in piv] for row in sub])
    A_f = [[row[c] for c in free] for row in sub]
    det = int(A_p.det())
    adj = _adjugate(A_p, det)
    # x_piv = -adj (A_f x_f) / det
    W = [[-sum(adj[i][k] * A_f[k][j] for k in range(r)) for j in range(len(free))] for i in range(r)]

    wmax = max((abs(v) for row in W for v in row), default=0)
    use_int64 = wmax * bound * len(free) < _INT64_SAFE
    dtype = np.int64 if use_int64 else object
    Wn = np.array(W, dtype=dtype)
    span = np.arange(-bound, bound + 1, dtype=np.int64)
    best: tuple[int, ...] | None = None
    # Chunk on the first free coordinate to bound memory.
    rest = len(free) - 1
    if rest:
        grid = np.array(list(itertools.product(range(-bound, bound + 1), repeat=rest)), dtype=np.int64)
    else:
        grid = np.zeros((1, 0), dtype=np.int64)
    for first in span:
        xf = np.concatenate([np.full((grid.shape[0], 1), first, dtype=np.int64), grid], axis=1)
        num = xf.astype(dtype) @ Wn.T
        ok = np.all(num % det == 0, axis=1)
        if not ok.any():
            continue
        xf, num = xf[ok], num[ok]
        xp = num // det
        ok = np.all(np.abs(xp) <= bound, axis=1) & (np.any(xf != 0, axis=1) | np.any(xp != 0, axis=1))
        if not ok.any():
            continue
        for f_row, p_row in zip(xf[ok], xp[ok]):
            v = [0] * X
            for c, val in zip(free, f_row):
                v[c] = int(val)
            for c, val in zip(piv, p_row):
                v[c] = int(val)
            cand = _normalized(v)
            if best is None or cand < best:
                best = cand
    if best is not None and not is_in_kernel(mat, best):
        raise AssertionError("internal error: oracle vector is not in the kernel")
    return best


def _adjugate(A: fmpz_mat, det: int) -> list[list[int]]:
    n = A.nrows()
    if n == 1:
        return [[1]]
    inv = A.inv()  # rational inverse; adj = det * inv
    return [[int(inv[i, j] * det) for j in range(n)] for i in range(n)]


__all__ = [
    "EnumerationTooLargeError",
    "NormReport",
    "UnderdeterminedViolationError",
    "enumeration_cost",
    "exhaustive_small_solution",
    "height",
    "integer_siegel_bound",
    "is_in_kernel",
    "kernel_basis",
    "kernel_small_vector",
    "siegel_bound",
    "siegel_bound_holds",
]
