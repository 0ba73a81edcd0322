"""Exact linear programming over the rationals.

Dense two-phase primal simplex on the standard form

    maximize c.x   subject to   A x = b,  x >= 0,

with Bland's smallest-index anti-cycling rule, chosen for simplicity and
guaranteed termination over pivot-count speed.  All arithmetic is exact; the
tableau uses gmpy2.mpq when available (identical semantics, much faster) and
falls back to fractions.Fraction.  Results are plain Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

try:
    from gmpy2 import mpq as _R
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _R = Fraction

_ZERO = _R(0)
_ONE = _R(1)


class Infeasible(ValueError):
    """The constraint set A x = b, x >= 0 is empty."""


class Unbounded(ValueError):
    """The objective is unbounded above on the feasible set."""


def _to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


@dataclass(frozen=True)
class LinearProgram:
    """maximize c.x subject to A x = b, x >= 0."""

    a: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    c: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        a = tuple(tuple(Fraction(x) for x in row) for row in self.a)
        b = tuple(Fraction(x) for x in self.b)
        c = tuple(Fraction(x) for x in self.c)
        if len(a) != len(b):
            raise ValueError(f"{len(a)} constraint rows but {len(b)} right-hand sides")
        n = len(c)
        for i, row in enumerate(a):
            if len(row) != n:
                raise ValueError(f"row {i} has {len(row)} coefficients, expected {n}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def n_vars(self) -> int:
        return len(self.c)

    @property
    def n_constraints(self) -> int:
        return len(self.b)


@dataclass(frozen=True)
class LPSolution:
    value: Fraction
    x: tuple[Fraction, ...]


def _pivot(rows: list[list], obj: list, basis: list[int], pi: int, pj: int) -> None:
    prow = rows[pi]
    coef = prow[pj]
    if coef != _ONE:
        inv = _ONE / coef
        rows[pi] = prow = [x * inv for x in prow]
    for i, row in enumerate(rows):
        if i != pi:
            f = row[pj]
            if f:
                rows[i] = [a - f * p for a, p in zip(row, prow)]
    f = obj[pj]
    if f:
        obj[:] = [a - f * p for a, p in zip(obj, prow)]
    basis[pi] = pj


def _optimize(rows: list[list], obj: list, basis: list[int], n_cols: int) -> None:
    """Pivot to optimality.  Bland's rule: entering column is the smallest
    index with positive reduced cost; the leaving row breaks ratio ties by
    the smallest basic variable index."""
    while True:
        pj = -1
        for j in range(n_cols):
            if obj[j] > 0:
                pj = j
                break
        if pj < 0:
            return
        pi = -1
        best = None
        for i, row in enumerate(rows):
            coef = row[pj]
            if coef > 0:
                ratio = row[-1] / coef
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[pi]
                ):
                    best = ratio
                    pi = i
        if pi < 0:
            raise Unbounded(f"column {pj} can increase without bound")
        _pivot(rows, obj, basis, pi, pj)


def simplex_solve(lp: LinearProgram) -> LPSolution:
    """Exact optimum of the linear program.

    Raises :class:`Infeasible` or :class:`Unbounded` accordingly.
    """
    m, n = lp.n_constraints, lp.n_vars

    # Phase 1: minimize the sum of one artificial variable per row.
    rows: list[list] = []
    for arow, brhs in zip(lp.a, lp.b):
        row = [_R(x.numerator) / _R(x.denominator) for x in arow]
        rhs = _R(brhs.numerator) / _R(brhs.denominator)
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        art = [_ZERO] * m
        rows.append(row + art + [rhs])
    for i in range(m):
        rows[i][n + i] = _ONE
    basis = list(range(n, n + m))

    # Reduced costs for maximizing -(sum of artificials) from the artificial basis.
    obj = [_ZERO] * (n + m + 1)
    for i in range(m):
        obj = [o + r for o, r in zip(obj, rows[i])]
        obj[n + i] = _ZERO
    _optimize(rows, obj, basis, n + m)
    if obj[-1] != 0:
        raise Infeasible(f"phase 1 residual {_to_fraction(obj[-1])} > 0")

    # Remove artificials still basic at zero level; drop redundant rows.
    keep: list[int] = []
    for i in range(m):
        if basis[i] >= n:
            pj = next((j for j in range(n) if rows[i][j] != 0), None)
            if pj is None:
                continue  # all-zero row: redundant constraint
            _pivot(rows, obj, basis, i, pj)
        keep.append(i)
    rows = [rows[i][:n] + rows[i][-1:] for i in keep]
    basis = [basis[i] for i in keep]

    # Phase 2 on the original objective.
    obj = [_R(x.numerator) / _R(x.denominator) for x in lp.c] + [_ZERO]
    for i, row in enumerate(rows):
        f = obj[basis[i]]
        if f:
            obj = [a - f * p for a, p in zip(obj, row)]
    _optimize(rows, obj, basis, n)

    x = [Fraction(0)] * n
    for i, row in enumerate(rows):
        x[basis[i]] = _to_fraction(row[-1])
    value = sum((cj * xj for cj, xj in zip(lp.c, x)), Fraction(0))
    return LPSolution(value=value, x=tuple(x))
