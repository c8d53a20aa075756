"""Exact rational linear algebra: fraction-free rank and unique solves."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence


class SingularSystem(ArithmeticError):
    """The linear system does not determine the unknowns uniquely."""


class InconsistentSystem(ArithmeticError):
    """The linear system has no solution."""


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        den = 1
        for v in row:
            if isinstance(v, Fraction) and v.denominator != 1:
                den = den * v.denominator // math.gcd(den, v.denominator)
        out.append([int(v * den) for v in row])
    return out


def bareiss_rank(rows: Sequence[Sequence[Fraction | int]], ncols: int | None = None) -> int:
    """Rank via fraction-free (Bareiss) elimination on integer-scaled rows."""
    if not rows:
        return 0
    m = _integer_rows(rows)
    ncols = len(m[0]) if ncols is None else ncols
    nrows = len(m)
    rank = 0
    prev = 1
    for col in range(ncols):
        if rank == nrows:
            break
        piv = next((r for r in range(rank, nrows) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        pv = pr[col]
        for r in range(rank + 1, nrows):
            row = m[r]
            f = row[col]
            if f:
                m[r] = [(pv * row[c] - f * pr[c]) // prev for c in range(ncols)]
            else:
                m[r] = [(pv * row[c]) // prev for c in range(ncols)]
        prev = pv
        rank += 1
    return rank


def solve_unique(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], nvars: int) -> list[Fraction]:
    """Solve rows·u = rhs exactly; raise unless the solution exists and is unique."""
    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for col in range(nvars):
        piv = next((i for i in range(r, len(aug)) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    if any(row[-1] != 0 for row in aug[r:]):
        raise InconsistentSystem("constraint system has no solution")
    if len(pivots) != nvars:
        raise SingularSystem(f"constraint system has rank {len(pivots)} < {nvars} unknowns")
    sol = [Fraction(0)] * nvars
    for i, col in enumerate(pivots):
        sol[col] = aug[i][-1]
    return sol


def inverse(matrix: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Exact inverse of a square matrix; raises SingularSystem."""
    n = len(matrix)
    cols = []
    for k in range(n):
        e = [Fraction(int(i == k)) for i in range(n)]
        cols.append(solve_unique(matrix, e, n))
    return [[cols[j][i] for j in range(n)] for i in range(n)]
