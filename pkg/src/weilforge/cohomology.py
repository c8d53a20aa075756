"""Matrices of derivations in monomial bases, and exact Betti numbers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .derivations import Derivation, apply, commutator, is_differential
from .exact import bareiss_rank
from .parallel import parallel_map
from .weil_core import Monomial, WeilAlgebra


@dataclass(frozen=True)
class BoundaryMatrix:
    source: tuple[int, int]
    target: tuple[int, int]
    rows: tuple[tuple[Fraction, ...], ...]   # len(target basis) × len(source basis)
    row_basis: tuple[Monomial, ...]
    col_basis: tuple[Monomial, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_basis), len(self.col_basis)

    def rank(self) -> int:
        if not self.row_basis or not self.col_basis:
            return 0
        return bareiss_rank(self.rows, len(self.col_basis))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)


def matrix_of(delta: Derivation, p: int, q: int) -> BoundaryMatrix:
    """Column j is delta applied to the j-th basis monomial of W^{p,q}."""
    alg = delta.algebra
    r, s = delta.bidegree
    cols = alg.basis(p, q) if p >= 0 and q >= 0 else ()
    tp, tq = p + r, q + s
    rows_b = alg.basis(tp, tq) if tp >= 0 and tq >= 0 else ()
    index = {m: i for i, m in enumerate(rows_b)}
    mat = [[Fraction(0)] * len(cols) for _ in rows_b]
    for j, m in enumerate(cols):
        for mon, c in apply(delta, alg.monomial(m)).terms.items():
            mat[index[mon]][j] = c
    return BoundaryMatrix((p, q), (tp, tq), tuple(tuple(r) for r in mat), rows_b, cols)


@dataclass(frozen=True)
class CohomologyEntry:
    dim: int
    rank_in: int
    rank_out: int

    @property
    def betti(self) -> int:
        return self.dim - self.rank_in - self.rank_out

    def to_json(self) -> dict:
        return {"dim": self.dim, "rank_in": self.rank_in, "rank_out": self.rank_out, "betti": self.betti}


@dataclass
class CohomologyReport:
    """Per-bidegree entries (keyed (p, q)) or per-total-degree entries (keyed n)."""

    kind: str                 # "bigraded" or "total"
    bidegree: tuple[int, int] | None
    truncation: dict
    table: dict = field(default_factory=dict)

    def betti(self, key) -> int:
        return self.table[key].betti

    def row(self, q: int) -> list[int]:
        """Betti numbers along a fixed q for a bigraded report."""
        return [self.table[(p, q)].betti for p in range(self.truncation["max_p"] + 1)]

    def totals(self) -> list[int]:
        return [self.table[n].betti for n in sorted(self.table)]

    def to_json(self) -> dict:
        if self.kind == "total":
            table = [{"n": n, **self.table[n].to_json()} for n in sorted(self.table)]
        else:
            table = [{"p": p, "q": q, **self.table[(p, q)].to_json()} for (p, q) in sorted(self.table)]
        return {"kind": self.kind, "truncation": self.truncation, "table": table}

    def format_text(self) -> str:
        if self.kind == "total":
            lines = ["n  dim  rank_in  rank_out  betti"]
            for n in sorted(self.table):
                e = self.table[n]
                lines.append(f"{n:<2} {e.dim:>4} {e.rank_in:>8} {e.rank_out:>9} {e.betti:>6}")
            return "\n".join(lines)
        mp, mq = self.truncation["max_p"], self.truncation["max_q"]
        width = max(3, *(len(str(e.betti)) + 1 for e in self.table.values()))
        lines = ["betti q\\p " + "".join(f"{p:>{width}}" for p in range(mp + 1))]
        for q in range(mq + 1):
            lines.append(f"{q:>9} " + "".join(f"{self.table[(p, q)].betti:>{width}}" for p in range(mp + 1)))
        return "\n".join(lines)


class NotADifferential(ValueError):
    pass


def bigraded_cohomology(delta: Derivation, max_p: int, max_q: int, workers: int | None = None) -> CohomologyReport:
    if not is_differential(delta):
        raise NotADifferential("operator does not square to zero")
    r, s = delta.bidegree
    keys = [(p, q) for p in range(max_p + 1) for q in range(max_q + 1)]

    def slice_(key):
        p, q = key
        dim = len(delta.algebra.basis(p, q))
        out = matrix_of(delta, p, q).rank()
        inn = matrix_of(delta, p - r, q - s).rank() if p - r >= 0 and q - s >= 0 else 0
        return CohomologyEntry(dim, inn, out)

    entries = parallel_map(slice_, keys, workers)
    return CohomologyReport("bigraded", (r, s), {"max_p": max_p, "max_q": max_q}, dict(zip(keys, entries)))


def total_degree_basis(alg: WeilAlgebra, n: int) -> list[tuple[int, int, Monomial]]:
    return [(p, n - p, m) for p in range(n + 1) for m in alg.basis(p, n - p)]


def total_matrix(d_h: Derivation, d_v: Derivation, n: int) -> list[list[Fraction]]:
    """Matrix of d_h + d_v from total degree n to n + 1."""
    alg = d_h.algebra
    cols = total_degree_basis(alg, n) if n >= 0 else []
    rows = total_degree_basis(alg, n + 1)
    index = {m: i for i, (_, _, m) in enumerate(rows)}
    mat = [[Fraction(0)] * len(cols) for _ in rows]
    for j, (_, _, m) in enumerate(cols):
        x = alg.monomial(m)
        for mon, c in (apply(d_h, x) + apply(d_v, x)).terms.items():
            mat[index[mon]][j] += c
    return mat


def total_cohomology(d_h: Derivation, d_v: Derivation, max_n: int, workers: int | None = None) -> CohomologyReport:
    """Betti numbers of the total complex in degrees 0..max_n; each degree slice is finite."""
    if d_h.algebra != d_v.algebra:
        raise ValueError("differentials act on different algebras")
    if d_h.bidegree != (1, 0) or d_v.bidegree != (0, 1):
        raise ValueError("expected bidegrees (1,0) and (0,1)")
    if not (is_differential(d_h) and is_differential(d_v)):
        raise NotADifferential("an operator does not square to zero")
    if not commutator(d_h, d_v).is_zero():
        raise NotADifferential("the two differentials do not commute")
    alg = d_h.algebra

    def rank_at(n):
        if n < 0:
            return 0
        mat = total_matrix(d_h, d_v, n)
        return bareiss_rank(mat, len(mat[0])) if mat and mat[0] else 0

    ranks = parallel_map(rank_at, list(range(-1, max_n + 1)), workers)
    table = {}
    for n in range(max_n + 1):
        table[n] = CohomologyEntry(len(total_degree_basis(alg, n)), ranks[n], ranks[n + 1])
    return CohomologyReport("total", None, {"max_n": max_n}, table)
