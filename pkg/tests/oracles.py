"""Independent reference computations used by the tests.

Nothing here imports the algebra kernel: signs, ranks and cochain complexes are
rebuilt from scratch with sympy and plain permutations.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy


def perm_sign(seq) -> int:
    """Sign of the permutation sorting seq (0 if an entry repeats)."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def sympy_rank(rows, ncols: int) -> int:
    if not rows or not ncols:
        return 0
    return sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) if isinstance(v, Fraction) else v
                          for v in r] for r in rows]).rank()


def ce_differential_matrix(c, k: int):
    """Chevalley-Eilenberg d: ∧^k g* → ∧^{k+1} g*, (dφ)(x_0..x_k) = Σ_{i<j} (−1)^{i+j} φ([x_i,x_j], ...)."""
    n = len(c)
    src = list(itertools.combinations(range(n), k))
    tgt = list(itertools.combinations(range(n), k + 1))
    col = {s: i for i, s in enumerate(src)}
    mat = [[Fraction(0)] * len(src) for _ in tgt]
    for r, xs in enumerate(tgt):
        for i, j in itertools.combinations(range(k + 1), 2):
            rest = [xs[t] for t in range(k + 1) if t not in (i, j)]
            sgn = (-1) ** (i + j)
            for m in range(n):
                coef = c[xs[i]][xs[j]][m]
                if not coef:
                    continue
                args = [m] + rest
                s = perm_sign(args)
                if s:
                    mat[r][col[tuple(sorted(args))]] += sgn * s * coef
    return mat, len(src), len(tgt)


def ce_betti(c) -> list[int]:
    """Lie algebra cohomology dimensions H^0..H^n by brute-force ranks."""
    from math import comb

    n = len(c)
    ranks = []
    for k in range(n + 1):
        mat, ncol, _ = ce_differential_matrix(c, k)
        ranks.append(sympy_rank(mat, ncol) if mat else 0)
    return [comb(n, k) - ranks[k] - (ranks[k - 1] if k else 0) for k in range(n + 1)]


def lie_jacobi_defects(c) -> int:
    """Number of (i,j,k,m) where Jacobi or antisymmetry fails."""
    n = len(c)
    bad = 0
    for i, j in itertools.product(range(n), repeat=2):
        bad += any(c[i][j][m] + c[j][i][m] for m in range(n))
    for i, j, k in itertools.product(range(n), repeat=3):
        for m in range(n):
            s = sum(c[j][k][l] * c[i][l][m] + c[k][i][l] * c[j][l][m] + c[i][j][l] * c[k][l][m] for l in range(n))
            bad += s != 0
    return bad


def matched_pair_ambient(cA, cB, a_on_b, b_on_a):
    """Structure constants of A⊕B with [a,b] = a▷b − b▷a (basis: A first, then B)."""
    na, nb = len(cA), len(cB)
    n = na + nb
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i, j, k in itertools.product(range(na), repeat=3):
        c[i][j][k] = Fraction(cA[i][j][k])
    for i, j, k in itertools.product(range(nb), repeat=3):
        c[na + i][na + j][na + k] = Fraction(cB[i][j][k])
    for a, b in itertools.product(range(na), range(nb)):
        for b2 in range(nb):
            c[a][na + b][na + b2] += a_on_b[a][b][b2]
            c[na + b][a][na + b2] -= a_on_b[a][b][b2]
        for a2 in range(na):
            c[na + b][a][a2] += b_on_a[b][a][a2]
            c[a][na + b][a2] -= b_on_a[b][a][a2]
    return c


def koszul_sign_product(x, y):
    """Multiply two monomials given as (first, second, even) by literal reordering.

    The odd word first(x) second(x) first(y) second(y) is sorted into
    first-family-then-second-family order by counting transpositions.
    """
    fx, sx, ex = x
    fy, sy, ey = y
    word = [(0, i) for i in fx] + [(1, j) for j in sx] + [(0, i) for i in fy] + [(1, j) for j in sy]
    if len(set(word)) != len(word):
        return 0, None
    s = perm_sign(word)
    f = tuple(sorted(i for fam, i in word if fam == 0))
    sec = tuple(sorted(j for fam, j in word if fam == 1))
    even = tuple(a + b for a, b in zip(ex, ey))
    return s, (f, sec, even)


def bidegree_buckets(n1: int, n2: int, n3: int, max_p: int, max_q: int) -> dict:
    """Count every (odd subset, odd subset, even multidegree) by bidegree, exhaustively."""
    counts: dict[tuple[int, int], int] = {}
    bound = min(max_p, max_q)
    subsets1 = [len(s) for r in range(n1 + 1) for s in itertools.combinations(range(n1), r)]
    subsets2 = [len(s) for r in range(n2 + 1) for s in itertools.combinations(range(n2), r)]
    evens = [sum(e) for e in itertools.product(range(bound + 1), repeat=n3)]
    for a in subsets1:
        for b in subsets2:
            for k in evens:
                p, q = a + k, b + k
                if p <= max_p and q <= max_q:
                    counts[(p, q)] = counts.get((p, q), 0) + 1
    return counts
