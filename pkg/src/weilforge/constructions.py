"""Preset structure data: tangent doubles, matched pairs, pairings, semidirect products.

All matrices act on column vectors: ``rho[k]`` is the matrix of the k-th basis
element, so (rho[k] @ rho[l] - rho[l] @ rho[k]) = sum_m c[k][l][m] rho[m].
Lie structure constants: [x_i, x_j] = sum_k c[i][j][k] x_k.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import inverse
from .sampling import random_coefficient
from .structures import (
    DoubleAlgebroidInput,
    HomotopyRepresentation,
    StructureData,
    rebuild_structure_data,
    validate,
)
from .weil_core import Role, Shape


def _frac3(x):
    return tuple(tuple(tuple(Fraction(v) for v in r) for r in m) for m in x)


def _zeros(*dims):
    if len(dims) == 1:
        return [Fraction(0)] * dims[0]
    return [_zeros(*dims[1:]) for _ in range(dims[0])]


def _matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))]
            for i in range(len(a))]


def _transpose(a):
    return [list(r) for r in zip(*a)] if a else []


@dataclass(frozen=True)
class LieAlgebraData:
    dim: int
    c: tuple

    def __post_init__(self):
        c = _frac3(self.c) if self.dim else ()
        object.__setattr__(self, "c", c)
        if len(c) != self.dim or any(len(r) != self.dim or any(len(v) != self.dim for v in r) for r in c):
            raise ValueError(f"structure constants must be {self.dim}x{self.dim}x{self.dim}")

    def defects(self) -> list[str]:
        n, c = self.dim, self.c
        out = []
        for i, j in itertools.product(range(n), repeat=2):
            if any(c[i][j][k] + c[j][i][k] for k in range(n)):
                out.append(f"antisymmetry fails at ({i}, {j})")
        for i, j, k in itertools.combinations(range(n), 3):
            for m in range(n):
                s = Fraction(0)
                for a, b, d in ((i, j, k), (j, k, i), (k, i, j)):
                    s += sum((c[a][b][l] * c[l][d][m] for l in range(n)), Fraction(0))
                if s:
                    out.append(f"Jacobi fails at ({i}, {j}, {k})")
                    break
        return out

    def require_valid(self) -> None:
        bad = self.defects()
        if bad:
            raise ValueError("invalid Lie algebra: " + "; ".join(bad[:3]))

    def adjoint(self) -> list[list[list[Fraction]]]:
        """ad(x_k) as matrices: ad[k][m][l] = c[k][l][m]."""
        n = self.dim
        return [[[self.c[k][l][m] for l in range(n)] for m in range(n)] for k in range(n)]


def lie_algebra(dim: int, brackets: dict[tuple[int, int], dict[int, int | Fraction]]) -> LieAlgebraData:
    c = _zeros(dim, dim, dim)
    for (i, j), val in brackets.items():
        for k, v in val.items():
            c[i][j][k] = Fraction(v)
            c[j][i][k] = -Fraction(v)
    return LieAlgebraData(dim, c)


def abelian(n: int) -> LieAlgebraData:
    return LieAlgebraData(n, _zeros(n, n, n) if n else ())


def sl2() -> LieAlgebraData:
    """Basis (h, e, f)."""
    return lie_algebra(3, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}})


def affine2() -> LieAlgebraData:
    """[x, y] = y."""
    return lie_algebra(2, {(0, 1): {1: 1}})


def heisenberg() -> LieAlgebraData:
    return lie_algebra(3, {(0, 1): {2: 1}})


def so3() -> LieAlgebraData:
    return lie_algebra(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}})


LIE_ALGEBRAS = {
    "abelian1": lambda: abelian(1),
    "abelian2": lambda: abelian(2),
    "abelian3": lambda: abelian(3),
    "affine2": affine2,
    "sl2": sl2,
    "heisenberg": heisenberg,
    "so3": so3,
}


def lie_algebra_by_name(name: str) -> LieAlgebraData:
    try:
        return LIE_ALGEBRAS[name]()
    except KeyError:
        raise ValueError(f"unknown Lie algebra {name!r}; known: {sorted(LIE_ALGEBRAS)}") from None


def is_representation(alg: LieAlgebraData, rho) -> bool:
    n = alg.dim
    for k, l in itertools.product(range(n), repeat=2):
        lhs = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(_matmul(rho[k], rho[l]), _matmul(rho[l], rho[k]))]
        d = len(rho[k])
        rhs = [[sum((alg.c[k][l][m] * rho[m][i][j] for m in range(n)), Fraction(0)) for j in range(d)]
               for i in range(d)]
        if lhs != rhs:
            return False
    return True


def dual_action(rho) -> list[list[list[Fraction]]]:
    """Representation tensor on the dual space: ∇_k φ_j = −Σ_b rho[k][j][b] φ_b."""
    return [[[-Fraction(v) for v in row] for row in m] for m in rho]


# -- generic split builder ---------------------------------------------------

def split_data(shape: Shape, role: Role, alg: LieAlgebraData, conn_first=None, conn_second=None,
               pairing=None, curvature=None) -> StructureData:
    """Structure data whose canonical splitting carries the given Lie algebra on the third space."""
    n1, n2, n3 = shape.dims(role)
    if alg.dim != n3:
        raise ValueError(f"Lie algebra has dimension {alg.dim}, third space has {n3}")
    hr = HomotopyRepresentation(
        shape, role,
        alg.c if n3 else (),
        [[Fraction(pairing[i][j]) if pairing is not None else Fraction(0) for i in range(n1)] for j in range(n2)],
        conn_first if conn_first is not None else _zeros(n3, n1, n1) if n3 else [],
        conn_second if conn_second is not None else _zeros(n3, n2, n2) if n3 else [],
        curvature if curvature is not None else _zeros(n3, n3, n1, n2) if n3 else [],
    )
    return rebuild_structure_data(hr)


# -- presets ---------------------------------------------------------------

def tangent_double(g: LieAlgebraData) -> DoubleAlgebroidInput:
    """The tangent double: W(D) = ∧g*⊗∨g with Chevalley-Eilenberg and Koszul differentials."""
    g.require_valid()
    n = g.dim
    shape = Shape(n, 0, n)
    # role D': first = B (empty), second = E, third = A = g; g acts on the core E* = g by ad
    ad = [[[g.c[k][j][b] for b in range(n)] for j in range(n)] for k in range(n)]
    data_h = split_data(shape, Role.Dprime, g, conn_second=ad)
    # role D'': first = E, second = A, third = B (empty); identity pairing E* × A*
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    data_v = split_data(shape, Role.Dprimeprime, abelian(0), pairing=ident)
    return DoubleAlgebroidInput(shape, data_h, data_v)


@dataclass(frozen=True)
class MatchedPairData:
    """action_a_on_b[a][b][b2]: coefficient of b_{b2} in a_a ▷ b_b; likewise for B on A."""

    alg_a: LieAlgebraData
    alg_b: LieAlgebraData
    action_a_on_b: tuple
    action_b_on_a: tuple

    def __post_init__(self):
        na, nb = self.alg_a.dim, self.alg_b.dim
        ab = _frac3(self.action_a_on_b) if na else ()
        ba = _frac3(self.action_b_on_a) if nb else ()
        if len(ab) != na or any(len(m) != nb or any(len(r) != nb for r in m) for m in ab):
            raise ValueError(f"action of A on B must have shape {(na, nb, nb)}")
        if len(ba) != nb or any(len(m) != na or any(len(r) != na for r in m) for m in ba):
            raise ValueError(f"action of B on A must have shape {(nb, na, na)}")
        object.__setattr__(self, "action_a_on_b", ab)
        object.__setattr__(self, "action_b_on_a", ba)

    def mutated(self, which: str, index: tuple[int, int, int], delta: Fraction = Fraction(1)) -> "MatchedPairData":
        """Copy with one action entry shifted by delta."""
        t = [[list(r) for r in m] for m in (self.action_a_on_b if which == "a_on_b" else self.action_b_on_a)]
        a, b, c = index
        t[a][b][c] += delta
        if which == "a_on_b":
            return MatchedPairData(self.alg_a, self.alg_b, t, self.action_b_on_a)
        return MatchedPairData(self.alg_a, self.alg_b, self.action_a_on_b, t)

    def entries(self):
        na, nb = self.alg_a.dim, self.alg_b.dim
        for idx in itertools.product(range(na), range(nb), range(nb)):
            yield "a_on_b", idx
        for idx in itertools.product(range(nb), range(na), range(na)):
            yield "b_on_a", idx


def action_matrices(action) -> list[list[list[Fraction]]]:
    """Column-vector matrices of an action tensor: m[k][b2][b] = action[k][b][b2]."""
    return [_transpose(m) for m in action]


def matched_pair(mp: MatchedPairData) -> DoubleAlgebroidInput:
    mp.alg_a.require_valid()
    mp.alg_b.require_valid()
    na, nb = mp.alg_a.dim, mp.alg_b.dim
    shape = Shape(na, nb, 0)
    # role D': first = B, second = E (empty), third = A
    data_h = split_data(shape, Role.Dprime, mp.alg_a, conn_first=dual_action(action_matrices(mp.action_a_on_b)))
    # role D'': first = E (empty), second = A, third = B
    data_v = split_data(shape, Role.Dprimeprime, mp.alg_b, conn_second=dual_action(action_matrices(mp.action_b_on_a)))
    return DoubleAlgebroidInput(shape, data_h, data_v)


def matched_pair_from_splitting(g: LieAlgebraData, first: Sequence[int], second: Sequence[int]) -> MatchedPairData:
    """Mutual actions induced by g = span(first) ⊕ span(second), both subalgebras."""
    first, second = list(first), list(second)
    if sorted(first + second) != list(range(g.dim)):
        raise ValueError("index sets must partition the basis")
    c = g.c

    def sub(idx):
        n = len(idx)
        out = _zeros(n, n, n)
        for a, b, d in itertools.product(range(n), repeat=3):
            out[a][b][d] = c[idx[a]][idx[b]][idx[d]]
        for a, b in itertools.product(range(n), repeat=2):
            other = [k for k in range(g.dim) if k not in idx]
            if any(c[idx[a]][idx[b]][k] for k in other):
                raise ValueError("index set does not span a subalgebra")
        return LieAlgebraData(n, out) if n else abelian(0)

    A, B = sub(first), sub(second)
    na, nb = len(first), len(second)
    # a ▷ b = B-part of [a, b]; b ▷ a = A-part of [b, a]
    ab = [[[c[first[a]][second[b]][second[b2]] for b2 in range(nb)] for b in range(nb)] for a in range(na)]
    ba = [[[c[second[b]][first[a]][first[a2]] for a2 in range(na)] for a in range(na)] for b in range(nb)]
    return MatchedPairData(A, B, ab, ba)


def sl2_matched_pair() -> MatchedPairData:
    """sl2 = span(h, e) ⊕ span(f)."""
    return matched_pair_from_splitting(sl2(), [0, 1], [2])


def vacant_pairing(nA: int, nB: int, P) -> StructureData:
    """Role-D data on a double vector space with zero core, given by a pairing A* × B*."""
    shape = Shape(nA, nB, 0)
    return split_data(shape, Role.D, abelian(0), pairing=[[Fraction(v) for v in r] for r in P])


def semidirect(nB: int, e_alg: LieAlgebraData, rep) -> StructureData:
    """Role-D data for shape (0, nB, dim E): E acting on B through the matrices rep[k]."""
    e_alg.require_valid()
    rep = [[[Fraction(v) for v in r] for r in m] for m in rep]
    if len(rep) != e_alg.dim or any(len(m) != nB or any(len(r) != nB for r in m) for m in rep):
        raise ValueError(f"representation must have shape {(e_alg.dim, nB, nB)}")
    if not is_representation(e_alg, rep):
        raise ValueError("rep is not a representation of the Lie algebra")
    shape = Shape(0, nB, e_alg.dim)
    return split_data(shape, Role.D, e_alg, conn_second=dual_action(rep))


def standard_sl2_rep():
    """h, e, f acting on the 2-dim standard representation."""
    return [[[1, 0], [0, -1]], [[0, 1], [0, 0]], [[0, 0], [1, 0]]]


# -- change of basis and random valid data ----------------------------------

def change_basis(data: StructureData, A1, A2, G, omega) -> StructureData:
    """Re-express data in new bases.

    New first* basis α'_i = Σ A1[i][a] α_a, new second* basis likewise with A2,
    new third units e'_k = Σ G[k][l] e_l + Σ omega[k][(a,b)] α_aβ_b (a splitting change).
    """
    n1, n2, n3 = data.dims
    N = data.hat_dim
    M = _zeros(N, N)
    for i, j, a, b in itertools.product(range(n1), range(n2), range(n1), range(n2)):
        M[i * n2 + j][a * n2 + b] = Fraction(A1[i][a]) * Fraction(A2[j][b])
    for k in range(n3):
        for l in range(n3):
            M[n1 * n2 + k][n1 * n2 + l] = Fraction(G[k][l])
        for t in range(n1 * n2):
            M[n1 * n2 + k][t] = Fraction(omega[k][t])
    Minv = inverse(M) if N else []
    A1i = inverse(A1) if n1 else []
    A2i = inverse(A2) if n2 else []
    br = _zeros(N, N, N)
    for u, v in itertools.product(range(N), repeat=2):
        old = _zeros(N)
        for x, y in itertools.product(range(N), repeat=2):
            f = M[u][x] * M[v][y]
            if f:
                row = data.bracket[x][y]
                for w in range(N):
                    old[w] += f * row[w]
        br[u][v] = [sum((old[w] * Minv[w][z] for w in range(N)), Fraction(0)) for z in range(N)]

    def conj(R, A, Ai, n):
        out = []
        for u in range(N):
            comb = _zeros(n, n)
            for x in range(N):
                if M[u][x]:
                    for i, j in itertools.product(range(n), repeat=2):
                        comb[i][j] += M[u][x] * R[x][i][j]
            out.append(_matmul(_matmul(A, comb), Ai) if n else [])
        return out

    r1 = conj(data.rep_first, [[Fraction(v) for v in r] for r in A1], A1i, n1)
    r2 = conj(data.rep_second, [[Fraction(v) for v in r] for r in A2], A2i, n2)
    P = [[sum((Fraction(A1[i][a]) * Fraction(A2[j][b]) * data.pairing[a][b]
               for a in range(n1) for b in range(n2)), Fraction(0)) for j in range(n2)] for i in range(n1)]
    return StructureData(data.shape, data.role, br, r1, r2, P)


def random_invertible(n: int, rng: random.Random) -> list[list[Fraction]]:
    """Unit lower times unit upper triangular, with a random row permutation and diagonal."""
    L = [[Fraction(int(i == j)) if i <= j else random_coefficient(rng) * rng.randint(0, 1) for j in range(n)]
         for i in range(n)]
    U = [[Fraction(int(i == j)) if i >= j else random_coefficient(rng) * rng.randint(0, 1) for j in range(n)]
         for i in range(n)]
    M = _matmul(L, U) if n else []
    perm = list(range(n))
    rng.shuffle(perm)
    scale = [rng.choice([1, -1, 2]) for _ in range(n)]
    return [[M[perm[i]][j] * scale[i] for j in range(n)] for i in range(n)]


def _random_lie(n: int, rng: random.Random) -> tuple[LieAlgebraData, list]:
    """A Lie algebra on n ≤ 3 dims and a list of representation factories dim -> matrices."""
    choices = {0: ["abelian"], 1: ["abelian"], 2: ["abelian", "affine2"],
               3: ["abelian", "sl2", "heisenberg", "so3", "affine_plus"]}[n]
    kind = rng.choice(choices)
    if kind == "abelian":
        g = abelian(n)
    elif kind == "affine2":
        g = affine2()
    elif kind == "affine_plus":
        g = lie_algebra(3, {(0, 1): {1: 1}})
    else:
        g = lie_algebra_by_name(kind)
    return g, kind


def _random_rep(g: LieAlgebraData, kind: str, d: int, rng: random.Random):
    n = g.dim
    zero = _zeros(n, d, d) if n else []
    if d == 0 or n == 0:
        return zero
    opts = ["zero"]
    if kind == "abelian":
        opts.append("commuting")
    if kind in ("affine2", "affine_plus"):
        opts.append("affine")
    if kind == "sl2" and d == 2:
        opts.append("standard")
    if d == n:
        opts.append("adjoint")
    pick = rng.choice(opts)
    if pick == "zero":
        rho = zero
    elif pick == "commuting":
        base = [[random_coefficient(rng) * rng.randint(0, 1) for _ in range(d)] for _ in range(d)]
        rho = []
        for _ in range(n):
            a, b = random_coefficient(rng) * rng.randint(0, 1), random_coefficient(rng) * rng.randint(0, 1)
            rho.append([[a * base[i][j] + (b if i == j else 0) for j in range(d)] for i in range(d)])
    elif pick == "affine":
        rho = [[[random_coefficient(rng) * rng.randint(0, 1) for _ in range(d)] for _ in range(d)]] + \
              [_zeros(d, d) for _ in range(n - 1)]
    elif pick == "standard":
        rho = [[[Fraction(v) for v in r] for r in m] for m in standard_sl2_rep()]
    else:
        rho = g.adjoint()
    if not is_representation(g, rho):
        raise AssertionError(f"random representation {pick} of {kind} is not a representation")
    S = random_invertible(d, rng)
    Si = inverse(S)
    return [_matmul(_matmul(S, m), Si) for m in rho]


def random_structure_data(shape: Shape, role: Role, rng: random.Random, gauge: bool = True) -> StructureData:
    """Random valid structure data; hat-space brackets acquire curvature through a splitting change."""
    n1, n2, n3 = shape.dims(role)
    g, kind = _random_lie(n3, rng)
    S = random_invertible(n3, rng)
    if n3:
        g = _conjugate_lie(g, S)
    use_pairing = n1 == n2 and n1 > 0 and rng.random() < 0.7
    rho1 = _random_rep_conj(g, kind, S, n1, rng)
    if use_pairing:
        P = random_invertible(n1, rng)
        Pi = inverse(P)
        # ∇ on first* is −rho1ᵀ; choose ∇ on second* so the pairing is invariant
        R1 = dual_action(rho1)
        R2 = [_transpose([[-v for v in r] for r in _matmul(_matmul(Pi, m), P)]) for m in R1]
    else:
        P = _zeros(n1, n2) if n1 else []
        R1 = dual_action(rho1)
        R2 = dual_action(_random_rep_conj(g, kind, S, n2, rng))
    data = split_data(shape, role, g, conn_first=R1, conn_second=R2, pairing=P)
    if gauge:
        A1 = random_invertible(n1, rng)
        A2 = random_invertible(n2, rng)
        G = [[Fraction(int(i == j)) for j in range(n3)] for i in range(n3)]
        omega = [[random_coefficient(rng) * rng.randint(0, 1) for _ in range(n1 * n2)] for _ in range(n3)]
        data = change_basis(data, A1, A2, G, omega)
    return data


def _conjugate_lie(g: LieAlgebraData, S) -> LieAlgebraData:
    """Structure constants in the basis x'_k = Σ S[k][l] x_l."""
    n = g.dim
    Si = inverse(S)
    c = _zeros(n, n, n)
    for i, j in itertools.product(range(n), repeat=2):
        old = _zeros(n)
        for a, b in itertools.product(range(n), repeat=2):
            f = S[i][a] * S[j][b]
            if f:
                for m in range(n):
                    old[m] += f * g.c[a][b][m]
        c[i][j] = [sum((old[m] * Si[m][z] for m in range(n)), Fraction(0)) for z in range(n)]
    return LieAlgebraData(n, c)


def _random_rep_conj(g_new: LieAlgebraData, kind: str, S, d: int, rng: random.Random):
    """A representation of the conjugated algebra: build for the original basis, then recombine."""
    n = g_new.dim
    if n == 0 or d == 0:
        return _zeros(n, d, d) if n else []
    orig = _original_algebra(kind, n)
    rho = _random_rep(orig, kind, d, rng)
    out = [[[sum((Fraction(S[k][l]) * rho[l][i][j] for l in range(n)), Fraction(0)) for j in range(d)]
            for i in range(d)] for k in range(n)]
    if not is_representation(g_new, out):
        raise AssertionError("conjugated representation check failed")
    return out


def _original_algebra(kind: str, n: int) -> LieAlgebraData:
    if kind == "abelian":
        return abelian(n)
    if kind == "affine_plus":
        return lie_algebra(3, {(0, 1): {1: 1}})
    return lie_algebra_by_name(kind)


def random_double_input(shape: Shape, rng: random.Random) -> DoubleAlgebroidInput:
    """Independent random valid data on roles D' and D'' (usually incompatible)."""
    return DoubleAlgebroidInput(shape, random_structure_data(shape, Role.Dprime, rng),
                                random_structure_data(shape, Role.Dprimeprime, rng))
