"""Structure data of a double-linear Poisson structure, and everything built from it.

A ``StructureData`` for role X lives on the split hat space
Ĥ = (first*⊗second*) ⊕ third of W(X). From it we build the Gerstenhaber
bracket on W(X), the vertical differential on W(X') and the horizontal
differential on W(X''). Two structure data (roles D' and D'') assemble into
the operators of a double Lie algebroid candidate on W(D), W(D'), W(D'').
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .derivations import (
    Derivation,
    apply,
    commutator,
    extended_contraction_h,
    extended_contraction_v,
    generator_bidegree,
    is_differential,
    zero_derivation,
)
from .exact import InconsistentSystem, SingularSystem, solve_unique
from .weil_core import (
    HatElement,
    Monomial,
    Role,
    Shape,
    WeilAlgebra,
    WeilElement,
    basis,
    embed,
    extended_pairing,
    flip_role,
    substitute,
    transfer_odd,
)

Tensor3 = tuple[tuple[tuple[Fraction, ...], ...], ...]
Matrix = tuple[tuple[Fraction, ...], ...]


def _t2(x, a: int, b: int, name: str) -> Matrix:
    try:
        m = tuple(tuple(Fraction(v) for v in row) for row in x)
    except TypeError as exc:
        raise ValueError(f"{name}: expected a nested array") from exc
    if len(m) != a or any(len(r) != b for r in m):
        raise ValueError(f"{name}: expected dimensions {(a, b)}")
    return m


def _t3(x, a: int, b: int, c: int, name: str) -> Tensor3:
    if len(x) != a:
        raise ValueError(f"{name}: expected dimensions {(a, b, c)}")
    return tuple(_t2(p, b, c, name) for p in x)


def _zeros(*dims):
    if len(dims) == 1:
        return [Fraction(0)] * dims[0]
    return [_zeros(*dims[1:]) for _ in range(dims[0])]


@dataclass(frozen=True)
class StructureData:
    """Lie bracket on Ĥ, representations of Ĥ on first* and second*, and a pairing.

    Hat basis order: tensor units (i, j) row-major, then the third-space units.
    bracket[u][v][w]: coefficient of basis w in [h_u, h_v].
    rep_first[u][i][i2]: coefficient of first*_{i2} in ∇_{h_u} first*_i.
    rep_second[u][j][j2]: likewise on second*.
    pairing[i][j] = (first*_i, second*_j).
    """

    shape: Shape
    role: Role
    bracket: Tensor3
    rep_first: Tensor3
    rep_second: Tensor3
    pairing: Matrix

    def __post_init__(self):
        n1, n2, n3 = self.shape.dims(self.role)
        N = n1 * n2 + n3
        object.__setattr__(self, "bracket", _t3(self.bracket, N, N, N, "bracket"))
        object.__setattr__(self, "rep_first", _t3(self.rep_first, N, n1, n1, "rep_first"))
        object.__setattr__(self, "rep_second", _t3(self.rep_second, N, n2, n2, "rep_second"))
        object.__setattr__(self, "pairing", _t2(self.pairing, n1, n2, "pairing"))

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.shape.dims(self.role)

    @property
    def hat_dim(self) -> int:
        n1, n2, n3 = self.dims
        return n1 * n2 + n3

    def tensor_index(self, i: int, j: int) -> int:
        return i * self.dims[1] + j

    def vector_index(self, k: int) -> int:
        return self.dims[0] * self.dims[1] + k

    @classmethod
    def zero(cls, shape: Shape, role: Role) -> "StructureData":
        n1, n2, n3 = shape.dims(role)
        N = n1 * n2 + n3
        return cls(shape, role, _zeros(N, N, N), _zeros(N, n1, n1), _zeros(N, n2, n2), _zeros(n1, n2))

    def hat(self, coords: Sequence[Fraction]) -> HatElement:
        return HatElement.from_coords(self.shape, self.role, coords)

    def to_json(self) -> dict:
        def enc(t):
            if isinstance(t, tuple):
                return [enc(v) for v in t]
            return str(t) if t.denominator != 1 else int(t)
        return {"role": self.role.value, "bracket": enc(self.bracket), "rep_first": enc(self.rep_first),
                "rep_second": enc(self.rep_second), "pairing": enc(self.pairing)}


# -- data derived from pairing and representations --------------------------

def ideal_representation(pairing: Matrix, n1: int, n2: int, i: int, j: int):
    """Action of the tensor unit first*_i ⊗ second*_j on first* and second*.

    {αβ, α'} = −(α', β) α and {αβ, β'} = (α, β') β.
    """
    r1 = _zeros(n1, n1)
    r2 = _zeros(n2, n2)
    for i2 in range(n1):
        r1[i2][i] = -pairing[i2][j]
    for j2 in range(n2):
        r2[j2][j] = pairing[i][j2]
    return r1, r2


def tensor_product_action(r1, r2, n1: int, n2: int, n3: int, i: int, j: int) -> list[Fraction]:
    """Coordinates of ∇(first*_i)·second*_j + first*_i·∇(second*_j) in Ĥ."""
    out = [Fraction(0)] * (n1 * n2 + n3)
    for i2 in range(n1):
        out[i2 * n2 + j] += r1[i][i2]
    for j2 in range(n2):
        out[i * n2 + j2] += r2[j][j2]
    return out


# -- validation ------------------------------------------------------------

@dataclass(frozen=True)
class Failure:
    condition: str
    witness: tuple
    detail: str

    def to_json(self) -> dict:
        return {"condition": self.condition, "witness": list(self.witness), "detail": self.detail}


@dataclass(frozen=True)
class ValidationReport:
    role: Role
    failures: tuple[Failure, ...]

    @property
    def valid(self) -> bool:
        return not self.failures

    def conditions(self) -> set[str]:
        return {f.condition for f in self.failures}

    def to_json(self) -> dict:
        return {"role": self.role.value, "valid": self.valid, "failures": [f.to_json() for f in self.failures]}


class InvalidStructureData(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__(f"structure data for role {report.role.label} fails: "
                         + ", ".join(sorted(report.conditions())))
        self.report = report


def _matmul(a, b):
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(m)), Fraction(0)) for j in range(p)] for i in range(n)]


def _lincomb(coeffs, mats, n, m):
    out = _zeros(n, m)
    for c, mat in zip(coeffs, mats):
        if c:
            for i in range(n):
                for j in range(m):
                    out[i][j] += c * mat[i][j]
    return out


def validate(data: StructureData, max_witnesses: int = 3) -> ValidationReport:
    """Check Lie, representation, invariance and the three compatibility conditions."""
    n1, n2, n3 = data.dims
    N = data.hat_dim
    br, R1, R2, P = data.bracket, data.rep_first, data.rep_second, data.pairing
    failures: list[Failure] = []
    counts: dict[str, int] = {}

    def fail(cond, witness, detail):
        if counts.get(cond, 0) < max_witnesses:
            failures.append(Failure(cond, tuple(witness), detail))
        counts[cond] = counts.get(cond, 0) + 1

    for u in range(N):
        for v in range(u, N):
            for w in range(N):
                if br[u][v][w] + br[v][u][w] != 0:
                    fail("antisymmetry", (u, v), f"[h{u},h{v}] + [h{v},h{u}] has component {w}")
                    break

    def bvec(u, v):
        return br[u][v]

    def bracket_vec(x, v):
        out = [Fraction(0)] * N
        for u, c in enumerate(x):
            if c:
                for w in range(N):
                    out[w] += c * br[u][v][w]
        return out

    for u, v, w in itertools.combinations(range(N), 3):
        total = [Fraction(0)] * N
        for a, b, c in ((u, v, w), (v, w, u), (w, u, v)):
            t = bracket_vec(bvec(a, b), c)
            total = [x + y for x, y in zip(total, t)]
        if any(total):
            fail("jacobi", (u, v, w), "cyclic sum of double brackets is nonzero")

    for name, R, n in (("representation-first", R1, n1), ("representation-second", R2, n2)):
        if n == 0:
            continue
        for u in range(N):
            for v in range(u + 1, N):
                lhs = _lincomb(br[u][v], R, n, n)
                rhs = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(_matmul(R[v], R[u]), _matmul(R[u], R[v]))]
                if lhs != rhs:
                    fail(name, (u, v), f"∇ of [h{u},h{v}] differs from the commutator")

    for u in range(N):
        for i in range(n1):
            for j in range(n2):
                s = sum((R1[u][i][i2] * P[i2][j] for i2 in range(n1)), Fraction(0))
                s += sum((R2[u][j][j2] * P[i][j2] for j2 in range(n2)), Fraction(0))
                if s:
                    fail("invariance", (u, i, j), f"(∇α{i + 1}, β{j + 1}) + (α{i + 1}, ∇β{j + 1}) = {s}")

    for i in range(n1):
        for j in range(n2):
            t = data.tensor_index(i, j)
            for u in range(N):
                if any(br[t][u][data.vector_index(k)] for k in range(n3)):
                    fail("ideal (i)", (t, u), f"[h{t},h{u}] leaves the tensor summand")
            r1, r2 = ideal_representation(P, n1, n2, i, j)
            if [list(r) for r in R1[t]] != r1 or [list(r) for r in R2[t]] != r2:
                fail("ideal action (ii)", (t,), "tensor element does not act through the pairing")

    for u in range(N):
        for i in range(n1):
            for j in range(n2):
                t = data.tensor_index(i, j)
                expected = tensor_product_action(R1[u], R2[u], n1, n2, n3, i, j)
                if list(br[u][t]) != expected:
                    fail("tensor product (iii)", (u, t), f"[h{u},h{t}] is not the tensor product action")

    return ValidationReport(data.role, tuple(failures))


def require_valid(data: StructureData) -> None:
    rep = validate(data)
    if not rep.valid:
        raise InvalidStructureData(rep)


# -- Gerstenhaber bracket --------------------------------------------------

GenKey = tuple[str, int]


def _gen_parity(key: GenKey) -> int:
    return 0 if key[0] == "even" else 1


class GerstenhaberBracket:
    """Bidegree (−1,−1) bracket given by its values on ordered generator pairs."""

    def __init__(self, algebra: WeilAlgebra, table: dict[tuple[GenKey, GenKey], WeilElement]):
        self.algebra = algebra
        self.table = {k: v for k, v in table.items() if not v.is_zero()}
        self._ad: dict[GenKey, Derivation] = {}

    def value(self, g1: GenKey, g2: GenKey) -> WeilElement:
        return self.table.get((g1, g2)) or self.algebra.zero()

    def ad(self, g: GenKey) -> Derivation:
        """x ↦ ⟦g, x⟧ as a derivation."""
        if g not in self._ad:
            p, q = generator_bidegree(g)
            imgs = {g2: self.value(g, g2) for g2 in self.algebra.generators()}
            self._ad[g] = Derivation(self.algebra, (p - 1, q - 1), imgs)
        return self._ad[g]

    def left_derivation(self, x: WeilElement) -> Derivation:
        """y ↦ ⟦x, y⟧ for bihomogeneous x."""
        p, q = x.bidegree
        par = (p + q) & 1
        imgs = {}
        for g in self.algebra.generators():
            sign = -1 if (par and _gen_parity(g)) else 1
            imgs[g] = apply(self.ad(g), x) * (-sign)
        return Derivation(self.algebra, (p - 1, q - 1), imgs)

    def __call__(self, x: WeilElement, y: WeilElement) -> WeilElement:
        return bracket_apply(self, x, y)

    def is_zero(self) -> bool:
        return not self.table


def bracket_apply(g: GerstenhaberBracket, x: WeilElement, y: WeilElement) -> WeilElement:
    """Biderivation extension: ⟦x, yz⟧ = ⟦x,y⟧z + (−1)^{|x||y|} y⟦x,z⟧."""
    if x.algebra != g.algebra or y.algebra != g.algebra:
        raise ValueError("bracket arguments live in a different algebra")
    total = g.algebra.zero()
    for (p, q) in sorted(x.bidegrees()):
        total = total + apply(g.left_derivation(x.component(p, q)), y)
    return total


def build_gerstenhaber(data: StructureData, check: bool = True) -> GerstenhaberBracket:
    """Generator table: ⟦c,c'⟧ = [c,c'], ⟦c,α⟧ = ∇α, ⟦c,β⟧ = ∇β, ⟦α,β⟧ = −(α,β)."""
    if check:
        require_valid(data)
    alg = WeilAlgebra(data.shape, data.role)
    n1, n2, n3 = data.dims
    table: dict[tuple[GenKey, GenKey], WeilElement] = {}
    for k in range(n3):
        u = data.vector_index(k)
        for l in range(n3):
            table[("even", k), ("even", l)] = embed(data.hat(data.bracket[u][data.vector_index(l)]))
        for i in range(n1):
            img = sum((alg.first(i2) * data.rep_first[u][i][i2] for i2 in range(n1)), alg.zero())
            table[("even", k), ("first", i)] = img
            table[("first", i), ("even", k)] = -img
        for j in range(n2):
            img = sum((alg.second(j2) * data.rep_second[u][j][j2] for j2 in range(n2)), alg.zero())
            table[("even", k), ("second", j)] = img
            table[("second", j), ("even", k)] = -img
    for i in range(n1):
        for j in range(n2):
            val = alg.scalar(-data.pairing[i][j])
            table[("first", i), ("second", j)] = val
            table[("second", j), ("first", i)] = val
    return GerstenhaberBracket(alg, table)


def gerstenhaber_defects(g: GerstenhaberBracket) -> dict[str, list[tuple]]:
    """Generator pairs violating antisymmetry and triples violating super-Jacobi."""
    alg = g.algebra
    gens = alg.generators()
    els = {k: alg.generator(k) for k in gens}
    anti, jac = [], []
    for a in gens:
        for b in gens:
            s = -1 if (_gen_parity(a) and _gen_parity(b)) else 1
            if not (g(els[a], els[b]) + g(els[b], els[a]) * s).is_zero():
                anti.append((a, b))
    for a, b, c in itertools.product(gens, repeat=3):
        if jacobi_defect(g, els[a], els[b], els[c]):
            jac.append((a, b, c))
    return {"antisymmetry": anti, "jacobi": jac}


def jacobi_defect(g: GerstenhaberBracket, x: WeilElement, y: WeilElement, z: WeilElement) -> WeilElement:
    """⟦x,⟦y,z⟧⟧ − ⟦⟦x,y⟧,z⟧ − (−1)^{|x||y|}⟦y,⟦x,z⟧⟧ for parity-homogeneous x, y."""
    s = -1 if (x.parity and y.parity) else 1
    return g(x, g(y, z)) - g(g(x, y), z) - g(y, g(x, z)) * s


# -- differentials ---------------------------------------------------------

def _single_image_derivation(alg: WeilAlgebra, bd, key, m: Monomial) -> Derivation:
    return Derivation(alg, bd, {key: alg.monomial(m)})


def _double_commutator_on(i1: Derivation, i2: Derivation, d: Derivation, x: WeilElement) -> WeilElement:
    """[i1, [i2, d]] applied to x, expanded operationally."""
    p2d = i2.parity * d.parity
    inner_par = (i2.parity + d.parity) & 1

    def inner(z):
        out = apply(i2, apply(d, z))
        t = apply(d, apply(i2, z))
        return out + t if p2d else out - t

    a = apply(i1, inner(x))
    b = inner(apply(i1, x))
    return a + b if (i1.parity and inner_par) else a - b


def _element_parity(x: WeilElement) -> int:
    return x.parity


@dataclass
class _Constraint:
    expr: Callable[[Derivation], WeilElement]
    rhs: WeilElement


def _solve_differential(target: WeilAlgebra, bd: tuple[int, int], order: list[str],
                        constraints_for: Callable[[GenKey, Derivation], list[_Constraint]]) -> Derivation:
    images: dict[GenKey, WeilElement] = {}
    for family in order:
        for key in [k for k in target.generators() if k[0] == family]:
            p, q = generator_bidegree(key)
            unknowns = target.basis(p + bd[0], q + bd[1])
            partial = Derivation(target, bd, images)
            cons = constraints_for(key, partial)
            if not unknowns:
                images[key] = target.zero()
                for c in cons:
                    if not (c.rhs - c.expr(partial)).is_zero():
                        raise InconsistentSystem(f"no image available for generator {key}")
                continue
            rows: dict[Monomial, list[Fraction]] = {}
            rhs: dict[Monomial, Fraction] = {}
            nu = len(unknowns)
            for ci, c in enumerate(cons):
                base = c.rhs - c.expr(partial)
                cols = [c.expr(_single_image_derivation(target, bd, key, m)) for m in unknowns]
                mons = set(base.terms)
                for col in cols:
                    mons.update(col.terms)
                for mon in mons:
                    row = [col.coefficient(mon) for col in cols]
                    rows[(ci, mon)] = row
                    rhs[(ci, mon)] = base.coefficient(mon)
            keys = sorted(rows, key=lambda t: (t[0], t[1]))
            sol = solve_unique([rows[k] for k in keys], [rhs[k] for k in keys], nu)
            images[key] = WeilElement(target, {m: v for m, v in zip(unknowns, sol) if v})
    return Derivation(target, bd, images)


def _hat_and_side_basis(alg: WeilAlgebra, side: str) -> list[WeilElement]:
    """Basis of W^{1,0}∪W^{1,1} (side 'first') or W^{0,1}∪W^{1,1} (side 'second')."""
    bds = [(1, 0), (1, 1)] if side == "first" else [(0, 1), (1, 1)]
    return [alg.monomial(m) for bd in bds for m in alg.basis(*bd)]


def build_d_v(data: StructureData, check: bool = True, square_zero: bool = True) -> Derivation:
    """The bidegree (0,1) differential on W(X') determined by data on role X.

    Solved from ι'_v(x) d y = ⟦x,y⟧ on the odd generators coming from second(X)*
    and from [ι'_v(x₁),[ι'_v(x₂),d]] = (−1)^{|x₂|} ι'_v(⟦x₁,x₂⟧) on the rest,
    with x, x₁, x₂ running over first* and Ĥ.
    """
    g = build_gerstenhaber(data, check=check)
    src = g.algebra
    target = WeilAlgebra(data.shape, data.role.next)
    xs = _hat_and_side_basis(src, "first")
    ctr = {i: extended_contraction_v(x) for i, x in enumerate(xs)}
    pair_rhs = _pair_rhs(g, xs, extended_contraction_v)
    d = _solve_differential(target, (0, 1), ["first", "second", "even"],
                            _constraint_builder(g, xs, ctr, pair_rhs, "first", target, "second", "first"))
    if square_zero:
        _assert_square_zero(d)
    return d


def build_d_h(data: StructureData, check: bool = True, square_zero: bool = True) -> Derivation:
    """The bidegree (1,0) differential on W(X'') determined by data on role X.

    Computed as the flip of the vertical differential of the flipped data.
    solve_d_h gives the same operator by a direct solve.
    """
    if check:
        require_valid(data)
    d = flip_derivation(build_d_v(flip_data(data), check=False, square_zero=False))
    if square_zero:
        _assert_square_zero(d)
    return d


def solve_d_h(data: StructureData, check: bool = True, square_zero: bool = True) -> Derivation:
    """Direct solve for the bidegree (1,0) differential on W(X'').

    Mirror image of build_d_v with horizontal contractions: solved from
    ι''_h(x) d y = ⟦x,y⟧ on generators from first(X)* and the double-contraction
    identity elsewhere, x running over second* and Ĥ.
    """
    g = build_gerstenhaber(data, check=check)
    src = g.algebra
    target = WeilAlgebra(data.shape, data.role.prev)
    xs = _hat_and_side_basis(src, "second")
    ctr = {i: extended_contraction_h(x) for i, x in enumerate(xs)}
    pair_rhs = _pair_rhs(g, xs, extended_contraction_h)
    d = _solve_differential(target, (1, 0), ["second", "first", "even"],
                            _constraint_builder(g, xs, ctr, pair_rhs, "second", target, "first", "second"))
    if square_zero:
        _assert_square_zero(d)
    return d


def _pair_rhs(g, xs, contraction):
    out = {}
    for a, x1 in enumerate(xs):
        for b, x2 in enumerate(xs):
            br = g(x1, x2)
            sign = -1 if x2.parity else 1
            out[a, b] = (contraction(br) * sign) if not br.is_zero() else None
    return out


def _constraint_builder(g, xs, ctr, pair_rhs, single_family, target, src_family, dst_family):
    src = g.algebra

    def build(key: GenKey, partial: Derivation) -> list[_Constraint]:
        gen = target.generator(key)
        cons = []
        if key[0] == single_family:
            y = src.generator((src_family, key[1]))
            for a, x in enumerate(xs):
                rhs = transfer_odd(g(x, y), target, src_family, dst_family)
                c = ctr[a]
                cons.append(_Constraint(lambda d, c=c: apply(c, apply(d, gen)), rhs))
            return cons
        for a in range(len(xs)):
            for b in range(len(xs)):
                r = pair_rhs[a, b]
                rhs = apply(r, gen) if r is not None else target.zero()
                c1, c2 = ctr[a], ctr[b]
                cons.append(_Constraint(lambda d, c1=c1, c2=c2: _double_commutator_on(c1, c2, d, gen), rhs))
        return cons

    return build


def _assert_square_zero(d: Derivation) -> None:
    if not is_differential(d):
        raise ArithmeticError("solved operator does not square to zero")


# -- double Lie algebroids ---------------------------------------------------

@dataclass(frozen=True)
class DoubleAlgebroidInput:
    """data_h carries role D', data_v carries role D''."""

    shape: Shape
    data_h: StructureData
    data_v: StructureData

    def __post_init__(self):
        if self.data_h.role is not Role.Dprime or self.data_v.role is not Role.Dprimeprime:
            raise ValueError("data_h must have role D' and data_v role D''")
        if self.data_h.shape != self.shape or self.data_v.shape != self.shape:
            raise ValueError("structure data shapes do not match the input shape")


@dataclass
class DoubleOperators:
    shape: Shape
    d_h: Derivation           # W(D), bidegree (1,0), from data_h
    d_v: Derivation           # W(D), bidegree (0,1), from data_v
    bracket_p: GerstenhaberBracket   # W(D'), from data_h
    d_h_p: Derivation         # W(D'), bidegree (1,0), from data_v
    bracket_pp: GerstenhaberBracket  # W(D''), from data_v
    d_v_pp: Derivation        # W(D''), bidegree (0,1), from data_h


def assemble_double(inp: DoubleAlgebroidInput, strict: bool = True) -> DoubleOperators:
    """Build all six operators.

    With strict=False the inputs are not validated and differentials are not
    required to square to zero; this is for probing broken data (for example
    a mutated matched pair whose action is no longer a representation).
    """
    if strict:
        require_valid(inp.data_h)
        require_valid(inp.data_v)
    return DoubleOperators(
        shape=inp.shape,
        d_h=build_d_h(inp.data_h, check=False, square_zero=strict),
        d_v=build_d_v(inp.data_v, check=False, square_zero=strict),
        bracket_p=build_gerstenhaber(inp.data_h, check=False),
        d_h_p=build_d_h(inp.data_v, check=False, square_zero=strict),
        bracket_pp=build_gerstenhaber(inp.data_v, check=False),
        d_v_pp=build_d_v(inp.data_h, check=False, square_zero=strict),
    )


def derivation_defect(d: Derivation, g: GerstenhaberBracket, x: WeilElement, y: WeilElement) -> WeilElement:
    """d⟦x,y⟧ − ⟦dx,y⟧ − (−1)^{|x|}⟦x,dy⟧ for parity-homogeneous x."""
    s = -1 if x.parity else 1
    return apply(d, g(x, y)) - g(apply(d, x), y) - g(x, apply(d, y)) * s


@dataclass
class EquivalenceReport:
    commutator: dict            # generator -> [d_h, d_v](g)
    defect_h_p: dict            # generator pair -> defect of d'_h on W(D')
    defect_v_pp: dict           # generator pair -> defect of d''_v on W(D'')
    lemma_pointwise: int        # number of (x,y) samples with nonzero residual of the pointwise identity
    lemma_derivation: int       # same for the double-commutator identity
    samples: int

    @property
    def verdicts(self) -> dict[str, bool]:
        """True means the defect vanishes."""
        return {"commutator": not self.commutator, "derivation_h_prime": not self.defect_h_p,
                "derivation_v_double_prime": not self.defect_v_pp}

    @property
    def agree(self) -> bool:
        return len(set(self.verdicts.values())) == 1

    @property
    def compatible(self) -> bool:
        return self.agree and all(self.verdicts.values())

    @property
    def lemma_holds(self) -> bool:
        return self.lemma_pointwise == 0 and self.lemma_derivation == 0

    def to_json(self) -> dict:
        fmt = lambda d: {str(k): repr(v) for k, v in d.items()}
        return {"verdicts": {k: ("zero" if v else "nonzero") for k, v in self.verdicts.items()},
                "agree": self.agree, "compatible": self.compatible,
                "commutator_witnesses": fmt(dict(list(self.commutator.items())[:3])),
                "defect_h_prime_witnesses": fmt(dict(list(self.defect_h_p.items())[:3])),
                "defect_v_double_prime_witnesses": fmt(dict(list(self.defect_v_pp.items())[:3])),
                "lemma_residual_pointwise": self.lemma_pointwise,
                "lemma_residual_derivation": self.lemma_derivation,
                "lemma_samples": self.samples}


def commutator_images(ops: DoubleOperators) -> dict:
    c = commutator(ops.d_h, ops.d_v)
    return {k: v for k, v in c.images.items() if not v.is_zero()}


def _generator_defects(d: Derivation, g: GerstenhaberBracket) -> dict:
    alg = g.algebra
    out = {}
    for a in alg.generators():
        for b in alg.generators():
            r = derivation_defect(d, g, alg.generator(a), alg.generator(b))
            if not r.is_zero():
                out[(a, b)] = r
    return out


def lemma_pointwise_residual(ops: DoubleOperators, x: WeilElement, y: WeilElement) -> WeilElement:
    """ι_h(x)[d_h,d_v]y − (−1)^{|x|+1}(d'_h⟦x,y⟧ − ⟦d'_h x,y⟧ − (−1)^{|x|}⟦x,d'_h y⟧).

    x ∈ W^{•,1}(D'), y ∈ ∧B* given as an element of W(D') (first family).
    """
    wd = ops.d_h.algebra
    y_d = transfer_odd(y, wd, "first", "second")
    comm = apply(ops.d_h, apply(ops.d_v, y_d)) + apply(ops.d_v, apply(ops.d_h, y_d))
    lhs = apply(extended_contraction_h(x), comm)
    inner = derivation_defect(ops.d_h_p, ops.bracket_p, x, y)
    sign = 1 if x.parity else -1  # (−1)^{|x|+1}
    rhs = transfer_odd(inner * sign, wd, "first", "second") if not inner.is_zero() else wd.zero()
    return lhs - rhs


def lemma_derivation_residual(ops: DoubleOperators, x1: WeilElement, x2: WeilElement) -> Derivation:
    """[ι_h(x₁),[ι_h(x₂),[d_h,d_v]]] − (−1)^{|x₁|} ι_h(defect of d'_h on (x₁,x₂))."""
    comm = commutator(ops.d_h, ops.d_v)
    i1, i2 = extended_contraction_h(x1), extended_contraction_h(x2)
    lhs = commutator(i1, commutator(i2, comm))
    inner = derivation_defect(ops.d_h_p, ops.bracket_p, x1, x2)
    sign = -1 if x1.parity else 1
    rhs = extended_contraction_h(inner) * sign if not inner.is_zero() else zero_derivation(lhs.algebra, lhs.bidegree)
    return lhs - rhs


def check_double_lie_algebroid(inp: DoubleAlgebroidInput, samples: int = 20, seed: int = 0,
                               ops: DoubleOperators | None = None, strict: bool = True) -> EquivalenceReport:
    from .sampling import random_element

    ops = ops or assemble_double(inp, strict=strict)
    comm = commutator_images(ops)
    dh = _generator_defects(ops.d_h_p, ops.bracket_p)
    dv = _generator_defects(ops.d_v_pp, ops.bracket_pp)
    rng = random.Random(seed)
    wp = ops.bracket_p.algebra
    bad_point = bad_der = 0
    for _ in range(samples):
        x = random_element(wp, rng.randint(0, 2), 1, rng)
        y = random_element(wp, rng.randint(0, 2), 0, rng)
        if not lemma_pointwise_residual(ops, x, y).is_zero():
            bad_point += 1
        x1 = random_element(wp, rng.randint(0, 1), 1, rng)
        x2 = random_element(wp, rng.randint(0, 1), 1, rng)
        if not lemma_derivation_residual(ops, x1, x2).is_zero():
            bad_der += 1
    return EquivalenceReport(comm, dh, dv, bad_point, bad_der, samples)


def core_lie_algebroid(inp: DoubleAlgebroidInput, ops: DoubleOperators | None = None,
                       require_compatible: bool = True) -> list[list[list[Fraction]]]:
    """Structure constants c[i][j][k] of the core bracket on E*.

    Computed as ⟦ε_i, d''_v ε_j⟧ on W(D'') and as −⟦ε_i, d'_h ε_j⟧ on W(D');
    the two must agree.
    """
    ops = ops or assemble_double(inp)
    if require_compatible:
        rep = check_double_lie_algebroid(inp, samples=0, ops=ops)
        if not rep.compatible:
            raise ValueError("input is not a double Lie algebroid")
    n = inp.shape.nE
    wpp, wp = ops.bracket_pp.algebra, ops.bracket_p.algebra
    c1 = _zeros(n, n, n)
    c2 = _zeros(n, n, n)
    for i in range(n):
        for j in range(n):
            v1 = ops.bracket_pp(wpp.first(i), apply(ops.d_v_pp, wpp.first(j)))
            v2 = -ops.bracket_p(wp.second(i), apply(ops.d_h_p, wp.second(j)))
            for k in range(n):
                c1[i][j][k] = v1.coefficient(Monomial((k,), (), wpp.zero_even()))
                c2[i][j][k] = v2.coefficient(Monomial((), (k,), wp.zero_even()))
            if v1.bidegrees() - {(1, 0)} or v2.bidegrees() - {(0, 1)}:
                raise ArithmeticError("core bracket left the core")
    if c1 != c2:
        raise ArithmeticError("the two core bracket formulas disagree")
    return c1


def lie_jacobi_ok(c) -> bool:
    n = len(c)
    for i, j, k in itertools.product(range(n), repeat=3):
        for m in range(n):
            s = Fraction(0)
            for a, b, d in ((i, j, k), (j, k, i), (k, i, j)):
                s += sum((c[a][b][l] * c[l][d][m] for l in range(n)), Fraction(0))
            if s:
                return False
    return all(c[i][j][m] == -c[j][i][m] for i in range(n) for j in range(n) for m in range(n))


# -- flip and minus ----------------------------------------------------------

def flip_data(data: StructureData) -> StructureData:
    """Transport to the flipped double vector space.

    Role X maps to its flip counterpart and the first and second spaces of
    that role trade places: tensor indices are transposed, the two
    representations swap, and the pairing is transposed and negated.
    """
    n1, n2, n3 = data.dims
    N = data.hat_dim
    perm = [j * n1 + i for i in range(n1) for j in range(n2)] + [n1 * n2 + k for k in range(n3)]
    br = _zeros(N, N, N)
    r1: list = [None] * N
    r2: list = [None] * N
    for u in range(N):
        for v in range(N):
            for w in range(N):
                br[perm[u]][perm[v]][perm[w]] = data.bracket[u][v][w]
        r1[perm[u]] = [list(row) for row in data.rep_second[u]]
        r2[perm[u]] = [list(row) for row in data.rep_first[u]]
    P = [[-data.pairing[i][j] for i in range(n1)] for j in range(n2)]
    return StructureData(data.shape.flip(), flip_role(data.role), br, r1, r2, P)


def flip_element(x: WeilElement) -> WeilElement:
    """Algebra isomorphism W(X) → W(flip X): odd families swap, even generators change sign."""
    target = WeilAlgebra(x.shape.flip(), flip_role(x.role))

    def img(key):
        fam, i = key
        if fam == "first":
            return target.second(i)
        if fam == "second":
            return target.first(i)
        return -target.even(i)

    return substitute(x, img, target)


def flip_derivation(d: Derivation) -> Derivation:
    """Conjugate a derivation by flip_element; bidegrees swap."""
    target = WeilAlgebra(d.algebra.shape.flip(), flip_role(d.algebra.role))
    images = {k: flip_element(apply(d, flip_element(target.generator(k)))) for k in target.generators()}
    return Derivation(target, (d.bidegree[1], d.bidegree[0]), images)


def minus_data(data: StructureData) -> StructureData:
    """Structure data for D⁻ under the identification (ν, c) ↦ (−ν, c) of hat spaces."""
    n1, n2, n3 = data.dims
    N = data.hat_dim
    signs = [-1] * (n1 * n2) + [1] * n3
    br = [[[data.bracket[u][v][w] * signs[u] * signs[v] * signs[w] for w in range(N)] for v in range(N)]
          for u in range(N)]
    r1 = [[[c * signs[u] for c in row] for row in data.rep_first[u]] for u in range(N)]
    r2 = [[[c * signs[u] for c in row] for row in data.rep_second[u]] for u in range(N)]
    P = [[-c for c in row] for row in data.pairing]
    return StructureData(data.shape, data.role, br, r1, r2, P)


# -- two-term representations up to homotopy --------------------------------

@dataclass(frozen=True)
class HomotopyRepresentation:
    """Split-form data of a VB-algebroid over the third space T of a role.

    base_bracket[k][l][m]: Lie bracket on T; boundary[j][i]: second* → first
    (the pairing); connection_first / connection_second: pullbacks of the
    representations along the canonical splitting s: T → Ĥ; curvature[k][l][i][j]:
    first*_i⊗second*_j component of Ω(t_k,t_l) = s[t_k,t_l] − [s t_k, s t_l].
    """

    shape: Shape
    role: Role
    base_bracket: Tensor3
    boundary: Matrix
    connection_first: Tensor3
    connection_second: Tensor3
    curvature: tuple


def extract_homotopy_representation(data: StructureData, check: bool = True) -> HomotopyRepresentation:
    if check:
        require_valid(data)
    n1, n2, n3 = data.dims
    vi = data.vector_index
    base = tuple(tuple(tuple(data.bracket[vi(k)][vi(l)][vi(m)] for m in range(n3)) for l in range(n3))
                 for k in range(n3))
    boundary = tuple(tuple(data.pairing[i][j] for i in range(n1)) for j in range(n2))
    c1 = tuple(data.rep_first[vi(k)] for k in range(n3))
    c2 = tuple(data.rep_second[vi(k)] for k in range(n3))
    curv = tuple(tuple(tuple(tuple(-data.bracket[vi(k)][vi(l)][data.tensor_index(i, j)] for j in range(n2))
                             for i in range(n1)) for l in range(n3)) for k in range(n3))
    return HomotopyRepresentation(data.shape, data.role, base, boundary, c1, c2, curv)


def rebuild_structure_data(hr: HomotopyRepresentation) -> StructureData:
    """Inverse of extract_homotopy_representation."""
    shape, role = hr.shape, hr.role
    n1, n2, n3 = shape.dims(role)
    N = n1 * n2 + n3
    P = [[hr.boundary[j][i] for j in range(n2)] for i in range(n1)]
    r1 = _zeros(N, n1, n1)
    r2 = _zeros(N, n2, n2)
    for i in range(n1):
        for j in range(n2):
            a, b = ideal_representation(P, n1, n2, i, j)
            r1[i * n2 + j], r2[i * n2 + j] = a, b
    for k in range(n3):
        r1[n1 * n2 + k] = [list(r) for r in hr.connection_first[k]]
        r2[n1 * n2 + k] = [list(r) for r in hr.connection_second[k]]
    br = _zeros(N, N, N)
    for k in range(n3):
        for l in range(n3):
            row = br[n1 * n2 + k][n1 * n2 + l]
            for m in range(n3):
                row[n1 * n2 + m] = Fraction(hr.base_bracket[k][l][m])
            for i in range(n1):
                for j in range(n2):
                    row[i * n2 + j] = -Fraction(hr.curvature[k][l][i][j])
    for u in range(N):
        for i in range(n1):
            for j in range(n2):
                t = i * n2 + j
                vec = tensor_product_action(r1[u], r2[u], n1, n2, n3, i, j)
                br[u][t] = vec
                if u >= n1 * n2:
                    br[t][u] = [-c for c in vec]
    return StructureData(shape, role, br, r1, r2, P)


# -- Cartan identity suite -------------------------------------------------------

@dataclass
class SuiteReport:
    trials: int
    seed: int
    max_defect: dict[str, Fraction]
    failures: dict[str, int]

    @property
    def passed(self) -> bool:
        return all(v == 0 for v in self.failures.values())

    def to_json(self) -> dict:
        return {"trials": self.trials, "seed": self.seed, "passed": self.passed,
                "max_defect": {k: str(v) for k, v in self.max_defect.items()},
                "failures": dict(self.failures)}


@dataclass
class RoleOperators:
    """Bracket on W(X), vertical differential on W(X'), horizontal on W(X'')."""

    data: StructureData
    bracket: GerstenhaberBracket
    d_v: Derivation
    d_h: Derivation


def role_operators(data: StructureData) -> RoleOperators:
    require_valid(data)
    return RoleOperators(data, build_gerstenhaber(data, check=False), build_d_v(data, check=False),
                         build_d_h(data, check=False))


def _size(x: WeilElement | Derivation) -> Fraction:
    if isinstance(x, Derivation):
        return max((_size(v) for v in x.images.values()), default=Fraction(0))
    return max((abs(c) for c in x.terms.values()), default=Fraction(0))


def cartan_identities(ops: RoleOperators) -> dict[str, Callable[[random.Random], WeilElement | Derivation]]:
    """Each entry draws a random tuple and returns the identity residual."""
    from .sampling import random_element

    g, dv, dh = ops.bracket, ops.d_v, ops.d_h
    W = g.algebra
    Wp = dv.algebra
    Wpp = dh.algebra

    def ctr_v(x):
        return extended_contraction_v(x, bidegree=(x.bidegree[1] - 1, -1) if x else (-1, -1))

    def ctr_h(x):
        return extended_contraction_h(x, bidegree=(-1, x.bidegree[0] - 1) if x else (-1, -1))

    def nz(rng, fn):
        for _ in range(4):
            x = fn()
            if not x.is_zero():
                return x
        return x

    def derived_v(rng):
        x = nz(rng, lambda: random_element(W, 1, rng.randint(0, 2), rng))
        y = random_element(W, 0, rng.randint(0, 2), rng)
        if x.is_zero():
            return W.zero()
        lhs = apply(ctr_v(x), apply(dv, transfer_odd(y, Wp, "second", "first")))
        return lhs - transfer_odd(g(x, y), Wp, "second", "first")

    def derived_h(rng):
        x = nz(rng, lambda: random_element(W, rng.randint(0, 2), 1, rng))
        y = random_element(W, rng.randint(0, 2), 0, rng)
        if x.is_zero():
            return W.zero()
        lhs = apply(ctr_h(x), apply(dh, transfer_odd(y, Wpp, "first", "second")))
        return lhs - transfer_odd(g(x, y), Wpp, "first", "second")

    def double_commutator(rng, side):
        if side == "v":
            x1 = nz(rng, lambda: random_element(W, 1, rng.randint(0, 1), rng))
            x2 = nz(rng, lambda: random_element(W, 1, rng.randint(0, 1), rng))
            ctr, d = ctr_v, dv
        else:
            x1 = nz(rng, lambda: random_element(W, rng.randint(0, 1), 1, rng))
            x2 = nz(rng, lambda: random_element(W, rng.randint(0, 1), 1, rng))
            ctr, d = ctr_h, dh
        if x1.is_zero() or x2.is_zero():
            return W.zero()
        lhs = commutator(ctr(x1), commutator(ctr(x2), d))
        br = g(x1, x2)
        sign = -1 if x2.parity else 1
        if br.is_zero():
            return lhs
        return lhs - ctr(br) * sign

    def double_contraction(rng):
        x1 = nz(rng, lambda: random_element(W, rng.randint(0, 1), 1, rng))
        x2 = nz(rng, lambda: random_element(W, rng.randint(0, 1), 1, rng))
        phi = random_element(Wpp, 1, rng.randint(0, 2), rng)
        if x1.is_zero() or x2.is_zero():
            return Wpp.zero()
        i1, i2 = ctr_h(x1), ctr_h(x2)
        s2 = -1 if x2.parity else 1
        s12 = -1 if (x1.parity and x2.parity) else 1
        lhs = apply(i1, apply(i2, apply(dh, phi))) * s2
        br = g(x1, x2)
        t1 = apply(ctr_h(br), phi) if not br.is_zero() else Wpp.zero()
        a2 = transfer_odd(apply(i2, phi), W, "second", "first")
        a1 = transfer_odd(apply(i1, phi), W, "second", "first")
        t2 = transfer_odd(g(x1, a2), Wpp, "first", "second")
        t3 = transfer_odd(g(x2, a1), Wpp, "first", "second")
        return lhs - (t1 - t2 + t3 * s12)

    def pairing_leibniz(rng):
        x = random_element(Wpp, rng.randint(0, 2), 1, rng)
        y = random_element(Wp, 1, rng.randint(0, 2), rng)
        if x.is_zero() or y.is_zero():
            return Wp.zero()
        sign = 1 if x.parity else -1  # (−1)^{|x|+1}
        lhs = apply(dv, extended_pairing(x, y))
        return lhs - extended_pairing(apply(dh, x), y) - extended_pairing(x, apply(dv, y)) * sign

    def intertwine_v(rng):
        x = nz(rng, lambda: random_element(Wpp, rng.randint(0, 2), 1, rng))
        if x.is_zero():
            return Wp.zero()
        lhs = commutator(dv, ctr_h(x))
        dx = apply(dh, x)
        return lhs - ctr_h(dx) if not dx.is_zero() else lhs

    def intertwine_h(rng):
        y = nz(rng, lambda: random_element(Wp, 1, rng.randint(0, 2), rng))
        if y.is_zero():
            return Wpp.zero()
        lhs = commutator(dh, ctr_v(y))
        dy = apply(dv, y)
        return lhs - ctr_v(dy) if not dy.is_zero() else lhs

    def anti(rng):
        x = random_element(W, rng.randint(0, 2), rng.randint(0, 2), rng)
        y = random_element(W, rng.randint(0, 2), rng.randint(0, 2), rng)
        s = -1 if (x.parity and y.parity) else 1
        return g(x, y) + g(y, x) * s

    def jac(rng):
        x, y, z = (random_element(W, rng.randint(0, 2), rng.randint(0, 2), rng) for _ in range(3))
        return jacobi_defect(g, x, y, z)

    def leibniz(rng, d):
        x = random_element(d.algebra, rng.randint(0, 2), rng.randint(0, 2), rng)
        y = random_element(d.algebra, rng.randint(0, 2), rng.randint(0, 2), rng)
        s = -1 if (d.parity and x.parity) else 1
        return apply(d, x * y) - apply(d, x) * y - x * apply(d, y) * s

    return {
        "derived_bracket_vertical": derived_v,
        "derived_bracket_horizontal": derived_h,
        "double_commutator_vertical": lambda r: double_commutator(r, "v"),
        "double_commutator_horizontal": lambda r: double_commutator(r, "h"),
        "double_contraction_of_d_h": double_contraction,
        "pairing_leibniz": pairing_leibniz,
        "d_v_intertwines_contraction_h": intertwine_v,
        "d_h_intertwines_contraction_v": intertwine_h,
        "bracket_antisymmetry": anti,
        "bracket_jacobi": jac,
        "leibniz_d_v": lambda r: leibniz(r, dv),
        "leibniz_d_h": lambda r: leibniz(r, dh),
    }


def cartan_suite(ops: RoleOperators, trials: int = 200, seed: int = 0, workers: int | None = None) -> SuiteReport:
    """Evaluate every identity on `trials` random tuples; all residuals must vanish."""
    from .parallel import parallel_map

    idents = cartan_identities(ops)
    names = sorted(idents)
    jobs = [(name, t) for name in names for t in range(trials)]

    def run(job):
        name, t = job
        rng = random.Random(seed * 1_000_003 + t * 7919 + names.index(name))
        return _size(idents[name](rng))

    sizes = parallel_map(run, jobs, workers)
    max_defect = {n: Fraction(0) for n in names}
    failures = {n: 0 for n in names}
    if is_differential(ops.d_v) is False:
        failures["square_zero_d_v"] = 1
    if is_differential(ops.d_h) is False:
        failures["square_zero_d_h"] = 1
    failures.setdefault("square_zero_d_v", 0)
    failures.setdefault("square_zero_d_h", 0)
    for (name, _), s in zip(jobs, sizes):
        if s:
            failures[name] += 1
            max_defect[name] = max(max_defect[name], s)
    return SuiteReport(trials, seed, max_defect, failures)
