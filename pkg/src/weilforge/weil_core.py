"""Weil algebra of a split double vector space.

An element of W(role) is a sparse map from monomials to Fractions. A monomial
is a triple (first, second, even): two strictly increasing tuples of odd
generator indices and a multidegree over the even generators. Indices are
0-based internally and printed 1-based.
"""

from __future__ import annotations

import enum
import itertools
import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

MAX_DIM = 16

Scalar = int | Fraction


class Role(enum.Enum):
    D = "D"
    Dprime = "Dprime"
    Dprimeprime = "Dprimeprime"

    @property
    def next(self) -> "Role":
        return _NEXT[self]

    @property
    def prev(self) -> "Role":
        return _NEXT[_NEXT[self]]

    @property
    def spaces(self) -> tuple[str, str, str]:
        """Names of the (first, second, third) spaces of W(role)."""
        return _SPACES[self]

    @property
    def label(self) -> str:
        return {"D": "D", "Dprime": "D'", "Dprimeprime": "D''"}[self.value]

    @classmethod
    def parse(cls, text: str) -> "Role":
        key = text.strip().replace("′", "'").replace("″", "''")
        aliases = {"D": cls.D, "D'": cls.Dprime, "Dprime": cls.Dprime,
                   "D''": cls.Dprimeprime, "Dprimeprime": cls.Dprimeprime}
        if key not in aliases:
            raise ValueError(f"unknown role {text!r}")
        return aliases[key]


_NEXT = {Role.D: Role.Dprime, Role.Dprime: Role.Dprimeprime, Role.Dprimeprime: Role.D}
_SPACES = {Role.D: ("A", "B", "E"), Role.Dprime: ("B", "E", "A"), Role.Dprimeprime: ("E", "A", "B")}

# Printed generator names per space: dual-space generators are odd, the third
# space contributes even generators named after the space itself.
_ODD_NAME = {"A": "α", "B": "β", "E": "ε"}
_EVEN_NAME = {"A": "a", "B": "b", "E": "c"}


@dataclass(frozen=True)
class Shape:
    nA: int
    nB: int
    nE: int

    def __post_init__(self):
        for name in ("nA", "nB", "nE"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")
            if v > MAX_DIM:
                raise ValueError(f"{name}={v} exceeds the dimension guardrail {MAX_DIM}")

    def dim(self, space: str) -> int:
        return {"A": self.nA, "B": self.nB, "E": self.nE}[space]

    def dims(self, role: Role) -> tuple[int, int, int]:
        return _shape_dims(self, role)

    def flip(self) -> "Shape":
        return Shape(self.nB, self.nA, self.nE)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.nA, self.nB, self.nE)


class Monomial(NamedTuple):
    first: tuple[int, ...]
    second: tuple[int, ...]
    even: tuple[int, ...]

    @property
    def bidegree(self) -> tuple[int, int]:
        k = sum(self.even)
        return (len(self.first) + k, len(self.second) + k)

    @property
    def degree(self) -> int:
        p, q = self.bidegree
        return p + q

    @property
    def parity(self) -> int:
        return (len(self.first) + len(self.second)) & 1


def _count_greater(a: Sequence[int], b: Sequence[int]) -> int:
    """Number of pairs (i in a, j in b) with i > j; b sorted."""
    return sum(bisect_left(b, i) for i in a)


def _merge(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...] | None:
    if not a:
        return b
    if not b:
        return a
    s = set(a)
    if s.intersection(b):
        return None
    return tuple(sorted(s.union(b)))


@lru_cache(maxsize=1 << 18)
def monomial_product(x: Monomial, y: Monomial) -> tuple[int, Monomial | None]:
    """Sign and canonical monomial of x*y (sign 0 when an odd generator repeats)."""
    f = _merge(x.first, y.first)
    if f is None:
        return 0, None
    s = _merge(x.second, y.second)
    if s is None:
        return 0, None
    inv = (_count_greater(x.first, y.first) + len(x.second) * len(y.first)
           + _count_greater(x.second, y.second))
    even = tuple(i + j for i, j in zip(x.even, y.even)) if x.even else x.even
    return (-1 if inv & 1 else 1), Monomial(f, s, even)


@lru_cache(maxsize=None)
def _shape_dims(shape: "Shape", role: Role) -> tuple[int, int, int]:
    return tuple(shape.dim(s) for s in role.spaces)  # type: ignore[return-value]


def multichoose(n: int, k: int) -> int:
    if n == 0:
        return 1 if k == 0 else 0
    return math.comb(n + k - 1, k)


def basis_count(shape: Shape, role: Role, p: int, q: int) -> int:
    n1, n2, n3 = shape.dims(role)
    if p < 0 or q < 0:
        return 0
    return sum(math.comb(n1, p - k) * math.comb(n2, q - k) * multichoose(n3, k)
               for k in range(min(p, q) + 1))


def _multidegrees(n: int, k: int) -> list[tuple[int, ...]]:
    out = []
    for combo in itertools.combinations_with_replacement(range(n), k):
        v = [0] * n
        for i in combo:
            v[i] += 1
        out.append(tuple(v))
    return out


@lru_cache(maxsize=None)
def basis(shape: Shape, role: Role, p: int, q: int) -> tuple[Monomial, ...]:
    """All monomials of bidegree (p, q) in canonical order."""
    if p < 0 or q < 0:
        raise ValueError("bidegree components must be non-negative")
    n1, n2, n3 = shape.dims(role)
    out = []
    for k in range(min(p, q) + 1):
        if n3 == 0 and k > 0:
            break
        for f in itertools.combinations(range(n1), p - k):
            for s in itertools.combinations(range(n2), q - k):
                for e in _multidegrees(n3, k):
                    out.append(Monomial(f, s, e))
    out.sort()
    return tuple(out)


def _frac(c: Scalar) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


@dataclass(frozen=True)
class WeilAlgebra:
    """The split Weil algebra W(role) for a fixed shape."""

    shape: Shape
    role: Role

    @property
    def dims(self) -> tuple[int, int, int]:
        return _shape_dims(self.shape, self.role)

    def zero_even(self) -> tuple[int, ...]:
        return (0,) * _shape_dims(self.shape, self.role)[2]

    def zero(self) -> "WeilElement":
        return WeilElement(self, {})

    def unit(self) -> "WeilElement":
        return WeilElement(self, {Monomial((), (), self.zero_even()): Fraction(1)})

    def scalar(self, c: Scalar) -> "WeilElement":
        return self.unit() * c

    def first(self, i: int) -> "WeilElement":
        self._check(0, i)
        return WeilElement(self, {Monomial((i,), (), self.zero_even()): Fraction(1)})

    def second(self, j: int) -> "WeilElement":
        self._check(1, j)
        return WeilElement(self, {Monomial((), (j,), self.zero_even()): Fraction(1)})

    def even(self, k: int) -> "WeilElement":
        self._check(2, k)
        e = [0] * self.dims[2]
        e[k] = 1
        return WeilElement(self, {Monomial((), (), tuple(e)): Fraction(1)})

    def generators(self) -> list[tuple[str, int]]:
        n1, n2, n3 = self.dims
        return ([("first", i) for i in range(n1)] + [("second", j) for j in range(n2)]
                + [("even", k) for k in range(n3)])

    def generator(self, key: tuple[str, int]) -> "WeilElement":
        kind, i = key
        return getattr(self, kind)(i)

    def monomial(self, m: Monomial, coeff: Scalar = 1) -> "WeilElement":
        return WeilElement(self, {m: _frac(coeff)} if coeff else {})

    def basis(self, p: int, q: int) -> tuple[Monomial, ...]:
        return basis(self.shape, self.role, p, q)

    def from_vector(self, p: int, q: int, coeffs: Sequence[Scalar]) -> "WeilElement":
        mons = self.basis(p, q)
        if len(coeffs) != len(mons):
            raise ValueError("coefficient vector has the wrong length")
        return WeilElement(self, {m: _frac(c) for m, c in zip(mons, coeffs) if c})

    def odd_subspace(self, family: str, indices: Iterable[int]) -> "WeilElement":
        """Ordered product of odd generators of one family (a wedge monomial)."""
        idx = tuple(indices)
        srt = tuple(sorted(idx))
        if len(set(idx)) != len(idx):
            return self.zero()
        sign = _perm_sign(idx)
        m = Monomial(srt, (), self.zero_even()) if family == "first" else Monomial((), srt, self.zero_even())
        return WeilElement(self, {m: Fraction(sign)})

    def _check(self, family: int, i: int) -> None:
        if not 0 <= i < self.dims[family]:
            raise IndexError(f"generator index {i} out of range for {self}")

    def __str__(self) -> str:
        return f"W({self.role.label}) of shape {self.shape.as_tuple()}"


def _raw(algebra: WeilAlgebra, terms: dict) -> "WeilElement":
    """Wrap a freshly built dict, dropping cancelled terms in place."""
    el = object.__new__(WeilElement)
    object.__setattr__(el, "algebra", algebra)
    object.__setattr__(el, "terms", {m: c for m, c in terms.items() if c} if 0 in terms.values() else terms)
    return el


def _perm_sign(seq: Sequence[int]) -> int:
    inv = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
    return -1 if inv & 1 else 1


class WeilElement:
    """Immutable sparse element of a Weil algebra."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: WeilAlgebra, terms: Mapping[Monomial, Fraction]):
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "terms", {m: c for m, c in terms.items() if c})

    def __setattr__(self, key, value):
        raise AttributeError("WeilElement is immutable")

    # -- structure ---------------------------------------------------------
    @property
    def shape(self) -> Shape:
        return self.algebra.shape

    @property
    def role(self) -> Role:
        return self.algebra.role

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def bidegrees(self) -> set[tuple[int, int]]:
        return {m.bidegree for m in self.terms}

    @property
    def bidegree(self) -> tuple[int, int]:
        bds = self.bidegrees()
        if len(bds) != 1:
            raise ValueError(f"element is not bihomogeneous: {sorted(bds)}")
        return next(iter(bds))

    @property
    def parity(self) -> int:
        ps = {m.parity for m in self.terms}
        if len(ps) > 1:
            raise ValueError("element has mixed parity")
        return ps.pop() if ps else 0

    def component(self, p: int, q: int) -> "WeilElement":
        return WeilElement(self.algebra, {m: c for m, c in self.terms.items() if m.bidegree == (p, q)})

    def parity_parts(self) -> list["WeilElement"]:
        parts = []
        for par in (0, 1):
            t = {m: c for m, c in self.terms.items() if m.parity == par}
            if t:
                parts.append(WeilElement(self.algebra, t))
        return parts

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def to_vector(self, p: int, q: int) -> list[Fraction]:
        if any(m.bidegree != (p, q) for m in self.terms):
            raise ValueError(f"element has components outside bidegree {(p, q)}")
        return [self.coefficient(m) for m in self.algebra.basis(p, q)]

    # -- arithmetic --------------------------------------------------------
    def _same(self, other: "WeilElement") -> None:
        if self.algebra is not other.algebra and self.algebra != other.algebra:
            raise ValueError(f"algebra mismatch: {self.algebra} vs {other.algebra}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.algebra.scalar(other)
        self._same(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return _raw(self.algebra, t)

    __radd__ = __add__

    def __neg__(self):
        return _raw(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            return WeilElement(self.algebra, {m: v * c for m, v in self.terms.items()})
        self._same(other)
        t: dict[Monomial, Fraction] = {}
        for mx, cx in self.terms.items():
            for my, cy in other.terms.items():
                sign, m = monomial_product(mx, my)
                if sign:
                    t[m] = t.get(m, 0) + (cx * cy if sign > 0 else -cx * cy)
        return _raw(self.algebra, t)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.algebra.scalar(other)
        if not isinstance(other, WeilElement):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash((self.algebra, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"WeilElement<{self.role.label}>({format_element(self)})"


def multiply(x: WeilElement, y: WeilElement) -> WeilElement:
    return x * y


def format_monomial(m: Monomial, role: Role) -> str:
    s1, s2, s3 = role.spaces
    parts = [f"{_ODD_NAME[s1]}{i + 1}" for i in m.first]
    parts += [f"{_ODD_NAME[s2]}{j + 1}" for j in m.second]
    for k, e in enumerate(m.even):
        if e == 1:
            parts.append(f"{_EVEN_NAME[s3]}{k + 1}")
        elif e > 1:
            parts.append(f"{_EVEN_NAME[s3]}{k + 1}^{e}")
    return "·".join(parts) if parts else "1"


def format_element(x: WeilElement) -> str:
    if not x.terms:
        return "0"
    out = []
    for m in sorted(x.terms):
        c = x.terms[m]
        mono = format_monomial(m, x.role)
        if mono == "1":
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        elif c == -1:
            out.append("-" + mono)
        else:
            out.append(f"{c}*{mono}")
    return " + ".join(out).replace("+ -", "- ")


# -- algebra maps ---------------------------------------------------------

def substitute(x: WeilElement, images: Callable[[tuple[str, int]], WeilElement],
               target: WeilAlgebra | None = None) -> WeilElement:
    """Apply the algebra morphism determined by generator images."""
    target = target or x.algebra
    cache: dict[tuple[str, int], WeilElement] = {}

    def img(key):
        if key not in cache:
            cache[key] = images(key)
        return cache[key]

    total = target.zero()
    for m, c in x.terms.items():
        acc = target.unit() * c
        for i in m.first:
            acc = acc * img(("first", i))
        for j in m.second:
            acc = acc * img(("second", j))
        for k, e in enumerate(m.even):
            for _ in range(e):
                acc = acc * img(("even", k))
        total = total + acc
    return total


def transfer_odd(x: WeilElement, target: WeilAlgebra, source_family: str, target_family: str) -> WeilElement:
    """Move an element supported on one odd family into another algebra's odd family."""
    t = {}
    for m, c in x.terms.items():
        other = m.second if source_family == "first" else m.first
        if other or any(m.even):
            raise ValueError("element is not supported on a single odd family")
        idx = m.first if source_family == "first" else m.second
        nm = (Monomial(idx, (), target.zero_even()) if target_family == "first"
              else Monomial((), idx, target.zero_even()))
        t[nm] = c
    return WeilElement(target, t)


# -- hat spaces -------------------------------------------------------------

Matrix = tuple[tuple[Fraction, ...], ...]


def _as_matrix(rows, n: int, m: int) -> Matrix:
    mat = tuple(tuple(_frac(v) for v in row) for row in rows)
    if len(mat) != n or any(len(r) != m for r in mat):
        raise ValueError(f"expected a {n}x{m} matrix")
    return mat


@dataclass(frozen=True)
class HatElement:
    """Element of the split hat space (first*⊗second*) ⊕ third of a role.

    For role D this is Ê = (A*⊗B*) ⊕ E, for D' it is Â and for D'' it is B̂.
    """

    shape: Shape
    role: Role
    tensor: Matrix
    vector: tuple[Fraction, ...]

    def __post_init__(self):
        n1, n2, n3 = self.shape.dims(self.role)
        object.__setattr__(self, "tensor", _as_matrix(self.tensor, n1, n2))
        vec = tuple(_frac(v) for v in self.vector)
        if len(vec) != n3:
            raise ValueError(f"vector part must have length {n3}")
        object.__setattr__(self, "vector", vec)

    @classmethod
    def zero(cls, shape: Shape, role: Role) -> "HatElement":
        n1, n2, n3 = shape.dims(role)
        return cls(shape, role, tuple((0,) * n2 for _ in range(n1)), (0,) * n3)

    @classmethod
    def basis(cls, shape: Shape, role: Role) -> list["HatElement"]:
        """Tensor units (i, j) in row-major order, then vector units."""
        n1, n2, n3 = shape.dims(role)
        out = []
        for i in range(n1):
            for j in range(n2):
                t = [[0] * n2 for _ in range(n1)]
                t[i][j] = 1
                out.append(cls(shape, role, t, (0,) * n3))
        for k in range(n3):
            v = [0] * n3
            v[k] = 1
            out.append(cls(shape, role, tuple((0,) * n2 for _ in range(n1)), v))
        return out

    def coords(self) -> list[Fraction]:
        return [c for row in self.tensor for c in row] + list(self.vector)

    @classmethod
    def from_coords(cls, shape: Shape, role: Role, coords: Sequence[Scalar]) -> "HatElement":
        n1, n2, n3 = shape.dims(role)
        if len(coords) != n1 * n2 + n3:
            raise ValueError("wrong number of hat coordinates")
        t = [list(coords[i * n2:(i + 1) * n2]) for i in range(n1)]
        return cls(shape, role, t, tuple(coords[n1 * n2:]))

    def __add__(self, other: "HatElement") -> "HatElement":
        return HatElement.from_coords(self.shape, self.role, [a + b for a, b in zip(self.coords(), other.coords())])

    def __mul__(self, c: Scalar) -> "HatElement":
        return HatElement.from_coords(self.shape, self.role, [a * c for a in self.coords()])

    __rmul__ = __mul__

    def __neg__(self) -> "HatElement":
        return self * -1


def embed(h: HatElement) -> WeilElement:
    """The bidegree (1,1) element Σ ρ_ij·first_i·second_j + Σ v_k·even_k."""
    alg = WeilAlgebra(h.shape, h.role)
    n1, n2, n3 = alg.dims
    t: dict[Monomial, Fraction] = {}
    z = alg.zero_even()
    for i in range(n1):
        for j in range(n2):
            if h.tensor[i][j]:
                t[Monomial((i,), (j,), z)] = h.tensor[i][j]
    for k in range(n3):
        if h.vector[k]:
            e = [0] * n3
            e[k] = 1
            t[Monomial((), (), tuple(e))] = h.vector[k]
    return WeilElement(alg, t)


def unembed(x: WeilElement) -> HatElement:
    """Inverse of embed on W^{1,1}."""
    n1, n2, n3 = x.algebra.dims
    t = [[Fraction(0)] * n2 for _ in range(n1)]
    v = [Fraction(0)] * n3
    for m, c in x.terms.items():
        if m.bidegree != (1, 1):
            raise ValueError("element is not of bidegree (1,1)")
        if m.first:
            t[m.first[0]][m.second[0]] += c
        else:
            v[m.even.index(1)] += c
    return HatElement(x.shape, x.role, t, v)


def hat_pairing(x: HatElement, y: HatElement) -> tuple[Fraction, ...]:
    """Pairing of cyclically adjacent hat spaces into the dual of a third space.

    With base role r, x lies in the hat space of r'' and y in that of r'; for
    r = D this is ⟨(ν,b),(μ,a)⟩ = μ(b) − ν(a) ∈ E*. The other two pairings are
    the cyclic relabelings.
    """
    base = x.role.next
    if y.role is not base.next or x.shape != y.shape:
        raise ValueError(f"cannot pair hat spaces of roles {x.role.label} and {y.role.label}")
    n1, n2, n3 = x.shape.dims(base)
    nu, b = x.tensor, x.vector  # nu: n3 x n1, b: n2
    mu, a = y.tensor, y.vector  # mu: n2 x n3, a: n1
    return tuple(sum((mu[j][k] * b[j] for j in range(n2)), Fraction(0))
                 - sum((nu[k][i] * a[i] for i in range(n1)), Fraction(0))
                 for k in range(n3))


def pairing_base(x_role: Role) -> Role:
    """Base role r of the pairing whose left argument lives in W(r'')."""
    return x_role.next


def extended_pairing(x: WeilElement, y: WeilElement) -> WeilElement:
    """The ∧(third*)-valued pairing W^{p,1}(r'') × W^{1,q}(r') → W^{0,p+q-1}(r').

    Left-linear in x and right-linear in y over the exterior algebra of the
    third space of r; on module generators ⟨first*, third⟩ = −evaluation and
    ⟨second, second*⟩ = +evaluation. The value is returned inside W(r'), whose
    second odd family is that exterior algebra.
    """
    base = x.role.next
    if y.role is not base.next or x.shape != y.shape:
        raise ValueError("extended_pairing needs arguments in W(r'') and W(r')")
    out_alg = y.algebra
    z_out = out_alg.zero_even()
    total: dict[Monomial, Fraction] = {}
    x_parts = [_split_left_module(m, c, "x") for m, c in x.terms.items()]
    y_parts = [_split_left_module(m, c, "y") for m, c in y.terms.items()]
    for lam, gx, cx in x_parts:
        for gy, lam2, cy in y_parts:
            val = _generator_pairing(gx, gy)
            if not val:
                continue
            sign, m = monomial_product(Monomial((), lam, z_out), Monomial((), lam2, z_out))
            if sign:
                total[m] = total.get(m, 0) + sign * val * cx * cy
    return WeilElement(out_alg, total)


def _split_left_module(m: Monomial, c: Fraction, which: str):
    """Split a monomial into (exterior coefficient, module generator, coeff)."""
    if which == "x":
        # x in W(r''): first family = third*, second = first*, even = second
        if sum(m.even) + len(m.second) != 1 or (m.bidegree[1] != 1):
            raise ValueError(f"left argument must have bidegree (p,1), got {m.bidegree}")
        gen = ("odd", m.second[0]) if m.second else ("even", m.even.index(1))
        return m.first, gen, c
    # y in W(r'): first family = second*, second = third*, even = first
    if sum(m.even) + len(m.first) != 1 or m.bidegree[0] != 1:
        raise ValueError(f"right argument must have bidegree (1,q), got {m.bidegree}")
    gen = ("odd", m.first[0]) if m.first else ("even", m.even.index(1))
    return gen, m.second, c


def _generator_pairing(gx, gy) -> int:
    (kx, ix), (ky, iy) = gx, gy
    if kx == "odd" and ky == "even":
        return -1 if ix == iy else 0  # ⟨α, â⟩ = −α(a)
    if kx == "even" and ky == "odd":
        return 1 if ix == iy else 0  # ⟨b̂, β⟩ = β(b)
    return 0


# -- gauge action -----------------------------------------------------------

@dataclass(frozen=True)
class GaugeTensor:
    """ω ∈ first*⊗second*⊗third* of a role (for role D: A*⊗B*⊗E*)."""

    shape: Shape
    omega: tuple[tuple[tuple[Fraction, ...], ...], ...]
    role: Role = Role.D

    def __post_init__(self):
        n1, n2, n3 = self.shape.dims(self.role)
        om = tuple(tuple(tuple(_frac(v) for v in row) for row in plane) for plane in self.omega)
        if len(om) != n1 or any(len(p) != n2 for p in om) or any(len(r) != n3 for p in om for r in p):
            raise ValueError(f"gauge tensor must have dimensions {(n1, n2, n3)}")
        object.__setattr__(self, "omega", om)

    @classmethod
    def zero(cls, shape: Shape, role: Role = Role.D) -> "GaugeTensor":
        n1, n2, n3 = shape.dims(role)
        return cls(shape, tuple(tuple((0,) * n3 for _ in range(n2)) for _ in range(n1)), role)

    def __add__(self, other: "GaugeTensor") -> "GaugeTensor":
        return GaugeTensor(self.shape, tuple(
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(p1, p2))
            for p1, p2 in zip(self.omega, other.omega)), self.role)

    def __neg__(self) -> "GaugeTensor":
        return GaugeTensor(self.shape, tuple(tuple(tuple(-a for a in r) for r in p) for p in self.omega), self.role)


def gauge_automorphism(omega: GaugeTensor, x: WeilElement) -> WeilElement:
    """Splitting change: fixes odd generators, even_k ↦ even_k − Σ ω_ijk first_i second_j."""
    if x.role is not omega.role or x.shape != omega.shape:
        raise ValueError("gauge tensor does not match the element's algebra")
    alg = x.algebra
    n1, n2, _ = alg.dims

    def img(key):
        kind, k = key
        g = alg.generator(key)
        if kind != "even":
            return g
        corr = {Monomial((i,), (j,), alg.zero_even()): omega.omega[i][j][k]
                for i in range(n1) for j in range(n2) if omega.omega[i][j][k]}
        return g - WeilElement(alg, corr)

    return substitute(x, img)


def gauge_hat(omega: GaugeTensor, h: HatElement) -> HatElement:
    """Action on the hat space: (ν, e) ↦ (ν − ω(e), e)."""
    return unembed(gauge_automorphism(omega, embed(h)))


# -- flip and minus on hat data ---------------------------------------------

def flip_role(role: Role) -> Role:
    """Role correspondence under flip(D): D stays, D' and D'' trade places."""
    return {Role.D: Role.D, Role.Dprime: Role.Dprimeprime, Role.Dprimeprime: Role.Dprime}[role]


def flip_hat(h: HatElement) -> HatElement:
    """Transport a hat element to the flipped double vector space (tensor transposed)."""
    shape = h.shape.flip()
    n1, n2, _ = h.shape.dims(h.role)
    t = [[h.tensor[i][j] for i in range(n1)] for j in range(n2)]
    return HatElement(shape, flip_role(h.role), t, h.vector)


def minus_hat(h: HatElement) -> HatElement:
    """Identification of hat spaces of D⁻ with those of D: (ν, c) ↦ (−ν, c)."""
    return HatElement(h.shape, h.role, [[-v for v in row] for row in h.tensor], h.vector)


def third_vector_to_element(vec: Sequence[Scalar], alg: WeilAlgebra, family: str) -> WeilElement:
    """Interpret a coefficient vector as a linear combination of one odd family."""
    z = alg.zero_even()
    t = {}
    for i, c in enumerate(vec):
        if c:
            t[Monomial((i,), (), z) if family == "first" else Monomial((), (i,), z)] = _frac(c)
    return WeilElement(alg, t)
