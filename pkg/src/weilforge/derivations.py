"""Superderivations of a Weil algebra, stored by their generator images."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .weil_core import (
    format_element,
    format_monomial,
    monomial_product,
    HatElement,
    Monomial,
    Role,
    Scalar,
    WeilAlgebra,
    WeilElement,
    hat_pairing,
    third_vector_to_element,
)

GeneratorKey = tuple[str, int]


_GEN_BIDEGREE = {"first": (1, 0), "second": (0, 1), "even": (1, 1)}


def generator_bidegree(key: GeneratorKey) -> tuple[int, int]:
    return _GEN_BIDEGREE[key[0]]


class Derivation:
    """A superderivation of bidegree (r, s); missing images are zero."""

    __slots__ = ("algebra", "bidegree", "images")

    def __init__(self, algebra: WeilAlgebra, bidegree: tuple[int, int],
                 images: Mapping[GeneratorKey, WeilElement]):
        r, s = bidegree
        clean = {}
        for key, img in images.items():
            if img.algebra is not algebra and img.algebra != algebra:
                raise ValueError("derivation image lives in a different algebra")
            if not img.terms:
                continue
            p, q = _GEN_BIDEGREE[key[0]]
            if any(m.bidegree != (p + r, q + s) for m in img.terms):
                raise ValueError(
                    f"image of {key} has bidegrees {sorted(img.bidegrees())}, expected {(p + r, q + s)}")
            clean[key] = img
        self.algebra = algebra
        self.bidegree = (r, s)
        self.images = clean

    @property
    def parity(self) -> int:
        return (self.bidegree[0] + self.bidegree[1]) & 1

    def image(self, key: GeneratorKey) -> WeilElement:
        return self.images.get(key) or self.algebra.zero()

    def is_zero(self) -> bool:
        return not self.images

    def __call__(self, x: WeilElement) -> WeilElement:
        return apply(self, x)

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return (self.algebra == other.algebra and self.images == other.images
                and (self.bidegree == other.bidegree or not self.images))

    def __add__(self, other: "Derivation") -> "Derivation":
        if other.bidegree != self.bidegree and other.images and self.images:
            raise ValueError("cannot add derivations of different bidegree")
        bd = self.bidegree if self.images else other.bidegree
        keys = set(self.images) | set(other.images)
        return Derivation(self.algebra, bd, {k: self.image(k) + other.image(k) for k in keys})

    def __neg__(self) -> "Derivation":
        return self * -1

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self + (-other)

    def __mul__(self, c: Scalar) -> "Derivation":
        return Derivation(self.algebra, self.bidegree, {k: v * c for k, v in self.images.items()})

    __rmul__ = __mul__

    def table(self) -> dict[str, str]:
        """Printed image of every generator, keyed by the generator's printed name."""
        alg = self.algebra
        out = {}
        for key in alg.generators():
            (m,) = alg.generator(key).terms
            out[format_monomial(m, alg.role)] = format_element(self.image(key))
        return out

    def __repr__(self) -> str:
        body = ", ".join(f"{k[0]}{k[1] + 1}↦{v!r}" for k, v in sorted(self.images.items()))
        return f"Derivation{self.bidegree}({body})"


def zero_derivation(algebra: WeilAlgebra, bidegree: tuple[int, int]) -> Derivation:
    return Derivation(algebra, bidegree, {})


def apply(delta: Derivation, x: WeilElement) -> WeilElement:
    """Graded Leibniz extension, walking each monomial in canonical order."""
    alg = delta.algebra
    if x.algebra is not alg and x.algebra != alg:
        raise ValueError(f"cannot apply a derivation of {alg} to an element of {x.algebra}")
    if not delta.images:
        return alg.zero()
    par = delta.parity
    z = alg.zero_even()
    total: dict[Monomial, Fraction] = {}

    def acc(pre: Monomial, img: WeilElement, post: Monomial, coeff: Fraction) -> None:
        for mi, ci in img.terms.items():
            s1, m1 = monomial_product(pre, mi)
            if not s1:
                continue
            s2, m2 = monomial_product(m1, post)
            if not s2:
                continue
            v = ci * coeff
            total[m2] = total.get(m2, 0) + (v if s1 == s2 else -v)

    for m, c in x.terms.items():
        nf = len(m.first)
        n_odd = nf + len(m.second)
        for t in range(n_odd):
            key = ("first", m.first[t]) if t < nf else ("second", m.second[t - nf])
            img = delta.images.get(key)
            if img is None:
                continue
            if t < nf:
                pre = Monomial(m.first[:t], (), z)
                post = Monomial(m.first[t + 1:], m.second, m.even)
            else:
                pre = Monomial(m.first, m.second[:t - nf], z)
                post = Monomial((), m.second[t - nf + 1:], m.even)
            acc(pre, img, post, -c if (par and t & 1) else c)
        sign_even = -1 if (par and n_odd & 1) else 1
        for k, e in enumerate(m.even):
            if not e:
                continue
            img = delta.images.get(("even", k))
            if img is None:
                continue
            rest = list(m.even)
            rest[k] -= 1
            pre = Monomial(m.first, m.second, z)
            post = Monomial((), (), tuple(rest))
            acc(pre, img, post, c * sign_even * e)
    return WeilElement(alg, total)


def commutator(d1: Derivation, d2: Derivation) -> Derivation:
    """Graded commutator d1∘d2 − (−1)^{|d1||d2|} d2∘d1, evaluated on generators."""
    if d1.algebra != d2.algebra:
        raise ValueError("derivations act on different algebras")
    alg = d1.algebra
    sign = -1 if (d1.parity and d2.parity) else 1
    bd = (d1.bidegree[0] + d2.bidegree[0], d1.bidegree[1] + d2.bidegree[1])
    images = {}
    for key in alg.generators():
        g = alg.generator(key)
        img = apply(d1, apply(d2, g)) - apply(d2, apply(d1, g)) * sign
        images[key] = img
    return Derivation(alg, bd, images)


def operator_commutator(d1: Derivation, d2: Derivation, x: WeilElement) -> WeilElement:
    """The same commutator applied operationally to an arbitrary element."""
    sign = -1 if (d1.parity and d2.parity) else 1
    return apply(d1, apply(d2, x)) - apply(d2, apply(d1, x)) * sign


def left_multiply(lam: WeilElement, delta: Derivation) -> Derivation:
    """Module action (λ·δ)(z) = λ·δ(z)."""
    if lam.is_zero():
        return zero_derivation(delta.algebra, delta.bidegree)
    p, q = lam.bidegree
    bd = (delta.bidegree[0] + p, delta.bidegree[1] + q)
    return Derivation(delta.algebra, bd, {k: lam * v for k, v in delta.images.items()})


def is_differential(delta: Derivation) -> bool:
    """δ∘δ = 0, checked on generators (equivalently [δ,δ] = 0 for odd δ)."""
    alg = delta.algebra
    return all(apply(delta, apply(delta, alg.generator(k))).is_zero() for k in alg.generators())


# -- contraction operators -------------------------------------------------

def _unit_hat(alg: WeilAlgebra, k: int) -> HatElement:
    n3 = alg.dims[2]
    v = [0] * n3
    v[k] = 1
    return HatElement(alg.shape, alg.role, tuple((0,) * alg.dims[1] for _ in range(alg.dims[0])), v)


def contraction_h(a_hat: HatElement) -> Derivation:
    """Horizontal contraction on W(r) by an element of the hat space of r'.

    first_i ↦ a_i, second ↦ 0, even_k ↦ ⟨â, e_k⟩ (a second-family element).
    """
    role = a_hat.role.prev
    alg = WeilAlgebra(a_hat.shape, role)
    n1, _, n3 = alg.dims
    images = {("first", i): alg.scalar(a_hat.vector[i]) for i in range(n1)}
    for k in range(n3):
        vec = hat_pairing(a_hat, _unit_hat(alg, k))
        images[("even", k)] = third_vector_to_element(vec, alg, "second")
    return Derivation(alg, (-1, 0), images)


def contraction_v(b_hat: HatElement) -> Derivation:
    """Vertical contraction on W(r) by an element of the hat space of r''.

    first ↦ 0, second_j ↦ b_j, even_k ↦ ⟨e_k, b̂⟩ (a first-family element).
    """
    role = b_hat.role.next
    alg = WeilAlgebra(b_hat.shape, role)
    _, n2, n3 = alg.dims
    images = {("second", j): alg.scalar(b_hat.vector[j]) for j in range(n2)}
    for k in range(n3):
        vec = hat_pairing(_unit_hat(alg, k), b_hat)
        images[("even", k)] = third_vector_to_element(vec, alg, "first")
    return Derivation(alg, (0, -1), images)


def contraction_core(alg: WeilAlgebra, eps: Sequence[Scalar]) -> Derivation:
    """Core contraction ι(ε): odd generators ↦ 0, even_k ↦ −ε_k."""
    n3 = alg.dims[2]
    if len(eps) != n3:
        raise ValueError(f"core covector must have length {n3}")
    return Derivation(alg, (-1, -1), {("even", k): alg.scalar(-Fraction(eps[k])) for k in range(n3)})


def _unit(n: int, i: int) -> list[int]:
    v = [0] * n
    v[i] = 1
    return v


def extended_contraction_h(x: WeilElement, bidegree: tuple[int, int] | None = None) -> Derivation:
    """Left exterior-module extension of the horizontal contraction.

    x ∈ W^{s,1}(r') acts on W(r) with bidegree (−1, s−1): the first family of
    W(r') is the exterior algebra of second(r)*, which multiplies from the left.
    """
    role = x.role.prev
    alg = WeilAlgebra(x.shape, role)
    if x.is_zero():
        return zero_derivation(alg, bidegree or (-1, -1))
    s, one = x.bidegree
    if one != 1:
        raise ValueError(f"extended horizontal contraction needs bidegree (s,1), got {(s, one)}")
    n1, n2, n3 = alg.dims
    z = alg.zero_even()
    total: Derivation | None = None
    for m, c in x.terms.items():
        lam = alg.monomial(Monomial((), m.first, z), c)
        if m.second:
            base = contraction_core(alg, _unit(n3, m.second[0]))
        else:
            i = m.even.index(1)
            base = contraction_h(HatElement(x.shape, x.role, tuple((0,) * x.algebra.dims[1]
                                                                    for _ in range(x.algebra.dims[0])),
                                            _unit(x.algebra.dims[2], i)))
        term = left_multiply(lam, base)
        total = term if total is None else total + term
    return total


def extended_contraction_v(y: WeilElement, bidegree: tuple[int, int] | None = None) -> Derivation:
    """Left exterior-module extension of the vertical contraction.

    y ∈ W^{1,t}(r'') acts on W(r) with bidegree (t−1, −1). Canonical monomials
    ε·λ are rewritten as (−1)^{|λ|} λ·ε before the module action.
    """
    role = y.role.next
    alg = WeilAlgebra(y.shape, role)
    if y.is_zero():
        return zero_derivation(alg, bidegree or (-1, -1))
    one, t = y.bidegree
    if one != 1:
        raise ValueError(f"extended vertical contraction needs bidegree (1,t), got {(one, t)}")
    n1, n2, n3 = alg.dims
    z = alg.zero_even()
    yd = y.algebra.dims
    total: Derivation | None = None
    for m, c in y.terms.items():
        lam = alg.monomial(Monomial(m.second, (), z), c)
        if m.first:
            sign = -1 if len(m.second) & 1 else 1
            base = contraction_core(alg, _unit(n3, m.first[0])) * sign
        else:
            j = m.even.index(1)
            base = contraction_v(HatElement(y.shape, y.role, tuple((0,) * yd[1] for _ in range(yd[0])),
                                            _unit(yd[2], j)))
        term = left_multiply(lam, base)
        total = term if total is None else total + term
    return total


def contraction_role_h(alg: WeilAlgebra) -> Role:
    """Role of the algebra whose elements feed horizontal contractions on alg."""
    return alg.role.next


def contraction_role_v(alg: WeilAlgebra) -> Role:
    return alg.role.prev
