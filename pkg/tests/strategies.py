"""Hypothesis strategies for shapes, roles and sparse Weil elements."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from weilforge.weil_core import Role, Shape, WeilAlgebra, WeilElement

coefficients = st.sampled_from([1, -1, 2, -3, Fraction(1, 2), Fraction(-2, 3)]).map(Fraction)
roles = st.sampled_from(list(Role))


def shapes(max_dim: int = 2, min_dim: int = 0):
    d = st.integers(min_dim, max_dim)
    return st.builds(Shape, d, d, d)


@st.composite
def elements(draw, alg: WeilAlgebra, max_pq: int = 3, max_terms: int = 3, bidegree=None):
    """A bihomogeneous element (or zero) of alg."""
    p, q = bidegree if bidegree is not None else (draw(st.integers(0, max_pq)), draw(st.integers(0, max_pq)))
    basis = alg.basis(p, q)
    if not basis:
        return alg.zero()
    picks = draw(st.lists(st.sampled_from(basis), max_size=max_terms, unique=True))
    return WeilElement(alg, {m: draw(coefficients) for m in picks})


@st.composite
def algebras(draw, max_dim: int = 2):
    return WeilAlgebra(draw(shapes(max_dim)), draw(roles))
