"""Seeded random elements for property checks."""

from __future__ import annotations

import random
from fractions import Fraction

from .weil_core import WeilAlgebra, WeilElement

_COEFFS = [Fraction(n) for n in (-3, -2, -1, 1, 2, 3)] + [Fraction(1, 2), Fraction(-2, 3)]


def random_coefficient(rng: random.Random) -> Fraction:
    return rng.choice(_COEFFS)


def random_element(alg: WeilAlgebra, p: int, q: int, rng: random.Random, max_terms: int = 3) -> WeilElement:
    """A sparse random element of W^{p,q}; zero when that space is empty."""
    mons = alg.basis(p, q)
    if not mons:
        return alg.zero()
    k = rng.randint(1, min(max_terms, len(mons)))
    picked = rng.sample(range(len(mons)), k)
    return WeilElement(alg, {mons[i]: random_coefficient(rng) for i in sorted(picked)})


def random_vector(n: int, rng: random.Random, density: float = 0.7) -> list[Fraction]:
    return [random_coefficient(rng) if rng.random() < density else Fraction(0) for _ in range(n)]
