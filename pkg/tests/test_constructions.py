import itertools
import json
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import ce_differential_matrix, lie_jacobi_defects, matched_pair_ambient

from weilforge import constructions as C
from weilforge.cohomology import matrix_of
from weilforge.derivations import apply, extended_contraction_v
from weilforge.structures import (
    StructureData,
    assemble_double,
    build_d_v,
    build_gerstenhaber,
    cartan_suite,
    check_double_lie_algebroid,
    role_operators,
    validate,
)
from weilforge.weil_core import Role, Shape, WeilAlgebra

GOLDEN = Path(__file__).parent / "golden"
NAMES = sorted(C.LIE_ALGEBRAS)


def golden(name):
    return json.loads((GOLDEN / name).read_text())


# -- Lie algebras ---------------------------------------------------------------

@pytest.mark.parametrize("name", NAMES)
def test_named_algebras_satisfy_jacobi(name):
    g = C.lie_algebra_by_name(name)
    assert g.defects() == [] and lie_jacobi_defects(g.c) == 0


def test_invalid_algebra_rejected():
    bad = C.lie_algebra(3, {(0, 1): {0: 1}, (1, 2): {1: 1}})
    assert lie_jacobi_defects(bad.c) > 0 and bad.defects()
    with pytest.raises(ValueError):
        C.tangent_double(bad)
    with pytest.raises(ValueError):
        C.lie_algebra_by_name("e8")


def test_adjoint_is_a_representation():
    for name in NAMES:
        g = C.lie_algebra_by_name(name)
        assert C.is_representation(g, g.adjoint())
    assert C.is_representation(C.sl2(), C.standard_sl2_rep())


# -- tangent doubles ---------------------------------------------------------------

@pytest.mark.parametrize("name", NAMES)
def test_tangent_double_matches_golden(name):
    ops = assemble_double(C.tangent_double(C.lie_algebra_by_name(name)))
    assert {"d_h": ops.d_h.table(), "d_v": ops.d_v.table()} == golden("tangent_doubles.json")[name]


@pytest.mark.parametrize("name", NAMES)
def test_tangent_double_is_a_double_lie_algebroid(name):
    inp = C.tangent_double(C.lie_algebra_by_name(name))
    assert validate(inp.data_h).valid and validate(inp.data_v).valid
    rep = check_double_lie_algebroid(inp, samples=3)
    assert rep.compatible and rep.lemma_holds
    for data in (inp.data_h, inp.data_v):
        assert cartan_suite(role_operators(data), trials=15).passed


@pytest.mark.parametrize("name", NAMES)
def test_horizontal_differential_is_chevalley_eilenberg(name):
    g = C.lie_algebra_by_name(name)
    ops = assemble_double(C.tangent_double(g))
    for k in range(g.dim):
        mat = matrix_of(ops.d_h, k, 0)
        oracle, _, _ = ce_differential_matrix(g.c, k)
        assert [list(r) for r in mat.rows] == oracle


def test_abelian_line_tangent_double():
    ops = assemble_double(C.tangent_double(C.abelian(1)))
    W = ops.d_h.algebra
    assert ops.d_h.is_zero()
    assert apply(ops.d_v, W.first(0)) == W.even(0)


# -- matched pairs -----------------------------------------------------------------

def splittings():
    for name in NAMES:
        g = C.lie_algebra_by_name(name)
        for r in range(1, g.dim):
            for first in itertools.combinations(range(g.dim), r):
                second = [k for k in range(g.dim) if k not in first]
                try:
                    yield name, C.matched_pair_from_splitting(g, list(first), second)
                except ValueError:
                    continue


SPLITS = list(splittings())


def is_matched_pair(mp):
    return lie_jacobi_defects(matched_pair_ambient(mp.alg_a.c, mp.alg_b.c, mp.action_a_on_b, mp.action_b_on_a)) == 0


def test_every_subalgebra_splitting_is_compatible():
    assert len(SPLITS) >= 10
    for _, mp in SPLITS:
        assert is_matched_pair(mp)
        rep = check_double_lie_algebroid(C.matched_pair(mp), samples=2)
        assert rep.compatible and rep.lemma_holds


def test_sl2_matched_pair_matches_golden():
    ops = assemble_double(C.matched_pair(C.sl2_matched_pair()))
    assert {"d_h": ops.d_h.table(), "d_v": ops.d_v.table()} == golden("matched_sl2.json")


def test_horizontal_differential_on_first_exterior_algebra_is_ce():
    for _, mp in SPLITS:
        ops = assemble_double(C.matched_pair(mp))
        for k in range(mp.alg_a.dim):
            mat = matrix_of(ops.d_h, k, 0)
            oracle, _, _ = ce_differential_matrix(mp.alg_a.c, k)
            assert [list(r) for r in mat.rows] == oracle


def test_abelian_product_with_zero_actions_is_compatible():
    mp = C.MatchedPairData(C.abelian(2), C.abelian(1), [[[0]], [[0]]], [[[0, 0], [0, 0]]])
    assert check_double_lie_algebroid(C.matched_pair(mp), samples=2).compatible


def _valid_mutants():
    for name, mp in SPLITS:
        for which, idx in mp.entries():
            m = mp.mutated(which, idx)
            inp = C.matched_pair(m)
            if validate(inp.data_h).valid and validate(inp.data_v).valid:
                yield name, which, idx, m, inp


def test_single_entry_mutations_follow_the_ambient_jacobi_oracle():
    """Exhaustive single-entry mutation: compatible exactly when A⊕B is still a Lie algebra."""
    seen = 0
    for name, which, idx, m, inp in _valid_mutants():
        rep = check_double_lie_algebroid(inp, samples=1)
        assert rep.agree and rep.lemma_holds
        assert rep.compatible == is_matched_pair(m), (name, which, idx)
        seen += 1
    assert seen > 20


def test_some_single_entry_mutations_remain_matched_pairs():
    """Shifting f▷e or f▷h in sl2 = span(h,e) ⊕ span(f) yields another matched pair."""
    mp = C.sl2_matched_pair()
    for idx in [(0, 0, 1), (0, 1, 0)]:
        m = mp.mutated("b_on_a", idx)
        assert is_matched_pair(m)
        assert check_double_lie_algebroid(C.matched_pair(m), samples=1).compatible


def test_mutation_breaking_representation_is_invalid():
    m = C.sl2_matched_pair().mutated("a_on_b", (1, 0, 0))
    assert "representation-first" in validate(C.matched_pair(m).data_h).conditions()


# -- vacant pairings and semidirect products ----------------------------------------

def test_zero_pairing_gives_abelian_data():
    assert C.vacant_pairing(2, 3, [[0] * 3] * 2) == StructureData.zero(Shape(2, 3, 0), Role.D)


def test_line_pairing_has_zero_hat_bracket():
    data = C.vacant_pairing(1, 1, [[1]])
    assert all(v == 0 for m in data.bracket for r in m for v in r)


def test_vacant_hat_bracket_formula():
    """[α1β1, α2β2] = (α1,β2)α2β1 − (α2,β1)α1β2 on the tensor part."""
    P = [[Fraction(2), Fraction(5)], [Fraction(-1), Fraction(3)]]
    data = C.vacant_pairing(2, 2, P)
    g = build_gerstenhaber(data)
    W = g.algebra
    for (i, j), (k, l) in itertools.product(itertools.product(range(2), repeat=2), repeat=2):
        x, y = W.first(i) * W.second(j), W.first(k) * W.second(l)
        expected = W.first(k) * W.second(j) * P[i][l] - W.first(i) * W.second(l) * P[k][j]
        assert g(x, y) == expected


def test_random_pairings_validate():
    rng = random.Random(55)
    for _ in range(100):
        nA, nB = rng.randint(0, 3), rng.randint(0, 3)
        P = [[rng.choice([0, 1, -1, 2, Fraction(1, 3)]) for _ in range(nB)] for _ in range(nA)]
        assert validate(C.vacant_pairing(nA, nB, P)).valid


def test_trivial_semidirect_is_a_product():
    data = C.semidirect(2, C.sl2(), [[[0, 0], [0, 0]]] * 3)
    assert validate(data).valid
    assert all(v == 0 for m in data.rep_second for r in m for v in r)


def test_semidirect_scaling_slot():
    """ι'_v(c) d'_v β = ∇_e β = −λβ for E = span(e) acting on B by λ."""
    lam = Fraction(3)
    data = C.semidirect(1, C.abelian(1), [[[lam]]])
    dv = build_d_v(data)
    Wp = dv.algebra
    assert apply(dv, Wp.first(0)) == Wp.first(0) * Wp.second(0) * lam
    W = WeilAlgebra(data.shape, Role.D)
    assert apply(extended_contraction_v(W.even(0)), apply(dv, Wp.first(0))) == Wp.first(0) * -lam


def test_semidirect_sl2_standard_rep():
    data = C.semidirect(2, C.sl2(), C.standard_sl2_rep())
    assert validate(data).valid
    assert cartan_suite(role_operators(data), trials=40).passed


def test_semidirect_rejects_non_representation():
    with pytest.raises(ValueError):
        C.semidirect(2, C.sl2(), [[[1, 0], [0, 1]]] * 3)


# -- random data -------------------------------------------------------------------

@settings(max_examples=60)
@given(st.integers(0, 10_000), st.tuples(*(st.integers(0, 3),) * 3), st.sampled_from(list(Role)))
def test_random_structure_data_validates(seed, dims, role):
    assert validate(C.random_structure_data(Shape(*dims), role, random.Random(seed))).valid


def test_random_invertible_is_invertible():
    rng = random.Random(9)
    for n in range(1, 5):
        M = C.random_invertible(n, rng)
        from oracles import sympy_rank

        assert sympy_rank(M, n) == n
