"""Acceptance criteria, one printed PASS/FAIL line each.

Run directly (``python3 tests/test_acceptance.py``) or through pytest; the
lines are repeated in the pytest terminal summary.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import record  # noqa: E402
from oracles import bidegree_buckets, ce_betti, lie_jacobi_defects, matched_pair_ambient  # noqa: E402

from weilforge import constructions as C  # noqa: E402
from weilforge.cohomology import bigraded_cohomology, total_cohomology  # noqa: E402
from weilforge.derivations import (  # noqa: E402
    Derivation,
    apply,
    commutator,
    contraction_core,
    contraction_h,
    contraction_v,
)
from weilforge.sampling import random_element, random_vector  # noqa: E402
from weilforge.structures import (  # noqa: E402
    assemble_double,
    cartan_suite,
    check_double_lie_algebroid,
    core_lie_algebroid,
    extract_homotopy_representation,
    is_differential,
    lie_jacobi_ok,
    rebuild_structure_data,
    role_operators,
    validate,
)
from weilforge.weil_core import (  # noqa: E402
    GaugeTensor,
    HatElement,
    Monomial,
    Role,
    Shape,
    WeilAlgebra,
    basis_count,
    gauge_automorphism,
    hat_pairing,
)


def _hat(shape, role, rng):
    n1, n2, n3 = shape.dims(role)
    return HatElement.from_coords(shape, role, random_vector(n1 * n2 + n3, rng))


def _is_zero(d: Derivation) -> bool:
    return d.is_zero()


# -- 1 -----------------------------------------------------------------------

def criterion_1():
    """Contraction commutation table on W(D), with the literal sign for [ι_v, ι_h]."""
    rng = random.Random(101)
    literal_bad = other_bad = total = 0
    for dims in ((1, 1, 1), (2, 2, 2), (3, 3, 3)):
        shape = Shape(*dims)
        alg = WeilAlgebra(shape, Role.D)
        for _ in range(200):
            a1, a2 = _hat(shape, Role.Dprime, rng), _hat(shape, Role.Dprime, rng)
            b1, b2 = _hat(shape, Role.Dprimeprime, rng), _hat(shape, Role.Dprimeprime, rng)
            e1, e2 = random_vector(shape.nE, rng), random_vector(shape.nE, rng)
            ih1, ih2 = contraction_h(a1), contraction_h(a2)
            iv1, iv2 = contraction_v(b1), contraction_v(b2)
            ic1, ic2 = contraction_core(alg, e1), contraction_core(alg, e2)
            zeros = [commutator(ih1, ih2), commutator(iv1, iv2), commutator(ic1, ic2),
                     commutator(ih1, ic1), commutator(iv1, ic1)]
            other_bad += sum(not z.is_zero() for z in zeros)
            literal = contraction_core(alg, [-v for v in hat_pairing(b1, a1)])
            literal_bad += commutator(iv1, ih1) != literal
            total += 1
    ok = literal_bad == 0 and other_bad == 0
    return ok, (f"{total} draws; vanishing commutators wrong in {other_bad}; "
                f"[iota_v, iota_h] = -iota(<b,a>) fails in {literal_bad}")


# -- 2 -----------------------------------------------------------------------

def criterion_2():
    rng = random.Random(202)
    shape = Shape(3, 3, 3)
    bad = 0
    for _ in range(500):
        a = _hat(shape, Role.Dprime, rng)        # vector part in A
        b = _hat(shape, Role.Dprimeprime, rng)   # vector part in B
        e = _hat(shape, Role.D, rng)             # vector part in E
        ev = lambda cov, vec: sum((x * y for x, y in zip(cov, vec)), Fraction(0))
        s = ev(hat_pairing(b, a), e.vector) + ev(hat_pairing(e, b), a.vector) + ev(hat_pairing(a, e), b.vector)
        bad += s != 0
    return bad == 0, f"500 split triples at (3,3,3), nonzero sums: {bad}"


# -- 3 -----------------------------------------------------------------------

def _random_gauge(shape, rng):
    n1, n2, n3 = shape.dims(Role.D)
    return GaugeTensor(shape, [[[rng.choice([0, 1, -1, 2, Fraction(1, 2)]) for _ in range(n3)]
                                for _ in range(n2)] for _ in range(n1)])


def criterion_3():
    rng = random.Random(303)
    shape = Shape(2, 2, 2)
    alg = WeilAlgebra(shape, Role.D)
    bad_comp = bad_mult = 0
    for _ in range(100):
        w1, w2 = _random_gauge(shape, rng), _random_gauge(shape, rng)
        x = random_element(alg, rng.randint(0, 3), rng.randint(0, 3), rng)
        y = random_element(alg, rng.randint(0, 3), rng.randint(0, 3), rng)
        lhs = gauge_automorphism(w1, gauge_automorphism(w2, x))
        bad_comp += lhs != gauge_automorphism(w1 + w2, x)
        bad_mult += gauge_automorphism(w1, x * y) != gauge_automorphism(w1, x) * gauge_automorphism(w1, y)
    return bad_comp == 0 and bad_mult == 0, f"100 pairs; composition failures {bad_comp}, product failures {bad_mult}"


# -- 4 -----------------------------------------------------------------------

def criterion_4():
    rng = random.Random(404)
    invalid = sq = failed = 0
    shapes = []
    for n in range(50):
        shape = Shape(*(rng.randint(0, 2) for _ in range(3)))
        role = rng.choice(list(Role))
        data = C.random_structure_data(shape, role, rng)
        shapes.append(shape.as_tuple())
        if not validate(data).valid:
            invalid += 1
            continue
        ops = role_operators(data)
        sq += not (is_differential(ops.d_v) and is_differential(ops.d_h))
        rep = cartan_suite(ops, trials=200, seed=n)
        failed += not rep.passed
    ok = invalid == failed == sq == 0
    return ok, f"50 data sets over {len(set(shapes))} shapes; invalid {invalid}, d^2 != 0 {sq}, suite failures {failed}"


# -- 5 -----------------------------------------------------------------------

def _splittings(g):
    n = g.dim
    for r in range(1, n):
        for first in itertools.combinations(range(n), r):
            second = [k for k in range(n) if k not in first]
            try:
                yield C.matched_pair_from_splitting(g, list(first), second)
            except ValueError:
                continue


def compatible_inputs():
    """Tangent doubles of every named algebra, then matched pairs from subalgebra splittings."""
    out = [("tangent " + name, C.tangent_double(C.lie_algebra_by_name(name))) for name in sorted(C.LIE_ALGEBRAS)]
    for name in sorted(C.LIE_ALGEBRAS):
        g = C.lie_algebra_by_name(name)
        for mp in _splittings(g):
            out.append((f"matched {name}", C.matched_pair(mp)))
    return out


def _is_matched_pair(mp) -> bool:
    c = matched_pair_ambient(mp.alg_a.c, mp.alg_b.c, mp.action_a_on_b, mp.action_b_on_a)
    return lie_jacobi_defects(c) == 0


def incompatible_inputs(count: int = 25):
    """Single-entry matched-pair mutants that still validate but fail Jacobi on A⊕B."""
    found = []
    for name in sorted(C.LIE_ALGEBRAS):
        g = C.lie_algebra_by_name(name)
        for mp in _splittings(g):
            for which, idx in mp.entries():
                for delta in (1, -2):
                    m = mp.mutated(which, idx, delta)
                    inp = C.matched_pair(m)
                    if _is_matched_pair(m) or not (validate(inp.data_h).valid and validate(inp.data_v).valid):
                        continue
                    found.append((f"mutant {name} {which}{idx} by {delta}", inp))
    step = max(1, len(found) // count)
    return found[::step][:count]


def criterion_5():
    comp = compatible_inputs()[:25]
    inc = incompatible_inputs(25)
    disagree = lemma_bad = comp_nonzero = inc_zero = 0
    for label, inp in comp + inc:
        rep = check_double_lie_algebroid(inp, samples=4, seed=7)
        disagree += not rep.agree
        lemma_bad += not rep.lemma_holds
        if (label, inp) in comp:
            comp_nonzero += not rep.compatible
        else:
            inc_zero += rep.compatible
    ok = len(comp) == len(inc) == 25 and disagree == lemma_bad == comp_nonzero == inc_zero == 0
    return ok, (f"{len(comp)} compatible + {len(inc)} incompatible; disagreements {disagree}, "
                f"lemma residual failures {lemma_bad}, compatible flagged {comp_nonzero}, "
                f"incompatible inputs that came out compatible {inc_zero}")


# -- 6 -----------------------------------------------------------------------

def criterion_6():
    g = C.sl2()
    ops = assemble_double(C.tangent_double(g))
    h_row = bigraded_cohomology(ops.d_h, 3, 0).row(0)
    oracle = ce_betti(g.c)
    v = bigraded_cohomology(ops.d_v, 4, 4)
    v_ok = all(v.betti(k) == (1 if k == (0, 0) else 0) for k in v.table)
    tot = total_cohomology(ops.d_h, ops.d_v, 4).totals()
    ok = h_row == oracle and v_ok and tot == [1, 0, 0, 0, 0]
    return ok, f"H^(p,0)(d_h) = {h_row} (CE oracle {oracle}); d_v acyclic off (0,0): {v_ok}; total {tot}"


# -- 7 -----------------------------------------------------------------------

def criterion_7():
    mp = C.sl2_matched_pair()
    inp = C.matched_pair(mp)
    rep = check_double_lie_algebroid(inp, samples=5)
    ops = assemble_double(inp)
    tot = total_cohomology(ops.d_h, ops.d_v, 4).totals()
    oracle = ce_betti(C.sl2().c) + [0]
    flips = kept = 0
    for which, idx in mp.entries():
        m = mp.mutated(which, idx)
        r = check_double_lie_algebroid(C.matched_pair(m), samples=2, strict=False)
        if not any(r.verdicts.values()):
            flips += 1
        else:
            kept += 1
    ok = rep.compatible and tot == oracle and kept == 0
    return ok, (f"verdict zero: {rep.compatible}; total {tot} vs CE oracle {oracle}; "
                f"mutations flipping all three verdicts {flips}/{flips + kept}")


# -- 8 -----------------------------------------------------------------------

def criterion_8():
    checked = bad = 0
    for label, inp in compatible_inputs():
        if inp.shape.nE < 1:
            continue
        ops = assemble_double(inp)
        n = inp.shape.nE
        wpp, wp = ops.bracket_pp.algebra, ops.bracket_p.algebra
        f1 = [[[ops.bracket_pp(wpp.first(i), apply(ops.d_v_pp, wpp.first(j))).coefficient(
            Monomial((k,), (), wpp.zero_even())) for k in range(n)] for j in range(n)] for i in range(n)]
        f2 = [[[(-ops.bracket_p(wp.second(i), apply(ops.d_h_p, wp.second(j)))).coefficient(
            Monomial((), (k,), wp.zero_even())) for k in range(n)] for j in range(n)] for i in range(n)]
        lib = core_lie_algebroid(inp, ops=ops)
        checked += 1
        bad += not (f1 == f2 == lib and lie_jacobi_ok(f1))
    return bad == 0 and checked > 0, f"{checked} compatible inputs with nE >= 1; failures {bad}"


# -- 9 -----------------------------------------------------------------------

def criterion_9():
    rng = random.Random(909)
    bad = 0
    for _ in range(50):
        shape = Shape(*(rng.randint(0, 2) for _ in range(3)))
        data = C.random_structure_data(shape, rng.choice(list(Role)), rng)
        bad += rebuild_structure_data(extract_homotopy_representation(data)) != data
    return bad == 0, f"50 random data sets; mismatches {bad}"


# -- 10 ----------------------------------------------------------------------

def criterion_10():
    bad = checked = 0
    for dims in itertools.product(range(4), repeat=3):
        shape = Shape(*dims)
        for role in Role:
            counts = bidegree_buckets(*shape.dims(role), 6, 6)
            for p, q in itertools.product(range(7), repeat=2):
                checked += 1
                bad += basis_count(shape, role, p, q) != counts.get((p, q), 0)
    return bad == 0, f"{checked} (shape, role, p, q) cases; mismatches {bad}"


CRITERIA = {
    1: ("contraction commutation table", criterion_1),
    2: ("sum-zero identity of the three pairings", criterion_2),
    3: ("gauge action is additive and multiplicative", criterion_3),
    4: ("differentials and identity suite on random data", criterion_4),
    5: ("three compatibility verdicts agree; lemma residuals vanish", criterion_5),
    6: ("tangent double of sl2 cohomology", criterion_6),
    7: ("sl2 matched pair and single-entry mutations", criterion_7),
    8: ("core Lie algebroid formulas agree and satisfy Jacobi", criterion_8),
    9: ("homotopy representation round trip", criterion_9),
    10: ("basis counts match exhaustive enumeration", criterion_10),
}


def _run(number: int) -> bool:
    title, fn = CRITERIA[number]
    ok, detail = fn()
    record(number, ok, title, detail)
    return ok


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    assert _run(number)


if __name__ == "__main__":
    start = time.perf_counter()
    results = [_run(n) for n in sorted(CRITERIA)]
    print(f"{sum(results)}/{len(results)} criteria pass in {time.perf_counter() - start:.1f}s")
    sys.exit(0 if all(results) else 1)
