"""Survey single-entry mutations of matched pairs coming from subalgebra splittings.

    python3 scripts/mutation_survey.py [--delta 1] [--algebra sl2]

Each mutant is classified as invalid (an axiom of the structure data fails), still a matched
pair (the double stays compatible) or incompatible. The last column says whether the bracket
on the direct sum still satisfies Jacobi.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from collections import Counter
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from oracles import lie_jacobi_defects, matched_pair_ambient  # noqa: E402

from weilforge import constructions as C  # noqa: E402
from weilforge.structures import check_double_lie_algebroid, validate  # noqa: E402


def splittings(g):
    for r in range(1, g.dim):
        for first in itertools.combinations(range(g.dim), r):
            second = [k for k in range(g.dim) if k not in first]
            try:
                yield list(first), second, C.matched_pair_from_splitting(g, list(first), second)
            except ValueError:
                continue


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--delta", type=Fraction, default=Fraction(1))
    ap.add_argument("--algebra", action="append")
    args = ap.parse_args()
    totals = Counter()
    for name in args.algebra or sorted(C.LIE_ALGEBRAS):
        g = C.lie_algebra_by_name(name)
        for first, second, mp in splittings(g):
            for which, idx in mp.entries():
                m = mp.mutated(which, idx, args.delta)
                inp = C.matched_pair(m)
                if not (validate(inp.data_h).valid and validate(inp.data_v).valid):
                    kind = "invalid"
                else:
                    rep = check_double_lie_algebroid(inp, samples=0)
                    kind = "compatible" if rep.compatible else "incompatible"
                amb = matched_pair_ambient(m.alg_a.c, m.alg_b.c, m.action_a_on_b, m.action_b_on_a)
                jac = "no-jacobi" if lie_jacobi_defects(amb) else "jacobi"
                totals[kind] += 1
                print(f"{name} {first}|{second} {which}{idx}: {kind} ({jac})")
    print(dict(totals))


if __name__ == "__main__":
    main()
