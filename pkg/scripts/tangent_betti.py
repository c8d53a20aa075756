"""Betti tables of tangent doubles of the built-in Lie algebras.

    python3 scripts/tangent_betti.py [--max-degree 3]

For each algebra: the d_h table (whose q = 0 row is Lie algebra cohomology), the d_v table
(acyclic away from (0,0)) and the total cohomology of d_h + d_v.
"""

from __future__ import annotations

import argparse

from weilforge import constructions as C
from weilforge.cohomology import bigraded_cohomology, total_cohomology
from weilforge.structures import assemble_double


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-degree", type=int, default=3)
    ap.add_argument("--algebra", action="append", help="restrict to these names (repeatable)")
    args = ap.parse_args()
    n = args.max_degree
    for name in args.algebra or sorted(C.LIE_ALGEBRAS):
        ops = assemble_double(C.tangent_double(C.lie_algebra_by_name(name)))
        print(f"== {name}")
        print("d_h:")
        print(bigraded_cohomology(ops.d_h, n, n).format_text())
        print("d_v:")
        print(bigraded_cohomology(ops.d_v, n, n).format_text())
        print("total:", total_cohomology(ops.d_h, ops.d_v, n).totals())


if __name__ == "__main__":
    main()
