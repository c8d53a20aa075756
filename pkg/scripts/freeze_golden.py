"""Regenerate tests/golden/*.json after re-verifying every value against an oracle.

    python3 scripts/freeze_golden.py [--check]

With --check nothing is written; the script exits 1 if a golden file would change.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from oracles import ce_betti  # noqa: E402

from weilforge import constructions as C  # noqa: E402
from weilforge.cohomology import bigraded_cohomology, total_cohomology  # noqa: E402
from weilforge.structures import assemble_double  # noqa: E402
from weilforge.weil_core import Monomial, Role, Shape, WeilAlgebra, WeilElement, basis_count  # noqa: E402

GOLDEN = ROOT / "tests" / "golden"


def ce_on_exterior(g, alg: WeilAlgebra, k: int) -> WeilElement:
    """d α_k = −Σ_{i<j} c_ij^k α_i α_j, written out directly."""
    z = alg.zero_even()
    terms = {Monomial((i, j), (), z): -g.c[i][j][k] for i, j in itertools.combinations(range(g.dim), 2)}
    return WeilElement(alg, terms)


def tangent_entry(name: str) -> dict:
    g = C.lie_algebra_by_name(name)
    ops = assemble_double(C.tangent_double(g))
    alg = ops.d_h.algebra
    for k in range(g.dim):
        assert ops.d_h.image(("first", k)) == ce_on_exterior(g, alg, k), f"{name}: d_h is not CE on α{k + 1}"
        assert ops.d_v.image(("first", k)) == alg.even(k), f"{name}: d_v is not the Koszul map on α{k + 1}"
        assert ops.d_v.image(("even", k)).is_zero()
    return {"d_h": ops.d_h.table(), "d_v": ops.d_v.table()}


def matched_entry() -> dict:
    inp = C.matched_pair(C.sl2_matched_pair())
    ops = assemble_double(inp)
    mp = C.sl2_matched_pair()
    alg = ops.d_h.algebra
    for k in range(mp.alg_a.dim):
        got = ops.d_h.image(("first", k))
        restricted = WeilElement(alg, {m: c for m, c in got.terms.items() if not m.second})
        assert restricted == ce_on_exterior(mp.alg_a, alg, k), "matched pair: d_h on ∧A* is not CE of A"
    return {"d_h": ops.d_h.table(), "d_v": ops.d_v.table()}


def cohomology_entry() -> dict:
    sl2 = C.sl2()
    tan = assemble_double(C.tangent_double(sl2))
    row = bigraded_cohomology(tan.d_h, 3, 0).row(0)
    assert row == ce_betti(sl2.c)
    mat = assemble_double(C.matched_pair(C.sl2_matched_pair()))
    matched_total = total_cohomology(mat.d_h, mat.d_v, 4).totals()
    assert matched_total == ce_betti(sl2.c) + [0]
    return {
        "tangent_sl2": {"h_row_q0": row, "total": total_cohomology(tan.d_h, tan.d_v, 4).totals()},
        "matched_sl2": {"total": matched_total},
    }


def basis_entry() -> dict:
    out = {}
    for dims in [(1, 1, 1), (2, 2, 0), (0, 0, 1), (3, 0, 0), (2, 1, 2)]:
        grid = [[basis_count(Shape(*dims), Role.D, p, q) for q in range(4)] for p in range(4)]
        out[",".join(map(str, dims))] = grid
    return out


def build() -> dict[str, dict]:
    return {
        "tangent_doubles.json": {name: tangent_entry(name) for name in sorted(C.LIE_ALGEBRAS)},
        "matched_sl2.json": matched_entry(),
        "cohomology.json": cohomology_entry(),
        "basis_grids.json": basis_entry(),
    }


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="compare instead of writing")
    args = ap.parse_args()
    GOLDEN.mkdir(parents=True, exist_ok=True)
    changed = []
    for fname, payload in build().items():
        text = json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=True) + "\n"
        path = GOLDEN / fname
        if not path.exists() or path.read_text() != text:
            changed.append(fname)
            if not args.check:
                path.write_text(text)
    verb = "would change" if args.check else "written"
    print(f"{verb}: {', '.join(changed) if changed else 'nothing'}")
    return 1 if (args.check and changed) else 0


if __name__ == "__main__":
    sys.exit(main())
