"""Run the identity suite on random valid structure data over a grid of shapes.

    python3 scripts/identity_sweep.py [--max-dim 2] [--per-shape 3] [--trials 20] [--seed 0]

Prints one line per (shape, role) with the worst residual count; exits 1 if any identity fails.
"""

from __future__ import annotations

import argparse
import itertools
import random
import sys

from weilforge.constructions import random_structure_data
from weilforge.structures import cartan_suite, role_operators
from weilforge.weil_core import Role, Shape


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-dim", type=int, default=2)
    ap.add_argument("--per-shape", type=int, default=3)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    bad = 0
    for dims in itertools.product(range(args.max_dim + 1), repeat=3):
        shape = Shape(*dims)
        for role in Role:
            fails = {}
            for _ in range(args.per_shape):
                data = random_structure_data(shape, role, rng)
                rep = cartan_suite(role_operators(data), trials=args.trials, seed=rng.randrange(1 << 30))
                for name, n in rep.failures.items():
                    if n:
                        fails[name] = fails.get(name, 0) + n
            bad += bool(fails)
            status = "ok" if not fails else "FAIL " + ", ".join(f"{k}×{v}" for k, v in sorted(fails.items()))
            print(f"{dims} {role.label:>3}: {status}")
    print(f"{bad} failing (shape, role) cells")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
