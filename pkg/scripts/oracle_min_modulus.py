"""Exhaustively compute the least radius-1 expansion of bijections {0..n-1} -> {0, d, 2d, ...}.

    python scripts/oracle_min_modulus.py [--max-n 10] [--step 3]
"""

import argparse
import time

from coarse_subsets.ballean import IntegerLine
from coarse_subsets.oracle import minimize_modulus


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=10)
    ap.add_argument("--step", type=int, default=3)
    args = ap.parse_args()
    for n in range(2, args.max_n + 1):
        start = time.perf_counter()
        res = minimize_modulus(IntegerLine(range(n)), IntegerLine(range(0, args.step * n, args.step)), 1,
                               cap=max(n, 12))
        print(f"n={n:>2}: min mu(1) = {res.value}, refuted below: {list(res.refuted_below)}, "
              f"nodes={res.nodes} ({time.perf_counter() - start:.3f}s)")


if __name__ == "__main__":
    main()
