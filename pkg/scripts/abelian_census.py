"""Census of locally finite asymorphism classes among finite abelian groups, checked against brute force.

    python scripts/abelian_census.py [--max-order 64]
"""

import argparse
import itertools
from collections import defaultdict

from coarse_subsets.classify import (abelian_groups_of_order, conditions_by_orders, decide_locfin_asymorphic,
                                     realizable_orders_bruteforce, subgroup_capacity)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=64)
    args = ap.parse_args()
    groups = [g for n in range(2, args.max_order + 1) for g in abelian_groups_of_order(n)]
    orders = {g: realizable_orders_bruteforce(g) for g in groups}
    disagreements = sum(bool(decide_locfin_asymorphic(g, h)) != conditions_by_orders(orders[g], orders[h])
                        for g, h in itertools.product(groups, repeat=2))
    classes = defaultdict(list)
    for g in groups:
        classes[tuple(sorted(subgroup_capacity(g).values.items()))].append(str(g))
    print(f"{len(groups)} groups, {len(classes)} classes, {disagreements} disagreements with brute force")
    for members in classes.values():
        if len(members) > 1:
            print("  " + " ~ ".join(members))


if __name__ == "__main__":
    main()
