#!/usr/bin/env python3
"""Survey the class order over random integer edge lengths.

For a built-in curve and table, sample length tuples, compute the order of
the class in the graded quotient, and tabulate the distribution.  The order
is scale-invariant, so the survey is effectively over projective length
vectors.

Usage: python scripts/order_survey.py [k4|tl3] [count] [seed]
"""

import sys
from collections import Counter
import random

from tropceresa import builtin_curve, builtin_table
from tropceresa.ceresa import build_context, ceresa_order, v_class


def main(argv):
    name = argv[0] if argv else "k4"
    count = int(argv[1]) if len(argv) > 1 else 200
    seed = int(argv[2]) if len(argv) > 2 else 0
    rng = random.Random(seed)
    curve = builtin_curve(name)
    n_edges = len(curve.edges)
    orders = Counter()
    for _ in range(count):
        lengths = [rng.randint(1, 20) for _ in range(n_edges)]
        cur = builtin_curve(name, lengths=lengths)
        ctx = build_context(cur)
        table = builtin_table(name, cur)
        orders[ceresa_order(ctx, v_class(ctx, table))] += 1
    print(f"{name}: {count} samples (seed {seed}), lengths in [1, 20]")
    for order, freq in sorted(orders.items()):
        print(f"  order {order:>6}: {freq}")
    print(f"  distinct orders: {len(orders)}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
