#!/usr/bin/env python3
"""Measure end-to-end decomposition wall time on sparse ladder networks.

Doubling the node count should roughly double the runtime; the table prints
medians over several runs plus the per-doubling growth factor.

Usage:
  python3 scripts/benchmark_scaling.py [--sizes 1000,2000,4000,8000] [--runs 5]
"""

import argparse
import statistics
import time

from triflow import GenParams, Structure, decompose, generate


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="1000,2000,4000,8000")
    parser.add_argument("--runs", type=int, default=5)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()
    sizes = [int(x) for x in args.sizes.split(",")]

    print(f"{'nodes':>8} {'edges':>8} {'median ms':>10} {'ratio':>6}")
    prev = None
    for n in sizes:
        net = generate(GenParams(node_count=n, seed=args.seed,
                                 structure=Structure.LADDER))
        runs = []
        for _ in range(args.runs):
            t0 = time.perf_counter()
            plan = decompose(net)
            runs.append(time.perf_counter() - t0)
        assert plan.verification.overall
        med = statistics.median(runs)
        ratio = f"{med / prev:.2f}" if prev else "-"
        print(f"{n:>8} {len(net.graph.edge_ids):>8} {med * 1000:>10.1f} {ratio:>6}")
        prev = med


if __name__ == "__main__":
    main()
