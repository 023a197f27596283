"""Time find_roots over the seeded random workload at several precisions.

Usage: python3 scripts/workload_timing.py [--count 50] [--t 8 32 128] [--seed N]
"""

import argparse
import statistics
import time

from lagroot import find_roots
from lagroot.poly import is_square_free
from lagroot.sampling import WorkloadConfig, workload


def main():
    defaults = WorkloadConfig()
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=50)
    parser.add_argument("--repeated", type=int, default=10, help="members built with a repeated factor")
    parser.add_argument("--max-degree", type=int, default=defaults.max_degree)
    parser.add_argument("--bits", type=int, default=defaults.bits)
    parser.add_argument("--seed", type=int, default=defaults.seed)
    parser.add_argument("--t", type=int, nargs="+", default=[8, 32, 128])
    args = parser.parse_args()

    cfg = WorkloadConfig(
        count=args.count,
        max_degree=args.max_degree,
        bits=args.bits,
        non_square_free=min(args.repeated, args.count),
        seed=args.seed,
    )
    polys = workload(cfg)
    print(f"{len(polys)} polynomials, {sum(not is_square_free(f) for f in polys)} with repeated roots")
    print("the first precision includes root isolation; later ones reuse the cached anchors")
    for t in args.t:
        times = []
        for f in polys:
            start = time.perf_counter()
            find_roots(f, t)
            times.append(time.perf_counter() - start)
        print(
            f"t={t:<5} total {sum(times):7.2f}s  median {statistics.median(times) * 1000:8.1f}ms"
            f"  max {max(times) * 1000:8.1f}ms"
        )


if __name__ == "__main__":
    main()
