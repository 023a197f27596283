"""Print the first binary digits of a real algebraic number.

Usage: python3 scripts/sqrt2_digits.py [--poly "x^2 - 2"] [--root 1] [--bits 64]
"""

import argparse
import time

from lagroot import algebraic_bit, parse_poly


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--poly", default="x^2 - 2")
    parser.add_argument("--root", type=int, default=1, help="root id, sorted by real part")
    parser.add_argument("--bits", type=int, default=64)
    args = parser.parse_args()

    f = parse_poly(args.poly)
    start = time.perf_counter()
    bits = "".join(str(algebraic_bit(f, args.root, k)) for k in range(1, args.bits + 1))
    print(f"root {args.root} of {args.poly}: .{bits}")
    print(f"{args.bits} bits in {time.perf_counter() - start:.2f}s")


if __name__ == "__main__":
    main()
