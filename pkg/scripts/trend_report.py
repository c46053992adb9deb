"""Print |F|/2^M and P(|R| <= 5) for small d next to the 2e reference."""

import argparse
import math
from fractions import Fraction

from cubehom.counting import count_by_range


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-d", type=int, default=5)
    args = p.parse_args()
    print(f"{'d':>2} {'|F|':>10} {'|F|/2^M':>10} {'P(|R|<=5)':>12}")
    for d in range(1, args.max_d + 1):
        t = count_by_range(d)
        ratio = t.total / 2 ** (1 << (d - 1))
        le5 = Fraction(t.le5(), t.total)
        print(f"{d:>2} {t.total:>10} {ratio:>10.4f} {float(le5):>12.6f}")
    print(f"reference 2e = {2 * math.e:.4f}")


if __name__ == "__main__":
    main()
