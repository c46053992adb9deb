"""Run the approximating-quadruple sweep at one dimension and summarize failures by check."""

import argparse
import time
from collections import Counter

from cubehom.approximation import sweep
from cubehom.cube import Cube


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--max-size", type=int, default=None)
    args = p.parse_args()
    t0 = time.perf_counter()
    n, failed = 0, Counter()
    for r in sweep(Cube(args.d), args.max_size):
        n += 1
        failed.update(r.check.failed())
        failed.update(f"exact:{x}" for x in r.exact_check.failed())
        failed["cover_bound"] += not r.covers_meet_bound
        failed["iterations"] += not r.iterations_ok
    print(f"d={args.d}: {n} sets in {time.perf_counter() - t0:.1f}s")
    bad = {k: v for k, v in failed.items() if v}
    print("failures:", bad or "none")


if __name__ == "__main__":
    main()
