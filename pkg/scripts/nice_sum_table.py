"""Tabulate the nice-set weight sum and its split by type for small d."""

import argparse

from cubehom.config import Config
from cubehom.cube import Cube
from cubehom.weights import nice_sum, typed_partial_sums


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-d", type=int, default=5)
    p.add_argument("--alpha", type=float, default=1.9)
    args = p.parse_args()
    cfg = Config(alpha=args.alpha)
    for d in range(2, args.max_d + 1):
        c = Cube(d)
        total = nice_sum(c, cfg, engine="linked")
        typed = typed_partial_sums(c, cfg)
        split = " ".join(f"{k}={v}" for k, v in typed.items())
        print(f"d={d} sum={total} ({float(total):.6g}) {split}")


if __name__ == "__main__":
    main()
