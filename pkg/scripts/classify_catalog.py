#!/usr/bin/env python3
"""Classify every built-in domain and print a summary table.

Usage: python scripts/classify_catalog.py [--samples N] [--seed S]
"""

import argparse

from levislice import levi
from levislice.catalog import CATALOG


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=200)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    print(f"{'domain':10s} {'n':>2s} {'verdict':24s} {'worst lambda':>14s} "
          f"{'degenerate':>10s}  rho")
    for spec in CATALOG.values():
        result = levi.classify(spec.domain(), args.samples, args.seed)
        worst = (f"{result.worst_probe.lambda_min:14.6g}"
                 if result.worst is not None else f"{'n/a':>14s}")
        print(f"{spec.name:10s} {spec.n:2d} {result.verdict:24s} {worst} "
              f"{result.degenerate_count:10d}  {spec.rho}")


if __name__ == "__main__":
    main()
