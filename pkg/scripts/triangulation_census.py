"""Simplex and cell counts of regular triangulations for random and discrete metrics.

    python3 scripts/triangulation_census.py [--trials 20] [--max-n 5]
"""
import argparse
import random
import time
from fractions import Fraction
from math import comb

from wassmodel import GroundMetric, coarsen, discrete_metric, regular_triangulation


def random_metric(rng, n):
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = Fraction(rng.randint(1, 50), rng.randint(1, 7))
    return GroundMetric(tuple(map(tuple, m)))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--max-n", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    print(f"{'n':>2} {'expected':>8} {'random (min..max)':>18} {'discrete cells':>14} {'secs':>6}")
    for n in range(2, args.max_n + 1):
        t0 = time.perf_counter()
        sizes = [len(regular_triangulation(random_metric(rng, n)).simplices) for _ in range(args.trials)]
        cells = len(coarsen(regular_triangulation(discrete_metric(n))))
        print(f"{n:>2} {comb(2 * n - 2, n - 1):>8} {f'{min(sizes)}..{max(sizes)}':>18} {cells:>14} "
              f"{time.perf_counter() - t0:6.2f}")


if __name__ == "__main__":
    main()
