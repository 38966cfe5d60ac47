"""Minimize c.x over the plane cubic x1^3 + x2^3 + x3^3 = 4 x1 x2 x3 inside the triangle
and check each optimal value against the sextic certificate.

    python3 scripts/elliptic_residual.py [--samples 20] [--seed 0] [--spread 0.25]
"""
import argparse
import random

import numpy as np

from wassmodel import ELLIPTIC_CUBIC, dual_residual, implicit_curve_min


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--spread", type=float, default=0.25)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    print(f"{'c1':>9} {'c2':>9} {'c3':>9} {'value':>14} {'residual':>11} {'scaled':>10}")
    for _ in range(args.samples):
        c = [1 + rng.uniform(-args.spread, args.spread) for _ in range(3)]
        x, value = implicit_curve_min(ELLIPTIC_CUBIC, c)
        r = dual_residual(value, c)
        scaled = abs(r) / (1 + np.linalg.norm(c)) ** 6
        print(f"{c[0]:9.5f} {c[1]:9.5f} {c[2]:9.5f} {value:14.10f} {r:11.2e} {scaled:10.1e}")


if __name__ == "__main__":
    main()
