"""Per-cell table for the Hardy-Weinberg curve under the discrete metric on three states.

    python3 scripts/hardy_weinberg_table.py [--mu 1/2,1/7,5/14]
"""
import argparse

from wassmodel import discrete_metric, hardy_weinberg, model_distance
from wassmodel.cli import _table
from wassmodel.io import parse_distribution


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mu", default="1/2,1/7,5/14")
    args = ap.parse_args()
    mu = parse_distribution(args.mu)
    model = hardy_weinberg()
    opt, report = model_distance(discrete_metric(3), mu, model)
    print(_table(opt, report, model), end="")
    print("theta* =", ", ".join(str(th[0]) for th in opt.theta_star))
    print("nu*    =", [round(float(x), 10) for x in opt.nu_star[0]])
    print("plan   =", [(i, j, str(v)) for i, j, v in opt.plan.sparse()])


if __name__ == "__main__":
    main()
