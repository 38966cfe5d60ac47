"""Write W(mu, phi(theta)) on a parameter grid to CSV, for plotting elsewhere.

    python3 scripts/heatmap_export.py problems/independence_hamming.json --grid 100 -o heat.csv
"""
import argparse
import sys

from wassmodel.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("problem")
    ap.add_argument("--grid", type=int, default=100)
    ap.add_argument("-o", "--output", default="heatmap.csv")
    args = ap.parse_args()
    code = cli_main(["heatmap", args.problem, "--grid", str(args.grid), "--output", args.output])
    if code == 0:
        print(f"wrote {args.output}")
    sys.exit(code)


if __name__ == "__main__":
    main()
