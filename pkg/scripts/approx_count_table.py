"""Relative error of the saddle-point approximation to log |S_{n,alpha}| at fixed alpha."""
import argparse
import csv
import sys

from cyclecap.exact import Constraint, log_exact_count
from cyclecap.saddle import saddle_point_count_approx


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--alpha", type=int, default=50)
    p.add_argument("--n", type=int, nargs="+", default=[500, 2000, 8000, 32000])
    args = p.parse_args()

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["n", "alpha", "log_exact", "log_approx", "relative_error"])
    for n in args.n:
        c = Constraint(n, args.alpha)
        exact = log_exact_count(c)
        approx = saddle_point_count_approx(c)
        out.writerow([n, c.alpha, exact, approx, abs(approx - exact) / exact])


if __name__ == "__main__":
    main()
