"""KS distance between the exact law of C and N(m, v) along a sequence of n.

    python scripts/clt_exact_table.py --exponent 0.5 --n 200 500 1000 2000
"""
import argparse
import csv
import math
import sys

from cyclecap.exact import Constraint, distribution_moments, exact_cycle_count_distribution
from cyclecap.saddle import moments
from cyclecap.stats import ks_exact_vs_normal


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, nargs="+", default=[200, 500, 1000, 2000])
    p.add_argument("--exponent", type=float, default=0.5, help="alpha = ceil(n^exponent)")
    args = p.parse_args()

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["n", "alpha", "m", "v", "exact_mean", "exact_variance", "ks_distance"])
    for n in args.n:
        c = Constraint(n, math.ceil(n**args.exponent))
        d = exact_cycle_count_distribution(c)
        mean, var = distribution_moments(d)
        mp = moments(c)
        ks = ks_exact_vs_normal(d, mp.m, mp.v)
        out.writerow([n, c.alpha, mp.m, mp.v, mean, var, ks.distance])


if __name__ == "__main__":
    main()
