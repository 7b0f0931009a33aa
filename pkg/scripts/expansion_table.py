"""Saddle-point m and v against their truncated 1/xi expansions."""
import argparse
import csv
import math
import sys

from cyclecap.asym import expand_m, expand_v
from cyclecap.exact import Constraint
from cyclecap.saddle import moments


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=float, nargs="+", default=[1e4, 1e5, 1e6, 1e7, 1e8])
    p.add_argument("--exponent", type=float, default=0.6)
    args = p.parse_args()

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["n", "alpha", "xi", "m", "m_expansion", "m_order", "v", "v_expansion", "v_order"])
    for n in map(int, args.n):
        c = Constraint(n, math.ceil(n**args.exponent))
        mp = moments(c)
        em, ev = expand_m(c), expand_v(c)
        out.writerow([n, c.alpha, em.xi, mp.m, em.value, em.truncation_index,
                      mp.v, ev.value, ev.truncation_index])


if __name__ == "__main__":
    main()
