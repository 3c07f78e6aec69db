"""Sweep alpha on a fixed cycle and tabulate the smallest eigenvalue gap
against the empirical mixing time.

    python3 scripts/alpha_sweep_mixing.py --nodes 7 --epsilon 0.05
"""

import argparse
import csv
import sys

import numpy as np

from mobius_walk import degeneracy_report, empirical_mixing_time, make_params


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--nodes", type=int, default=7)
    parser.add_argument("--epsilon", type=float, default=0.05)
    parser.add_argument("--t-max", type=int, default=10_000)
    parser.add_argument("--alphas", type=int, default=41, help="grid points on [0, N/2]")
    args = parser.parse_args()

    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["alpha", "uniform", "min_gap", "m_epsilon"])
    for alpha in np.linspace(0.0, args.nodes / 2.0, args.alphas):
        params = make_params(args.nodes, alpha)
        report = empirical_mixing_time(params, args.epsilon, args.t_max)
        writer.writerow([
            format(alpha, ".6g"),
            degeneracy_report(params).is_uniform,
            format(report.min_gap, ".6g"),
            report.m_epsilon if report.reached else "not_reached",
        ])


if __name__ == "__main__":
    main()
