"""Write the characteristic limiting distributions on 24 and 26 nodes as CSV.

    python3 scripts/limiting_shapes.py --out shapes/

Each case is computed three ways (closed form, general pair sum and the
empirical time average) so the columns can be overlaid directly.
"""

import argparse
import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from mobius_walk import (
    empirical_average_distribution,
    extremum_pattern,
    limiting_distribution_closed_form,
    limiting_distribution_general,
    make_params,
)


@dataclass(frozen=True)
class FigureCase:
    name: str
    n_nodes: int
    alpha: float


CASES = (
    FigureCase("plain_cycle_n24", 24, 0.0),
    FigureCase("twisted_n24_alpha1", 24, 1.0),
    FigureCase("twisted_n24_alpha2", 24, 2.0),
    FigureCase("twisted_n26_alpha1", 26, 1.0),
    FigureCase("twisted_n26_alpha2", 26, 2.0),
)


def write_case(case: FigureCase, out_dir: Path, T: int) -> str:
    params = make_params(case.n_nodes, case.alpha)
    closed = limiting_distribution_closed_form(params)
    general = limiting_distribution_general(params).values
    empirical = empirical_average_distribution(params, T).values
    path = out_dir / f"{case.name}.csv"
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["v", "closed", "general", "empirical"])
        for v in range(case.n_nodes):
            writer.writerow([v] + [format(x, ".17g") for x in (closed.values[v], general[v], empirical[v])])
    err = np.abs(closed.values - empirical).max()
    return f"{path}  shape={extremum_pattern(closed)}  max|closed-empirical|={err:.2e}"


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--out", type=Path, default=Path("shapes"))
    parser.add_argument("-T", type=int, default=100_000, help="horizon of the empirical average")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for case in CASES:
        print(write_case(case, args.out, args.T))


if __name__ == "__main__":
    main()
