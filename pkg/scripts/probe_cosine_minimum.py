"""Empirical constant in M > A eps^2 N for random admissible frequency sets.

For each instance: draw N_terms distinct frequencies in [1, (2 - eps) N_terms],
minimise the pure cosine sum, report M / (eps^2 N_terms).  The batch minimum is
the quantity of interest; nothing here claims a value for the true constant.
"""

import argparse
import csv
import sys

import numpy as np

from sidonlab import cosine_min_probe


def draw(rng, n, eps):
    top = max(n, int((2 - eps) * n))
    top = min(top, 2 * n - 1)
    return sorted(rng.choice(np.arange(1, top + 1), size=n, replace=False).tolist())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 50, 100, 200])
    ap.add_argument("--eps", type=float, nargs="+", default=[0.1, 0.25, 0.5, 1.0])
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["N_terms", "eps_target", "epsilon", "M_star", "A_empirical", "A_min_so_far", "eps_gt_3_over_N"])
    for n in args.sizes:
        for eps in args.eps:
            best = float("inf")
            for _ in range(args.trials):
                r = cosine_min_probe(draw(rng, n, eps))
                best = min(best, r.A_empirical)
            w.writerow([n, eps, f"{r.epsilon:.6g}", f"{r.M_star:.6g}", f"{r.A_empirical:.6g}", f"{best:.6g}", r.epsilon_gt_3_over_N])


if __name__ == "__main__":
    main()
