"""Desk-scale uniformity table for Singer and Bose-Chowla sets.

Writes the per-cell ratios and their maxima; with --freeze the result becomes
the regression baseline read by tests/test_acceptance.py.

    python scripts/reproduce_uniformity_table.py --freeze
"""

import argparse
import json
import platform
from pathlib import Path

import numpy as np

from sidonlab import analyze_set, construct
from sidonlab.finite_field import is_prime

FIXTURE = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "uniformity_baseline.json"
FAMILIES = ("bose_chowla", "singer")
PRIMES = [p for p in range(101, 294) if is_prime(p)]
MODULI = list(range(2, 11))


def collect():
    cells = []
    for fam in FAMILIES:
        for p in PRIMES:
            A = construct(fam, p).set
            for m in MODULI:
                rec = analyze_set(A, m)
                cells.append(
                    {
                        "family": fam,
                        "p": p,
                        "m": m,
                        "N": A.N,
                        "k": A.k,
                        "branch": rec.bound.branch,
                        "ratio_l2": rec.ratio_l2,
                        "uniformity": rec.uniformity,
                        "dev_l2_over_N38": rec.stats.l2 / A.N**0.375,
                    }
                )
    return cells


def summarise(cells):
    out = {"primes": [PRIMES[0], PRIMES[-1]], "moduli": MODULI, "families": {}}
    for fam in FAMILIES:
        mine = [c for c in cells if c["family"] == fam]
        out["families"][fam] = {
            "R_max": max(c["ratio_l2"] for c in mine),
            "U_max": max(c["uniformity"] for c in mine),
        }
    out["R_max"] = max(c["ratio_l2"] for c in cells)
    out["U_max"] = max(c["uniformity"] for c in cells)
    lind = [c["dev_l2_over_N38"] for c in cells if c["family"] == "bose_chowla" and c["m"] == 2]
    out["lindstrom_m2_max"] = max(lind)
    out["lindstrom_m2_mean"] = float(np.mean(lind))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--freeze", action="store_true", help=f"write {FIXTURE.name}")
    ap.add_argument("--cells", type=Path, help="also dump every cell as JSON")
    args = ap.parse_args()
    cells = collect()
    summary = summarise(cells)
    print(json.dumps(summary, indent=1))
    worst = max(cells, key=lambda c: c["ratio_l2"])
    print(f"largest ratio_l2: {worst['family']} p={worst['p']} m={worst['m']} -> {worst['ratio_l2']:.6g}")
    if args.cells:
        args.cells.write_text(json.dumps(cells, indent=1))
    if args.freeze:
        summary["generated_with"] = {"python": platform.python_version(), "numpy": np.__version__}
        FIXTURE.parent.mkdir(parents=True, exist_ok=True)
        FIXTURE.write_text(json.dumps(summary, indent=1) + "\n")
        print(f"froze baseline to {FIXTURE}")


if __name__ == "__main__":
    main()
