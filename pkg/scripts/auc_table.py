"""Anomaly-detection AUC on the synthetic grid (seeds 1-5 by three noise levels).

    python scripts/auc_table.py [--k 5] [--csv auc.csv]
"""

import argparse
import csv
import sys
import time

import numpy as np

from common import fraction_label, run_synthetic
from mlcc.metrics import anomaly_auc
from mlcc.synth import NOISE_LEVELS, SEEDS, SynthConfig


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--resolution", type=int, default=50)
    ap.add_argument("--csv", help="also write per-seed values here")
    args = ap.parse_args(argv)

    rows = []
    for noise in NOISE_LEVELS:
        for seed in SEEDS:
            t0 = time.perf_counter()
            sample, _, p = run_synthetic(SynthConfig(seed, float(noise)), args.k, args.resolution)
            auc = anomaly_auc(p, sample.is_noise).auc
            rows.append((seed, float(noise), auc))
            print(f"seed {seed} noise {fraction_label(float(noise)):>4}  AUC {auc:.3f}  ({time.perf_counter() - t0:.1f}s)",
                  file=sys.stderr)

    print(f"{'noise':>6} " + " ".join(f"seed{s:>2}" for s in SEEDS) + "    mean")
    for noise in NOISE_LEVELS:
        vals = [a for s, n, a in rows if n == float(noise)]
        print(f"{fraction_label(float(noise)):>6} " + " ".join(f"{v:6.3f}" for v in vals) + f"  {np.mean(vals):6.3f}")

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["seed", "noise", "auc"])
            w.writerows(rows)


if __name__ == "__main__":
    main()
