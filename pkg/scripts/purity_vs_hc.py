"""Averaged purity of the multi-level tree against single linkage, component id as label.

    python scripts/purity_vs_hc.py [--noise 0.1] [--n-splits 10]
"""

import argparse

from common import run_synthetic
from mlcc.baseline_hc import single_linkage
from mlcc.metrics import averaged_purity_hc, averaged_purity_mlcc
from mlcc.synth import SEEDS, SynthConfig


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--noise", type=float, default=0.1)
    ap.add_argument("--n-splits", type=int, default=10)
    ap.add_argument("--k", type=int, default=5)
    args = ap.parse_args(argv)

    print(f"{'seed':>4}  {'MLCC':>6}  {'HC':>6}  clusters")
    for seed in SEEDS:
        sample, res, _ = run_synthetic(SynthConfig(seed, args.noise), args.k)
        ml = averaged_purity_mlcc(res.dendrogram, sample.component, args.n_splits)
        hc = averaged_purity_hc(single_linkage(res.dataset), sample.component, args.n_splits)
        print(f"{seed:>4}  {ml.mean:6.3f}  {hc.mean:6.3f}  {len(ml.purities)} / {len(hc.purities)}"
              + (f"  ({ml.warning})" if ml.warning else ""))


if __name__ == "__main__":
    main()
