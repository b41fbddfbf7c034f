"""Number of virtual clusters against the significance level for one synthetic sample.

    python scripts/cluster_count_curve.py --seed 1 --noise 0.1 [--svg counts.svg]
"""

import argparse

import numpy as np

from common import run_synthetic
from mlcc.multilevel import cluster_counts
from mlcc.synth import SynthConfig


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--noise", type=float, default=0.1)
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--every", type=int, default=25, help="print every n-th level")
    ap.add_argument("--svg", help="write the curve as SVG")
    args = ap.parse_args(argv)

    _, res, _ = run_synthetic(SynthConfig(args.seed, args.noise), args.k)
    counts = cluster_counts(res.tree)
    n = np.array([c for _, c in counts])
    top = int(np.argmax(n))
    for i in range(0, len(counts), args.every):
        eps, c = counts[i]
        print(f"eps {eps:.3f}  {c:3d}  " + "#" * c)
    print(f"maximum {n[top]} clusters at eps {counts[top][0]:.3f} (level {top + 1} of {len(n)})")
    if args.svg:
        from mlcc.plots import cluster_count_svg

        cluster_count_svg(args.svg, counts)


if __name__ == "__main__":
    main()
