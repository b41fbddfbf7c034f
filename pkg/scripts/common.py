"""Shared helpers for the experiment scripts: one in-memory pipeline run per
synthetic configuration."""

from fractions import Fraction

from mlcc.core import Dataset
from mlcc.pipeline import RunConfig, cluster, compute_field, example_p_values
from mlcc.synth import generate


def run_synthetic(cfg, k=5, resolution=50, workers=1):
    """Generate ``cfg`` and run field + tree on it; returns (sample, result, p_values)."""
    sample = generate(cfg)
    config = RunConfig(k=k, resolution=(resolution,), workers=workers, svg=False)
    result = cluster(compute_field(Dataset(sample.points, sample.component), config), config)
    return sample, result, example_p_values(result)


def fraction_label(x):
    return str(Fraction(x).limit_denominator(20))
