"""Noisy five-component 2-D mixtures for the anomaly-detection experiments.

Each sample has one component per shape below, ``size`` points each:

1. isotropic normal, sigma ~ U(2, 5);
2. axis-aligned normal, per-axis sigma ~ U(1.5, 6) independently;
3. correlated normal: N(0, I) scaled by (sigma_1, sigma_2) ~ (U(3, 7), U(1, 2.5)),
   then rotated by theta ~ U(0, pi);
4. ring: uniform angle, radius ~ N(R, sigma_r), R ~ U(8, 14), sigma_r ~ U(0.6, 1.5);
5. half ring: as 4, angle uniform on [phi, phi + pi], phi ~ U(0, 2 pi).

Component centres are drawn uniformly in [15, 85]^2 and redrawn until every
pair is at least ``MIN_SEPARATION`` apart. In each component the first
``round(noise_fraction * size)`` points of a random order are corrupted: their
deviations from the component's centre (radial deviation for rings) are
multiplied by ``sqrt(inflation)``, so the variance is ``inflation`` times larger.
Ring angles are not affected.

Draws use ``numpy.random.Generator(PCG64(seed))`` in a fixed order, so a seed
reproduces the same sample on any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

N_COMPONENTS = 5
CENTRE_RANGE = (15.0, 85.0)
MIN_SEPARATION = 30.0
NOISE_LEVELS = (Fraction(1, 10), Fraction(1, 5), Fraction(1, 3))
SEEDS = (1, 2, 3, 4, 5)


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 1
    noise_fraction: float = 0.2
    size: int = 100
    inflation: float = 5.0

    def __post_init__(self):
        if not 0.0 < float(self.noise_fraction) < 1.0:
            raise ValueError(f"noise_fraction must lie in (0, 1), got {self.noise_fraction}")
        if self.size < 1:
            raise ValueError(f"size must be >= 1, got {self.size}")
        if self.inflation <= 1.0:
            raise ValueError(f"inflation must exceed 1, got {self.inflation}")

    @property
    def n_noise(self) -> int:
        return int(round(float(self.noise_fraction) * self.size))


@dataclass(frozen=True, eq=False)
class SynthSample:
    points: np.ndarray
    component: np.ndarray  # 1..5
    is_noise: np.ndarray
    config: SynthConfig
    centres: np.ndarray = None
    params: tuple = ()  # per-component shape parameters


def _centres(rng) -> np.ndarray:
    lo, hi = CENTRE_RANGE
    while True:
        c = rng.uniform(lo, hi, size=(N_COMPONENTS, 2))
        gaps = np.linalg.norm(c[:, None] - c[None, :], axis=2)
        if gaps[np.triu_indices(N_COMPONENTS, 1)].min() >= MIN_SEPARATION:
            return c


def _rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def _parameters(rng, kind) -> dict:
    if kind == 1:
        return {"sigma": np.full(2, rng.uniform(2, 5))}
    if kind == 2:
        return {"sigma": rng.uniform(1.5, 6, size=2)}
    if kind == 3:
        scales = np.array([rng.uniform(3, 7), rng.uniform(1, 2.5)])
        return {"sigma": scales, "rotation": _rotation(rng.uniform(0, math.pi))}
    out = {"radius": rng.uniform(8, 14), "sigma_r": rng.uniform(0.6, 1.5)}
    if kind == 5:
        out["start"] = rng.uniform(0, 2 * math.pi)
    return out


def _component(rng, kind, params, centre, n):
    """Unit draws for one component: returns a function of ``widen`` (per-point
    multiplier of the standard deviations) giving the points."""
    if kind in (1, 2, 3):
        z = rng.standard_normal((n, 2))

        def place(widen):
            dev = params["sigma"] * widen[:, None] * z
            if kind == 3:
                dev = dev @ params["rotation"].T
            return centre + dev

        return place
    if kind == 4:
        angle = rng.uniform(0, 2 * math.pi, size=n)
    else:
        angle = params["start"] + rng.uniform(0, math.pi, size=n)
    z = rng.standard_normal(n)

    def place(widen):
        r = params["radius"] + params["sigma_r"] * widen * z
        return centre + np.stack([r * np.cos(angle), r * np.sin(angle)], axis=1)

    return place


def generate(config: SynthConfig) -> SynthSample:
    """Draw one sample.

    Everything random depends on the seed only: the noise level just decides
    how many points of a fixed per-component order are corrupted. The three
    noise versions of a seed are therefore the same sample with nested noise
    subsets.
    """
    rng = np.random.Generator(np.random.PCG64(config.seed))
    centres = _centres(rng)
    kinds = range(1, N_COMPONENTS + 1)
    params = [_parameters(rng, kind) for kind in kinds]
    n, n_noise = config.size, config.n_noise
    boost = math.sqrt(config.inflation)
    pts, comp, noise = [], [], []
    for kind, prm, centre in zip(kinds, params, centres):
        place = _component(rng, kind, prm, centre, n)
        flag = np.zeros(n, dtype=bool)
        flag[rng.permutation(n)[:n_noise]] = True
        pts.append(place(np.where(flag, boost, 1.0)))
        comp.append(np.full(n, kind))
        noise.append(flag)
    return SynthSample(
        np.vstack(pts), np.concatenate(comp), np.concatenate(noise), config, centres, tuple(params)
    )


def experiment_grid() -> list:
    """Seeds 1-5 crossed with noise fractions 1/10, 1/5, 1/3."""
    return [SynthConfig(seed=s, noise_fraction=float(f)) for s in SEEDS for f in NOISE_LEVELS]
