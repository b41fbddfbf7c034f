"""Per-feature min-max rescaling onto ``[0, S]``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dataset, EmptyInputError, ShapeError


@dataclass(frozen=True, eq=False)
class RescaleParams:
    minimum: np.ndarray
    maximum: np.ndarray
    scale: float

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if np.any(self.maximum < self.minimum):
            raise ValueError("per-feature maximum below minimum")

    @property
    def d(self) -> int:
        return len(self.minimum)


def default_scale(d: int) -> float:
    """Axis length of the rescaled space: 50 in 2-D, 20 in 3-D.

    Other dimensionalities fall back to ``round(100 / d)``.
    """
    if d < 1:
        raise ValueError(f"dimensionality must be >= 1, got {d}")
    known = {2: 50.0, 3: 20.0}
    return known.get(d, float(round(100 / d)))


def fit_rescale(dataset: Dataset, scale: float) -> RescaleParams:
    if dataset.l == 0:
        raise EmptyInputError("cannot fit rescaling on an empty dataset")
    pts = dataset.points
    return RescaleParams(pts.min(axis=0).copy(), pts.max(axis=0).copy(), float(scale))


def apply_rescale(params: RescaleParams, x) -> np.ndarray:
    """Map ``x`` (a vector or an ``(n, d)`` array) into the rescaled space.

    Constant features (max == min) map to 0.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != params.d:
        raise ShapeError(f"expected {params.d} features, got {x.shape[-1]}")
    span = params.maximum - params.minimum
    safe = np.where(span > 0, span, 1.0)
    # divide first so the maximum lands on exactly S
    out = params.scale * ((x - params.minimum) / safe)
    return np.where(span > 0, out, 0.0)


def rescale_dataset(dataset: Dataset, scale: float) -> tuple:
    params = fit_rescale(dataset, scale)
    return dataset.with_points(apply_rescale(params, dataset.points)), params
