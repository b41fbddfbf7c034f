"""k-nearest-neighbour nonconformity measure.

Score of ``z`` against a bag: the sum of Euclidean distances from ``z`` to its
``k`` nearest bag members.

Floating-point evaluation order is fixed so that every code path (the scalar
measure below, the vectorised lattice evaluation in :mod:`mlcc.conformal`, and
plain-Python references in the tests) produces bit-identical scores:

* a distance is ``sqrt`` of the squared coordinate differences summed from the
  first axis to the last;
* a score is the ``k`` smallest distances summed in ascending order, left to
  right.

Conformal p-values compare scores with ``>=``, so any disagreement in the last
bit between two paths would show up as a different p-value on tied inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import InsufficientDataError, ShapeError

METRICS = ("euclidean",)


@dataclass(frozen=True)
class NcmConfig:
    k: int = 5
    metric: str = "euclidean"

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k}")
        if self.metric not in METRICS:
            raise ValueError(f"unsupported metric {self.metric!r}; choose from {METRICS}")

    def check_bag(self, n: int) -> None:
        if n < self.k:
            raise InsufficientDataError(f"need at least k={self.k} examples, got {n}")


def distances(a, b) -> np.ndarray:
    """Euclidean distance matrix between rows of ``a`` (n, d) and ``b`` (m, d)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[1]:
        raise ShapeError(f"incompatible shapes {a.shape} and {b.shape}")
    acc = None
    for j in range(a.shape[1]):
        diff = a[:, j, None] - b[None, :, j]
        sq = diff * diff
        acc = sq if acc is None else acc + sq
    return np.sqrt(acc)


def ascending_sum(sorted_cols: np.ndarray) -> np.ndarray:
    """Left-to-right sum along the last axis.

    ``np.sum`` uses pairwise/unrolled accumulation, whose order depends on the
    array length, so it is not used here.
    """
    acc = sorted_cols[..., 0].copy()
    for c in range(1, sorted_cols.shape[-1]):
        acc += sorted_cols[..., c]
    return acc


def knn_sum_ncm(bag, z, config: NcmConfig) -> float:
    """Sum of distances from ``z`` to its ``config.k`` nearest points of ``bag``.

    ``z`` must not be a member of ``bag``; callers implement leave-one-out by
    passing the bag without it.
    """
    bag = np.asarray(bag, dtype=float)
    if bag.ndim == 1:
        bag = bag.reshape(-1, 1)
    z = np.asarray(z, dtype=float).reshape(1, -1)
    if bag.shape[1] != z.shape[1]:
        raise ShapeError(f"bag has dimension {bag.shape[1]}, query has {z.shape[1]}")
    config.check_bag(len(bag))
    d = np.sort(distances(bag, z)[:, 0])[: config.k]
    return float(ascending_sum(d))
