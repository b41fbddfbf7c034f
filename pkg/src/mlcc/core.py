"""Shared domain types: datasets, lattices, significance ladders, p-value fields
and the multi-level cluster tree.

Everything here is immutable after construction. Arrays are stored read-only so
instances can be handed to worker threads without copying.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

ANOMALY = -1


class MlccError(Exception):
    """Base class for errors raised by this package."""


class ShapeError(MlccError, ValueError):
    pass


class EmptyInputError(MlccError, ValueError):
    pass


class InsufficientDataError(MlccError, ValueError):
    pass


class UndefinedMetricError(MlccError, ValueError):
    pass


class ParseError(MlccError, ValueError):
    pass


class BudgetError(MlccError, ValueError):
    pass


def _frozen(a, dtype=None) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Dataset:
    """Observed examples as an ``(l, d)`` array, plus optional labels.

    Labels are carried for evaluation only; no clustering routine reads them.
    """

    points: np.ndarray
    labels: Optional[np.ndarray] = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise ShapeError(f"points must be an (l, d) array with d >= 1, got shape {pts.shape}")
        object.__setattr__(self, "points", _frozen(pts))
        if self.labels is not None:
            labels = np.asarray(self.labels)
            if labels.shape != (pts.shape[0],):
                raise ShapeError(
                    f"expected one label per point ({pts.shape[0]}), got shape {labels.shape}"
                )
            object.__setattr__(self, "labels", _frozen(labels))

    @property
    def l(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.l

    def with_points(self, points) -> "Dataset":
        return Dataset(points, self.labels)


@dataclass(frozen=True)
class Lattice:
    """Regular grid with ``resolution[j]`` evenly spaced nodes on
    ``[lower[j], upper[j]]`` (inclusive) per axis.

    Nodes are enumerated in row-major order, last axis fastest.
    """

    resolution: tuple
    lower: tuple
    upper: tuple

    def __post_init__(self):
        res = tuple(int(n) for n in self.resolution)
        lo = tuple(float(v) for v in self.lower)
        hi = tuple(float(v) for v in self.upper)
        if not res or not (len(res) == len(lo) == len(hi)):
            raise ShapeError("resolution, lower and upper must have the same nonzero length")
        if any(n < 1 for n in res):
            raise ValueError(f"every axis needs at least one node, got {res}")
        if any(h < l for l, h in zip(lo, hi)):
            raise ValueError("upper bound below lower bound")
        object.__setattr__(self, "resolution", res)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def regular(cls, d: int, nodes_per_axis: int, scale: float) -> "Lattice":
        """``nodes_per_axis``^d lattice over ``[0, scale]^d``."""
        return cls((nodes_per_axis,) * d, (0.0,) * d, (float(scale),) * d)

    @property
    def d(self) -> int:
        return len(self.resolution)

    @property
    def size(self) -> int:
        return int(np.prod(self.resolution))

    @cached_property
    def axes(self) -> tuple:
        out = []
        for n, lo, hi in zip(self.resolution, self.lower, self.upper):
            ax = np.linspace(lo, hi, n)
            ax.setflags(write=False)
            out.append(ax)
        return tuple(out)

    @cached_property
    def coordinates(self) -> np.ndarray:
        """All node coordinates, shape ``(u, d)``, in node-index order."""
        grids = np.meshgrid(*self.axes, indexing="ij")
        return _frozen(np.stack([g.ravel() for g in grids], axis=1))

    def _check_index(self, index: int) -> int:
        index = int(index)
        if not 0 <= index < self.size:
            raise IndexError(f"node index {index} outside [0, {self.size})")
        return index

    def multi_index(self, index: int) -> tuple:
        return tuple(int(i) for i in np.unravel_index(self._check_index(index), self.resolution))

    def flat_index(self, multi: Sequence[int]) -> int:
        if len(multi) != self.d:
            raise ShapeError(f"expected {self.d} indices, got {len(multi)}")
        return int(np.ravel_multi_index(tuple(int(m) for m in multi), self.resolution))

    def node_coordinates(self, index: int) -> np.ndarray:
        return self.coordinates[self._check_index(index)].copy()

    def nearest_nodes(self, x) -> np.ndarray:
        """Vectorised nearest-node lookup for an ``(n, d)`` array.

        The lattice is separable, so the Euclidean nearest node is the per-axis
        nearest coordinate. Exact ties go to the lower index; points outside the
        bounds clamp to the boundary.
        """
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            x = x.reshape(1, -1)
        if x.ndim != 2 or x.shape[1] != self.d:
            raise ShapeError(f"expected points of dimension {self.d}, got shape {x.shape}")
        multi = []
        for j, ax in enumerate(self.axes):
            n = len(ax)
            col = x[:, j]
            if n == 1:
                multi.append(np.zeros(len(col), dtype=np.int64))
                continue
            # right neighbour candidate, clamped so both candidates exist
            hi = np.clip(np.searchsorted(ax, col, side="left"), 1, n - 1)
            lo = hi - 1
            take_hi = np.abs(ax[hi] - col) < np.abs(col - ax[lo])
            multi.append(np.where(take_hi, hi, lo))
        return np.ravel_multi_index(tuple(multi), self.resolution)

    def nearest_node(self, x) -> int:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.d,):
            raise ShapeError(f"expected a vector of length {self.d}, got shape {x.shape}")
        return int(self.nearest_nodes(x[None, :])[0])


@dataclass(frozen=True)
class EpsilonLadder:
    levels: tuple

    def __post_init__(self):
        levels = tuple(float(e) for e in self.levels)
        if not levels:
            raise ValueError("ladder must contain at least one level")
        if any(not 0.0 < e < 1.0 for e in levels):
            raise ValueError("ladder levels must lie in the open interval (0, 1)")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ValueError("ladder levels must be strictly increasing")
        object.__setattr__(self, "levels", levels)

    def __len__(self) -> int:
        return len(self.levels)

    def __getitem__(self, i):
        return self.levels[i]

    def __iter__(self):
        return iter(self.levels)


@dataclass(frozen=True, eq=False)
class PValueField:
    """Conformal p-values on every lattice node.

    Stored exactly as integer counts: node ``i`` has p-value
    ``counts[i] / (n_train + 1)``.
    """

    lattice: Lattice
    counts: np.ndarray
    n_train: int

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (self.lattice.size,):
            raise ShapeError(f"expected {self.lattice.size} counts, got shape {counts.shape}")
        if counts.size and (counts.min() < 1 or counts.max() > self.n_train + 1):
            raise ValueError("counts must lie in [1, n_train + 1]")
        object.__setattr__(self, "counts", _frozen(counts))

    @cached_property
    def p(self) -> np.ndarray:
        return _frozen(self.counts / (self.n_train + 1))

    def fraction(self, index: int) -> Fraction:
        return Fraction(int(self.counts[index]), self.n_train + 1)

    def __eq__(self, other):
        if not isinstance(other, PValueField):
            return NotImplemented
        return (
            self.lattice == other.lattice
            and self.n_train == other.n_train
            and np.array_equal(self.counts, other.counts)
        )


@dataclass(frozen=True, eq=False)
class VirtualCluster:
    """A connected component of the region of conformity at one ladder level."""

    id: int
    level: int
    nodes: np.ndarray
    parent: Optional[int]
    children: tuple = ()

    @property
    def size(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True, eq=False)
class ClusterTree:
    """Virtual clusters at every ladder level, linked across consecutive levels.

    ``labels[i, node]`` is the id of the cluster holding ``node`` at level ``i``,
    or ``ANOMALY`` when the node is outside the region of conformity.
    ``splits`` holds ``(level, parent_id)`` for every parent with two or more
    children at ``level``; ``deaths`` holds ``(level, cluster_id)`` for every
    cluster with no child at ``level``.
    """

    lattice: Lattice
    ladder: EpsilonLadder
    clusters: tuple
    levels: tuple
    labels: np.ndarray
    splits: tuple = ()
    deaths: tuple = ()

    def __getitem__(self, cid: int) -> VirtualCluster:
        return self.clusters[cid]

    @property
    def n_levels(self) -> int:
        return len(self.ladder)


@dataclass(frozen=True)
class PointTrajectory:
    """Cluster id (or ``ANOMALY``) of one example at each ladder level."""

    example: int
    node: int
    clusters: tuple = field(default_factory=tuple)

    @property
    def death_level(self) -> Optional[int]:
        for i, c in enumerate(self.clusters):
            if c == ANOMALY:
                return i
        return None
