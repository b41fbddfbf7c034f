"""Agglomerative single-linkage clustering, used as the comparison baseline."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dataset, InsufficientDataError
from .ncm import distances


@dataclass(frozen=True, eq=False)
class HcTree:
    """Merge history of ``n`` leaves.

    Leaves are clusters ``0..n-1``; merge ``m`` joins clusters ``a < b`` at
    ``distance`` and creates cluster ``n + m`` (the scipy linkage convention).
    """

    n: int
    merges: tuple  # ((a, b, distance), ...)

    def members(self, cid: int) -> np.ndarray:
        stack, out = [cid], []
        while stack:
            c = stack.pop()
            if c < self.n:
                out.append(c)
            else:
                a, b, _ = self.merges[c - self.n]
                stack.extend((a, b))
        return np.sort(np.asarray(out, dtype=np.int64))

    def distances(self) -> np.ndarray:
        return np.array([m[2] for m in self.merges])


def single_linkage(dataset: Dataset) -> HcTree:
    """Naive O(l^3) single linkage on Euclidean distances.

    Among equally close pairs the one with the lexicographically smallest
    (smaller id, larger id) is merged first.
    """
    pts = dataset.points
    n = len(pts)
    if n < 2:
        raise InsufficientDataError(f"single linkage needs at least 2 points, got {n}")
    dist = distances(pts, pts)
    np.fill_diagonal(dist, np.inf)
    ids = np.arange(n)  # slot -> cluster id
    merges = []
    for m in range(n - 1):
        dmin = dist.min()
        ii, jj = np.nonzero(dist == dmin)
        keep = ii < jj
        ii, jj = ii[keep], jj[keep]
        lo = np.minimum(ids[ii], ids[jj])
        hi = np.maximum(ids[ii], ids[jj])
        pick = np.lexsort((hi, lo))[0]
        i, j = int(ii[pick]), int(jj[pick])
        merges.append((int(lo[pick]), int(hi[pick]), float(dmin)))
        row = np.minimum(dist[i], dist[j])
        row[i] = np.inf
        dist[i, :] = row
        dist[:, i] = row
        dist[j, :] = np.inf
        dist[:, j] = np.inf
        ids[i] = n + m
    return HcTree(n, tuple(merges))


def cut(tree: HcTree, k: int) -> list:
    """Partition into ``k`` clusters by undoing the last ``k - 1`` merges.

    Blocks are sorted by descending size, ties by smallest member.
    """
    if not 1 <= k <= tree.n:
        raise ValueError(f"k must lie in [1, {tree.n}], got {k}")
    top = set(range(tree.n))
    for m, (a, b, _) in enumerate(tree.merges[: tree.n - k]):
        top -= {a, b}
        top.add(tree.n + m)
    blocks = [tree.members(c) for c in top]
    return sorted(blocks, key=lambda b: (-len(b), int(b[0])))
