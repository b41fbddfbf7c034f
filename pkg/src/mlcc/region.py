"""Regions of conformity and their connected components on the lattice."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import Lattice, PValueField

ADJACENCY = ("moore", "vonneumann")


def threshold(field: PValueField, eps: float) -> np.ndarray:
    """Sorted indices of nodes with p-value >= eps."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"significance level must lie in (0, 1), got {eps}")
    return np.flatnonzero(field.p >= eps)


def neighbour_offsets(d: int, adjacency: str = "moore") -> np.ndarray:
    """Multi-index offsets of the neighbours of a node.

    ``moore``: every offset in {-1, 0, 1}^d except zero (3^d - 1 neighbours).
    ``vonneumann``: +-1 along a single axis (2d neighbours).
    """
    if adjacency not in ADJACENCY:
        raise ValueError(f"unknown adjacency {adjacency!r}; choose from {ADJACENCY}")
    offs = [o for o in itertools.product((-1, 0, 1), repeat=d) if any(o)]
    if adjacency == "vonneumann":
        offs = [o for o in offs if sum(map(abs, o)) == 1]
    return np.array(offs, dtype=np.int64).reshape(-1, d)


def neighbour_table(lattice: Lattice, adjacency: str = "moore") -> np.ndarray:
    """``(u, m)`` array of neighbour node indices, ``-1`` past the boundary."""
    offs = neighbour_offsets(lattice.d, adjacency)
    multi = np.stack(np.unravel_index(np.arange(lattice.size), lattice.resolution), axis=1)
    res = np.array(lattice.resolution)
    cand = multi[:, None, :] + offs[None, :, :]
    inside = np.all((cand >= 0) & (cand < res), axis=2)
    cand = np.where(inside[:, :, None], cand, 0)
    flat = np.ravel_multi_index(tuple(np.moveaxis(cand, 2, 0)), lattice.resolution)
    return np.where(inside, flat, -1)


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, a: int) -> int:
        parent = self.parent
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra

    def roots(self, items: np.ndarray) -> np.ndarray:
        """Roots of ``items``, resolved by vectorised pointer jumping."""
        parent = np.asarray(self.parent, dtype=np.int64)
        while True:
            nxt = parent[parent]
            if np.array_equal(nxt, parent):
                break
            parent = nxt
        return parent[items]


@dataclass(frozen=True, eq=False)
class Components:
    """Canonical labelling of a member set.

    ``labels[i]`` is the component of ``nodes[i]``. Components are numbered by
    descending size, ties broken by the smallest node index they contain.
    """

    nodes: np.ndarray
    labels: np.ndarray

    @property
    def count(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.count)

    def groups(self) -> list:
        order = np.argsort(self.labels, kind="stable")
        bounds = np.cumsum(self.sizes())[:-1]
        return np.split(self.nodes[order], bounds) if len(self.nodes) else []

    def as_array(self, u: int) -> np.ndarray:
        out = np.full(u, -1, dtype=np.int64)
        out[self.nodes] = self.labels
        return out


def canonical_labels(nodes: np.ndarray, roots: np.ndarray) -> np.ndarray:
    """Relabel arbitrary root ids to the canonical numbering.

    ``nodes`` must be sorted ascending so the first occurrence of a root is its
    smallest member.
    """
    if len(nodes) == 0:
        return np.empty(0, dtype=np.int64)
    uniq, first, inverse, counts = np.unique(
        roots, return_index=True, return_inverse=True, return_counts=True
    )
    rank = np.lexsort((nodes[first], -counts))
    relabel = np.empty(len(uniq), dtype=np.int64)
    relabel[rank] = np.arange(len(uniq))
    return relabel[inverse.reshape(-1)]


def connected_components(lattice: Lattice, members, adjacency: str = "moore") -> Components:
    nodes = np.unique(np.asarray(members, dtype=np.int64))
    if len(nodes) and (nodes[0] < 0 or nodes[-1] >= lattice.size):
        raise IndexError("member node index outside the lattice")
    table = neighbour_table(lattice, adjacency)
    member = np.zeros(lattice.size, dtype=bool)
    member[nodes] = True
    uf = UnionFind(lattice.size)
    nbrs = table[nodes]
    src, col = np.nonzero((nbrs >= 0) & member[np.maximum(nbrs, 0)])
    for a, b in zip(nodes[src].tolist(), nbrs[src, col].tolist()):
        uf.union(a, b)
    return Components(nodes, canonical_labels(nodes, uf.roots(nodes)))


def nested_components(field: PValueField, levels, adjacency: str = "moore") -> list:
    """Component labelling of the region at every level in ``levels``.

    Regions are nested (higher level, smaller region), so a single union-find
    is grown from the highest level down: each node is inserted once, when the
    threshold first admits it. Returns one :class:`Components` per level, in the
    order of ``levels`` (which must be increasing).
    """
    levels = list(levels)
    lattice = field.lattice
    table = neighbour_table(lattice, adjacency).tolist()
    p = field.p
    order = np.argsort(-p, kind="stable")
    member = [False] * lattice.size
    uf = UnionFind(lattice.size)
    out = [None] * len(levels)
    pos = 0
    for li in range(len(levels) - 1, -1, -1):
        eps = levels[li]
        while pos < len(order) and p[order[pos]] >= eps:
            n = int(order[pos])
            member[n] = True
            for nb in table[n]:
                if nb >= 0 and member[nb]:
                    uf.union(n, nb)
            pos += 1
        nodes = np.sort(order[:pos])
        out[li] = Components(nodes, canonical_labels(nodes, uf.roots(nodes)))
    return out
