"""Clustering over a ladder of significance levels and the resulting dendrogram."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    ANOMALY,
    ClusterTree,
    Dataset,
    EpsilonLadder,
    Lattice,
    PointTrajectory,
    PValueField,
    VirtualCluster,
)
from .region import nested_components


def default_ladder(l: int, step: int = 1) -> EpsilonLadder:
    """All attainable thresholds ``k / (l + 1)``, ``k = 1..l``.

    ``step > 1`` keeps every ``step``-th threshold (always including the first).
    """
    if l < 1:
        raise ValueError(f"need at least one example, got l={l}")
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    return EpsilonLadder(tuple(k / (l + 1) for k in range(1, l + 1, step)))


def build_tree(field: PValueField, ladder: EpsilonLadder, adjacency: str = "moore") -> ClusterTree:
    comps = nested_components(field, ladder.levels, adjacency)
    u = field.lattice.size
    w = len(ladder)
    labels = np.full((w, u), ANOMALY, dtype=np.int32)
    rows = []  # [id, level, nodes, parent, children]
    levels = []
    for li, comp in enumerate(comps):
        ids = []
        for local, nodes in enumerate(comp.groups()):
            cid = len(rows)
            parent = int(labels[li - 1, nodes[0]]) if li > 0 else None
            if parent is not None:
                rows[parent][4].append(cid)
            rows.append([cid, li, nodes, parent, []])
            labels[li, nodes] = cid
            ids.append(cid)
        levels.append(tuple(ids))

    splits, deaths = [], []
    for cid, li, _, _, children in rows:
        if li + 1 >= w:
            continue
        if len(children) >= 2:
            splits.append((li + 1, cid))
        elif not children:
            deaths.append((li + 1, cid))
    clusters = []
    for cid, li, nodes, parent, children in rows:
        nodes = np.asarray(nodes)
        nodes.setflags(write=False)
        clusters.append(VirtualCluster(cid, li, nodes, parent, tuple(children)))
    labels.setflags(write=False)
    return ClusterTree(
        field.lattice,
        ladder,
        tuple(clusters),
        tuple(levels),
        labels,
        tuple(sorted(splits)),
        tuple(sorted(deaths)),
    )


@dataclass(frozen=True, eq=False)
class Trajectories:
    """Per-example nearest node and cluster id at every level.

    ``membership[i, level]`` is a cluster id or ``ANOMALY``.
    """

    nodes: np.ndarray
    membership: np.ndarray

    def __len__(self) -> int:
        return len(self.nodes)

    def __getitem__(self, i: int) -> PointTrajectory:
        return PointTrajectory(i, int(self.nodes[i]), tuple(int(c) for c in self.membership[i]))

    def death_levels(self) -> np.ndarray:
        """First level index at which each example is anomalous; ``n_levels`` if never."""
        w = self.membership.shape[1]
        dead = self.membership == ANOMALY
        return np.where(dead.any(axis=1), dead.argmax(axis=1), w)

    def cluster_examples(self) -> dict:
        """Map cluster id to the sorted indices of its examples (data clusters only)."""
        out = {}
        for level in range(self.membership.shape[1]):
            col = self.membership[:, level]
            idx = np.flatnonzero(col != ANOMALY)
            order = np.argsort(col[idx], kind="stable")
            ids, starts = np.unique(col[idx][order], return_index=True)
            for cid, grp in zip(ids.tolist(), np.split(idx[order], starts[1:])):
                out[cid] = grp
        return out


def trajectories(dataset: Dataset, tree: ClusterTree, lattice: Optional[Lattice] = None) -> Trajectories:
    """Project examples onto their nearest nodes and read off cluster ids.

    ``dataset`` must already be in lattice coordinates (rescaled).
    """
    lattice = lattice or tree.lattice
    nodes = lattice.nearest_nodes(dataset.points)
    membership = np.ascontiguousarray(tree.labels[:, nodes].T)
    nodes.setflags(write=False)
    membership.setflags(write=False)
    return Trajectories(nodes, membership)


@dataclass(frozen=True, eq=False)
class Dendrogram:
    """Cluster tree plus example-level layout.

    ``leaf_order[j]`` is the example drawn at position ``j``. ``runs`` maps each
    data cluster to the half-open range of positions its examples occupy.
    ``split_markers`` lists ``(level, parent_id)`` for every cluster whose
    examples separate into two or more nonempty children.
    """

    tree: ClusterTree
    trajectories: Trajectories
    leaf_order: np.ndarray
    death_level: np.ndarray
    cluster_examples: dict
    runs: dict
    split_markers: tuple

    def death_eps(self, example: int) -> Optional[float]:
        lvl = int(self.death_level[example])
        return None if lvl >= self.tree.n_levels else self.tree.ladder[lvl]


def leaf_order(traj: Trajectories, tree: ClusterTree) -> Dendrogram:
    """Lay examples out so every data cluster is a contiguous run.

    Within a cluster: nonempty children left to right by descending example
    count, then the examples that drop out before the next level, on the right.
    Recursing down a chain of single children therefore sorts a cluster's own
    examples by descending death level. Ties keep input order.
    """
    members = traj.cluster_examples()
    count = {cid: len(ex) for cid, ex in members.items()}
    death = traj.death_levels()
    w = tree.n_levels

    def data_children(cid):
        kids = [c for c in tree[cid].children if count.get(c, 0) > 0]
        return sorted(kids, key=lambda c: (-count[c], c))

    roots = sorted((c for c in tree.levels[0] if count.get(c, 0) > 0), key=lambda c: (-count[c], c))
    dead_at_start = np.flatnonzero(death == 0)

    order = []
    stack = [("examples", dead_at_start)] + [("cluster", c) for c in reversed(roots)]
    while stack:
        kind, item = stack.pop()
        if kind == "examples":
            order.extend(item.tolist())
            continue
        cid = item
        level = tree[cid].level
        ex = members[cid]
        if level + 1 < w:
            dropping = ex[traj.membership[ex, level + 1] == ANOMALY]
        else:
            dropping = ex
        stack.append(("examples", dropping))
        for c in reversed(data_children(cid)):
            stack.append(("cluster", c))

    leaf = np.asarray(order, dtype=np.int64)
    position = np.empty_like(leaf)
    position[leaf] = np.arange(len(leaf))
    runs = {}
    for cid, ex in members.items():
        pos = position[ex]
        runs[cid] = (int(pos.min()), int(pos.max()) + 1)
    markers = tuple(
        (tree[cid].level + 1, cid)
        for cid in sorted(members, key=lambda c: (tree[c].level, c))
        if len(data_children(cid)) >= 2
    )
    leaf.setflags(write=False)
    return Dendrogram(tree, traj, leaf, death, members, runs, markers)


def cluster_counts(tree: ClusterTree) -> list:
    """``(eps, number of virtual clusters)`` at each ladder level."""
    return [(eps, len(ids)) for eps, ids in zip(tree.ladder.levels, tree.levels)]
