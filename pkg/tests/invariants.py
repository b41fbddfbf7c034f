"""Exhaustive structural checks on a cluster tree and its dendrogram."""

import numpy as np

from mlcc.core import ANOMALY


def tree_violations(tree, field=None):
    out = []
    for li, ids in enumerate(tree.levels):
        seen = set()
        for cid in ids:
            c = tree[cid]
            nodes = set(c.nodes.tolist())
            if seen & nodes:
                out.append(f"level {li}: cluster {cid} overlaps another cluster")
            seen |= nodes
            if c.level != li:
                out.append(f"cluster {cid} listed at level {li} but has level {c.level}")
            if li > 0:
                parent = tree[c.parent]
                if parent.level != li - 1 or cid not in parent.children:
                    out.append(f"cluster {cid}: broken parent link")
                if not nodes <= set(parent.nodes.tolist()):
                    out.append(f"cluster {cid} not contained in parent {c.parent}")
            elif c.parent is not None:
                out.append(f"root {cid} has a parent")
        if field is not None:
            region = set(np.flatnonzero(field.p >= tree.ladder[li]).tolist())
            if region != seen:
                out.append(f"level {li}: clusters do not cover exactly the region")
        if li > 0 and not seen <= set(np.flatnonzero(tree.labels[li - 1] != ANOMALY).tolist()):
            out.append(f"level {li}: region not nested in previous level")
    return out


def dendrogram_violations(dn):
    out = []
    tree, traj = dn.tree, dn.trajectories
    l = len(traj)
    if sorted(dn.leaf_order.tolist()) != list(range(l)):
        out.append("leaf order is not a permutation")
        return out
    pos = np.empty(l, dtype=int)
    pos[dn.leaf_order] = np.arange(l)
    m = traj.membership
    for i in range(1, m.shape[1]):
        inside = m[:, i] != ANOMALY
        if np.any(m[inside, i - 1] == ANOMALY):
            out.append(f"level {i}: example in a cluster after being anomalous")
        for e in np.flatnonzero(inside):
            if tree[m[e, i]].parent != m[e, i - 1]:
                out.append(f"example {e}: trajectory does not follow parent links")
                break
    for cid, ex in dn.cluster_examples.items():
        p = np.sort(pos[ex])
        if p[-1] - p[0] + 1 != len(p):
            out.append(f"cluster {cid}: examples not contiguous")
        kids = [c for c in tree[cid].children if c in dn.cluster_examples]
        sizes = [len(dn.cluster_examples[c]) for c in sorted(kids, key=lambda c: dn.runs[c][0])]
        if sizes != sorted(sizes, reverse=True):
            out.append(f"cluster {cid}: children not ordered by size")
        level = tree[cid].level
        if level + 1 < tree.n_levels:
            dropping = ex[m[ex, level + 1] == ANOMALY]
            if len(dropping) + sum(sizes) != len(ex):
                out.append(f"cluster {cid}: example counts do not add up")
            if len(dropping) and pos[dropping].min() < max([dn.runs[c][1] for c in kids], default=0):
                out.append(f"cluster {cid}: dropping examples not right of children")
    return out
