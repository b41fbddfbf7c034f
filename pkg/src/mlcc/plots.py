"""SVG figures: region of conformity scatter plots and the multi-level dendrogram."""

from __future__ import annotations

import itertools

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.collections import PolyCollection  # noqa: E402

plt.rcParams["svg.hashsalt"] = "mlcc"

REGION_COLOUR = "#ffe94d"
LABEL_COLOURS = ("black", "red", "tab:blue", "tab:green", "tab:purple", "tab:orange", "tab:cyan")


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _point_colours(labels, n):
    if labels is None:
        return ["black"] * n
    classes = {v: i for i, v in enumerate(sorted(set(np.asarray(labels).tolist()), key=str))}
    return [LABEL_COLOURS[classes[v] % len(LABEL_COLOURS)] for v in np.asarray(labels).tolist()]


def region_svg(path, field, eps, points, labels=None, axes=(0, 1)) -> None:
    """Region of conformity at ``eps`` (yellow) with the data on top.

    For lattices above 2-D the region is projected onto ``axes``: a cell is
    shaded if any node along the dropped axes is in the region.
    """
    lat = field.lattice
    a, b = axes
    mask = (field.p >= eps).reshape(lat.resolution)
    drop = tuple(j for j in range(lat.d) if j not in axes)
    if drop:
        mask = mask.any(axis=drop)
    ax_a, ax_b = lat.axes[a], lat.axes[b]

    def edges(ax):
        if len(ax) == 1:
            return np.array([ax[0] - 0.5, ax[0] + 0.5])
        mid = (ax[1:] + ax[:-1]) / 2
        return np.concatenate([[2 * ax[0] - mid[0]], mid, [2 * ax[-1] - mid[-1]]])

    fig, ax = plt.subplots(figsize=(5, 5))
    ax.pcolormesh(
        edges(ax_a), edges(ax_b), mask.T.astype(float),
        cmap=matplotlib.colors.ListedColormap(["white", REGION_COLOUR]), vmin=0, vmax=1,
    )
    pts = np.asarray(points)
    ax.scatter(pts[:, a], pts[:, b], s=6, c=_point_colours(labels, len(pts)), linewidths=0)
    ax.set_xlabel(f"feature {a + 1}")
    ax.set_ylabel(f"feature {b + 1}")
    ax.set_title(f"region of conformity, eps = {eps:g}")
    ax.set_aspect("equal")
    _save(fig, path)


def projection_pairs(d: int) -> list:
    return list(itertools.combinations(range(d), 2)) if d in (2, 3) else []


def dendrogram_svg(path, dendrogram) -> None:
    """Data clusters as grey bars (x: reordered examples, y: eps); split
    points as circles."""
    tree = dendrogram.tree
    levels = np.asarray(tree.ladder.levels)
    tops = np.append(levels[1:], levels[-1] + (levels[-1] - levels[-2] if len(levels) > 1 else 0.01))
    polys = []
    inset = 0.15
    for cid, (start, stop) in dendrogram.runs.items():
        lvl = tree[cid].level
        y0, y1 = levels[lvl], tops[lvl]
        x0, x1 = start + inset, stop - inset
        polys.append([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
    fig, ax = plt.subplots(figsize=(10, 5))
    ax.add_collection(PolyCollection(polys, facecolors="0.6", edgecolors="none"))
    if dendrogram.split_markers:
        xs, ys = [], []
        for lvl, parent in dendrogram.split_markers:
            start, stop = dendrogram.runs[parent]
            xs.append((start + stop) / 2)
            ys.append(levels[lvl])
        ax.scatter(xs, ys, s=30, facecolors="none", edgecolors="black", linewidths=1)
    ax.set_xlim(0, len(dendrogram.leaf_order))
    ax.set_ylim(0, tops[-1])
    ax.set_xlabel("example (reordered)")
    ax.set_ylabel("significance level")
    _save(fig, path)


def cluster_count_svg(path, counts) -> None:
    eps, n = zip(*counts)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.step(eps, n, where="post", color="black")
    ax.set_xlabel("significance level")
    ax.set_ylabel("number of clusters")
    _save(fig, path)
