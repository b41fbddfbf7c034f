"""Cluster purity and anomaly-detection AUC."""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .baseline_hc import HcTree
from .core import EmptyInputError, UndefinedMetricError
from .multilevel import Dendrogram


@dataclass(frozen=True)
class PurityReport:
    purities: tuple
    sizes: tuple
    mean: float
    rule: str
    warning: str = ""


@dataclass(frozen=True)
class AucReport:
    auc: float
    n_positive: int
    n_negative: int


def purity(labels) -> float:
    """Largest single-class share of a cluster."""
    labels = list(np.asarray(labels).tolist())
    if not labels:
        raise EmptyInputError("purity of an empty cluster is undefined")
    return max(Counter(labels).values()) / len(labels)


def _report(groups, labels, rule, warning="") -> PurityReport:
    labels = np.asarray(labels)
    groups = [g for g in groups if len(g)]
    vals = tuple(purity(labels[g]) for g in groups)
    return PurityReport(vals, tuple(len(g) for g in groups), float(np.mean(vals)), rule, warning)


def averaged_purity_mlcc(dendrogram: Dendrogram, labels, n_splits: int = 10) -> PurityReport:
    """Mean purity of the data clusters born in the first ``n_splits`` splits.

    Splits are taken in order of increasing significance level; each child is
    evaluated on the examples it holds at the level where it first appears.
    Only splits into two or more nonempty data clusters count.
    """
    tree = dendrogram.tree
    members = dendrogram.cluster_examples
    markers = dendrogram.split_markers[:n_splits]
    if not markers:
        roots = [c for c in tree.levels[0] if c in members]
        root = max(roots, key=lambda c: (len(members[c]), -c))
        return _report([members[root]], labels, "single cluster (no splits)", "no splits")
    groups = []
    for _, parent in markers:
        groups.extend(members[c] for c in tree[parent].children if c in members)
    warning = "" if len(markers) == n_splits else f"only {len(markers)} splits available"
    return _report(groups, labels, f"children of first {n_splits} splits", warning)


def averaged_purity_hc(tree: HcTree, labels, n_splits: int = 10) -> PurityReport:
    """Same rule for the single-linkage tree read top-down: the two clusters
    joined by each of the last ``n_splits`` merges."""
    warning = ""
    if tree.n < 20:
        warning = f"only {tree.n} examples; fewer than 20 clusters available"
        warnings.warn(warning)
    tail = tree.merges[::-1][:n_splits]
    groups = []
    for a, b, _ in tail:
        groups.extend((tree.members(a), tree.members(b)))
    return _report(groups, labels, f"children of first {n_splits} splits", warning)


def anomaly_auc(p_values, is_noise) -> AucReport:
    """AUC for ranking noise above normal examples by ascending p-value.

    Mann-Whitney statistic with average ranks for ties, which equals the area
    under the ROC curve traced by sweeping the significance level.
    """
    p = np.asarray(p_values, dtype=float)
    pos = np.asarray(is_noise).astype(bool)
    if p.shape != pos.shape:
        raise ValueError("p-values and noise flags must have the same length")
    n_pos = int(pos.sum())
    n_neg = len(pos) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError("AUC needs both noise and normal examples")
    ranks = rankdata(-p)
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2
    return AucReport(float(u / (n_pos * n_neg)), n_pos, n_neg)
