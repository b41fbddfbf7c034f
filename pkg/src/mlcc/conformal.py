"""Conformal p-values for single queries and for every node of a lattice.

For a query ``z`` the bag is augmented to ``l + 1`` examples, every example is
scored against the other ``l`` (leave-one-out), and the p-value is the fraction
of scores that are at least the query's own score.

:func:`p_value` does exactly that, one leave-one-out score at a time. The
vectorised path behind :func:`p_value_counts` and :func:`field` avoids the
O(l^2) rescoring per query: a training point's neighbour list only changes if
the query lands among its ``k`` nearest, so its score is its precomputed
``k``-nearest list with the query distance merged in and the largest entry
dropped. The merged list is summed in the same ascending order as
:func:`mlcc.ncm.knn_sum_ncm`, so both paths agree bit for bit.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from .core import Dataset, Lattice, PValueField, ShapeError
from .ncm import NcmConfig, ascending_sum, distances, knn_sum_ncm

DEFAULT_BLOCK = 256


def p_value(dataset: Dataset, z, config: NcmConfig) -> Fraction:
    """Exact p-value of ``z``, recomputing all ``l + 1`` scores from scratch."""
    z = np.asarray(z, dtype=float).reshape(-1)
    if z.shape[0] != dataset.d:
        raise ShapeError(f"query has dimension {z.shape[0]}, data has {dataset.d}")
    config.check_bag(dataset.l)
    bag = np.vstack([dataset.points, z[None, :]])
    n = len(bag)
    alphas = [knn_sum_ncm(np.delete(bag, i, axis=0), bag[i], config) for i in range(n)]
    count = sum(1 for a in alphas if a >= alphas[-1])
    return Fraction(count, n)


def training_neighbours(points: np.ndarray, k: int) -> np.ndarray:
    """Sorted distances from each point to its ``k`` nearest other points.

    Shape ``(l, k)``; padded with ``inf`` when fewer than ``k`` others exist.
    """
    l = len(points)
    dm = distances(points, points)
    np.fill_diagonal(dm, np.inf)
    if l - 1 > k:
        dm = np.partition(dm, k - 1, axis=1)[:, :k]
    dm = np.sort(dm, axis=1)
    if dm.shape[1] < k:
        dm = np.hstack([dm, np.full((l, k - dm.shape[1]), np.inf)])
    return dm[:, :k]


def _block_counts(points, knn, queries, k) -> np.ndarray:
    dq = distances(queries, points)  # (B, l)
    # score of each query against the l training points
    if dq.shape[1] > k:
        nearest = np.partition(dq, k - 1, axis=1)[:, :k]
    else:
        nearest = dq
    query_alpha = ascending_sum(np.sort(nearest, axis=1)[:, :k])

    # position at which the query distance enters each training point's list
    pos = (knn[None, :, :] < dq[:, :, None]).sum(axis=2)  # (B, l), in [0, k]
    cols = []
    for c in range(k):
        prev = knn[:, c - 1] if c > 0 else knn[:, 0]
        col = np.where(c < pos, knn[None, :, c], np.where(c == pos, dq, prev[None, :]))
        cols.append(col)
    train_alpha = ascending_sum(np.stack(cols, axis=-1))
    return 1 + (train_alpha >= query_alpha[:, None]).sum(axis=1)


def resolve_workers(workers) -> int:
    if workers in (None, "max"):
        return os.cpu_count() or 1
    workers = int(workers)
    if workers < 1:
        raise ValueError(f"worker count must be >= 1, got {workers}")
    return workers


def p_value_counts(
    dataset: Dataset,
    queries,
    config: NcmConfig,
    workers=1,
    block: int = DEFAULT_BLOCK,
) -> np.ndarray:
    """Numerators of the p-values of each query row (denominator ``l + 1``).

    Queries are split into fixed-size blocks that are evaluated independently;
    results are written back by position, so the output does not depend on the
    number of workers or on scheduling.
    """
    queries = np.asarray(queries, dtype=float)
    if queries.ndim != 2 or queries.shape[1] != dataset.d:
        raise ShapeError(f"queries must have shape (n, {dataset.d}), got {queries.shape}")
    config.check_bag(dataset.l)
    points = dataset.points
    k = config.k
    knn = training_neighbours(points, k)
    out = np.empty(len(queries), dtype=np.int64)
    starts = range(0, len(queries), block)

    def run(start):
        out[start : start + block] = _block_counts(points, knn, queries[start : start + block], k)

    n_workers = resolve_workers(workers)
    if n_workers == 1 or len(starts) == 1:
        for s in starts:
            run(s)
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            list(pool.map(run, starts))
    return out


def p_values(dataset: Dataset, queries, config: NcmConfig, **kwargs) -> np.ndarray:
    return p_value_counts(dataset, queries, config, **kwargs) / (dataset.l + 1)


def field(
    dataset: Dataset,
    lattice: Lattice,
    config: NcmConfig,
    workers=1,
    block: int = DEFAULT_BLOCK,
) -> PValueField:
    """p-value of every lattice node, treating the node as the new example."""
    if lattice.d != dataset.d:
        raise ShapeError(f"lattice is {lattice.d}-D but data is {dataset.d}-D")
    counts = p_value_counts(dataset, lattice.coordinates, config, workers=workers, block=block)
    return PValueField(lattice, counts, dataset.l)
