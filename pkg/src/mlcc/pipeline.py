"""End-to-end runs: ingest, rescale, evaluate the lattice, build the tree, write
artifacts."""

from __future__ import annotations

import dataclasses
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from . import io as mio
from .conformal import field as pvalue_field
from .core import BudgetError, Dataset, EpsilonLadder, Lattice
from .multilevel import build_tree, cluster_counts, default_ladder, leaf_order, trajectories
from .ncm import NcmConfig
from .preprocess import default_scale, rescale_dataset
from .region import ADJACENCY

log = logging.getLogger(__name__)

NODE_BUDGET = 1_000_000


def default_resolution(d: int) -> int:
    return 50 if d <= 2 else 20


@dataclass
class RunConfig:
    input: Optional[str] = None
    output: str = "mlcc-out"
    features: Optional[tuple] = None
    exclude: tuple = ()
    label: Optional[str] = None
    binarize: bool = False
    scale: Optional[float] = None
    resolution: Optional[tuple] = None
    k: int = 5
    ladder: Optional[tuple] = None  # explicit levels; default: every k/(l+1)
    ladder_step: int = 1
    adjacency: str = "moore"
    workers: object = 1
    plot_eps: tuple = (0.05, 0.2)
    svg: bool = True
    node_budget: int = NODE_BUDGET

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.adjacency not in ADJACENCY:
            raise ValueError(f"adjacency must be one of {ADJACENCY}")
        if self.scale is not None and self.scale <= 0:
            raise ValueError("scale must be positive")
        if self.resolution is not None and any(int(n) < 1 for n in self.resolution):
            raise ValueError("resolution entries must be >= 1")
        if self.ladder_step < 1:
            raise ValueError("ladder_step must be >= 1")
        if self.node_budget < 1:
            raise ValueError("node_budget must be >= 1")
        for e in self.plot_eps:
            if not 0 < e < 1:
                raise ValueError(f"plot level {e} outside (0, 1)")

    def to_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in dataclasses.asdict(self).items()}


@dataclass
class RunResult:
    dataset: Dataset  # rescaled
    raw: Dataset
    lattice: Lattice
    field: object
    tree: object = None
    trajectories: object = None
    dendrogram: object = None
    timings: dict = field(default_factory=dict)
    rescale: object = None


def make_lattice(d: int, config: RunConfig) -> Lattice:
    scale = config.scale if config.scale is not None else default_scale(d)
    res = config.resolution or (default_resolution(d),) * d
    if len(res) == 1 and d > 1:
        res = tuple(res) * d
    if len(res) != d:
        raise ValueError(f"resolution has {len(res)} entries for {d}-D data")
    u = int(np.prod(res))
    if u > config.node_budget:
        raise BudgetError(
            f"lattice {'x'.join(map(str, res))} has {u} nodes, over the budget of "
            f"{config.node_budget}; lower the resolution or raise --node-budget"
        )
    return Lattice(tuple(res), (0.0,) * d, (float(scale),) * d)


def load(config: RunConfig) -> Dataset:
    return mio.ingest_csv(
        config.input, features=config.features, label=config.label,
        exclude=config.exclude, binarize=config.binarize,
    )


def compute_field(raw: Dataset, config: RunConfig) -> RunResult:
    lattice = make_lattice(raw.d, config)
    data, params = rescale_dataset(raw, lattice.upper[0])
    t0 = time.perf_counter()
    f = pvalue_field(data, lattice, NcmConfig(config.k), workers=config.workers)
    res = RunResult(data, raw, lattice, f, rescale=params)
    res.timings["field"] = time.perf_counter() - t0
    log.info("p-value field on %d nodes in %.2fs", lattice.size, res.timings["field"])
    return res


def ladder_for(config: RunConfig, l: int):
    if config.ladder:
        return EpsilonLadder(tuple(config.ladder))
    return default_ladder(l, config.ladder_step)


def cluster(result: RunResult, config: RunConfig) -> RunResult:
    t0 = time.perf_counter()
    ladder = ladder_for(config, result.dataset.l)
    result.tree = build_tree(result.field, ladder, config.adjacency)
    result.trajectories = trajectories(result.dataset, result.tree)
    result.dendrogram = leaf_order(result.trajectories, result.tree)
    result.timings["tree"] = time.perf_counter() - t0
    return result


def example_p_values(result: RunResult) -> np.ndarray:
    nodes = result.lattice.nearest_nodes(result.dataset.points)
    return result.field.p[nodes]


def write_tree(result: RunResult, out: Path, config: RunConfig) -> Path:
    path = out / "tree.json"
    mio.write_tree_document(path, mio.tree_document(result.dendrogram, config.adjacency))
    mio.write_counts_csv(out / "cluster_counts.csv", cluster_counts(result.tree))
    mio.write_points_csv(out / "points.csv", result.dendrogram, example_p_values(result))
    return path


def write_svgs(result: RunResult, out: Path, config: RunConfig) -> list:
    from . import plots

    written = []
    pairs = plots.projection_pairs(result.lattice.d)
    for eps in config.plot_eps:
        for a, b in pairs:
            suffix = f"_{a + 1}{b + 1}" if result.lattice.d > 2 else ""
            path = out / f"region_eps{eps:g}{suffix}.svg"
            plots.region_svg(path, result.field, eps, result.dataset.points, result.raw.labels, (a, b))
            written.append(path)
    if result.tree.n_levels > 0:
        path = out / "dendrogram.svg"
        plots.dendrogram_svg(path, result.dendrogram)
        written.append(path)
        path = out / "cluster_counts.svg"
        plots.cluster_count_svg(path, cluster_counts(result.tree))
        written.append(path)
    return written


def write_manifest(result: RunResult, out: Path, config: RunConfig, command: str) -> None:
    lat = result.lattice
    manifest = {
        "command": command,
        "version": __version__,
        "config": config.to_dict(),
        "n_examples": result.dataset.l,
        "dimension": result.dataset.d,
        "lattice": {"resolution": list(lat.resolution), "lower": list(lat.lower), "upper": list(lat.upper)},
        "rescale": {
            "minimum": result.rescale.minimum.tolist(),
            "maximum": result.rescale.maximum.tolist(),
            "scale": result.rescale.scale,
        },
        "timings": result.timings,
    }
    mio.write_json(out / "manifest.json", manifest)


def run_pipeline(config: RunConfig, raw: Optional[Dataset] = None) -> RunResult:
    """Full run; writes field.csv, tree.json, cluster_counts.csv, points.csv,
    optional SVGs and manifest.json into ``config.output``."""
    t0 = time.perf_counter()
    raw = raw if raw is not None else load(config)
    out = Path(config.output)
    out.mkdir(parents=True, exist_ok=True)
    result = compute_field(raw, config)
    mio.write_field_csv(out / "field.csv", result.field)
    cluster(result, config)
    write_tree(result, out, config)
    if config.svg:
        t1 = time.perf_counter()
        write_svgs(result, out, config)
        result.timings["svg"] = time.perf_counter() - t1
    result.timings["total"] = time.perf_counter() - t0
    write_manifest(result, out, config, "cluster")
    return result


def tree_from_saved_field(config: RunConfig, field_path, raw: Optional[Dataset] = None) -> RunResult:
    """Rebuild the tree and trajectories from a saved field and the input data."""
    raw = raw if raw is not None else load(config)
    f = mio.read_field_csv(field_path)
    data, params = rescale_dataset(raw, f.lattice.upper[0])
    if f.n_train != data.l:
        raise ValueError(f"field was computed on {f.n_train} examples, input has {data.l}")
    result = RunResult(data, raw, f.lattice, f, rescale=params)
    return cluster(result, config)
