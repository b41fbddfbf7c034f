"""Multi-level conformal clustering on a lattice."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    ANOMALY,
    ClusterTree,
    Dataset,
    EpsilonLadder,
    Lattice,
    PointTrajectory,
    PValueField,
)
from .ncm import NcmConfig, knn_sum_ncm  # noqa: E402
from .conformal import field, p_value  # noqa: E402
from .multilevel import build_tree, cluster_counts, default_ladder, leaf_order, trajectories  # noqa: E402

__all__ = [
    "ANOMALY",
    "ClusterTree",
    "Dataset",
    "EpsilonLadder",
    "Lattice",
    "NcmConfig",
    "PValueField",
    "PointTrajectory",
    "build_tree",
    "cluster_counts",
    "default_ladder",
    "field",
    "knn_sum_ncm",
    "leaf_order",
    "p_value",
    "trajectories",
]
