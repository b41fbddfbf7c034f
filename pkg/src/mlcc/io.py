"""CSV ingestion and the on-disk formats written by a run."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .core import Dataset, Lattice, ParseError, PValueField

TREE_FORMAT = "mlcc-tree/1"


class FeatureTypeError(ParseError, TypeError):
    """A feature column holds a value that is not a number."""


def binarize_at_mean(values) -> np.ndarray:
    """1 where a continuous label exceeds its mean, else 0."""
    v = np.asarray(values, dtype=float)
    return (v > v.mean()).astype(np.int64)


def _read_rows(path):
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file, a header row is required") from None
        header = [h.strip() for h in header]
        rows = []
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ParseError(
                    f"{path}: row {reader.line_num} has {len(row)} fields, header has {len(header)}"
                )
            rows.append((reader.line_num, row))
    return header, rows


def ingest_csv(path, features=None, label=None, exclude=(), binarize=False) -> Dataset:
    """Read a headed CSV into a :class:`Dataset`.

    ``features`` selects columns by name (default: every column other than
    ``label`` and ``exclude``). With ``binarize``, a numeric label column is
    thresholded at its mean.
    """
    header, rows = _read_rows(path)
    for name in [*(features or ()), *([label] if label else []), *exclude]:
        if name not in header:
            raise ParseError(f"{path}: no column named {name!r} (have {header})")
    if features is None:
        features = [h for h in header if h != label and h not in exclude]
    if not features:
        raise ParseError(f"{path}: no feature columns")
    if not rows:
        raise ParseError(f"{path}: no data rows")
    cols = [header.index(f) for f in features]
    pts = np.empty((len(rows), len(cols)))
    for r, (line, row) in enumerate(rows):
        for c, j in enumerate(cols):
            try:
                pts[r, c] = float(row[j])
            except ValueError:
                raise FeatureTypeError(
                    f"{path}: row {line}, column {header[j]!r}: {row[j]!r} is not a number"
                ) from None
    labels = None
    if label:
        j = header.index(label)
        raw = [row[j].strip() for _, row in rows]
        if binarize:
            try:
                labels = binarize_at_mean([float(v) for v in raw])
            except ValueError:
                raise FeatureTypeError(f"{path}: label column {label!r} is not numeric") from None
        else:
            labels = np.array(raw)
    return Dataset(pts, labels)


def read_column(path, name) -> np.ndarray:
    header, rows = _read_rows(path)
    if name not in header:
        raise ParseError(f"{path}: no column named {name!r}")
    j = header.index(name)
    return np.array([row[j].strip() for _, row in rows])


def write_synth_csv(target, sample) -> None:
    """Columns x1, x2, component, is_noise. ``target`` is a path or an open text file."""
    if hasattr(target, "write"):
        _write_synth(target, sample)
        return
    with Path(target).open("w", newline="") as fh:
        _write_synth(fh, sample)


def _write_synth(fh, sample):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x1", "x2", "component", "is_noise"])
    for (x, y), c, n in zip(sample.points, sample.component, sample.is_noise):
        w.writerow([repr(float(x)), repr(float(y)), int(c), int(n)])


# p-value field ------------------------------------------------------------


def write_field_csv(path, field: PValueField) -> None:
    """One row per node: index, multi-index, coordinates, exact p-value."""
    lat = field.lattice
    d = lat.d
    multi = np.stack(np.unravel_index(np.arange(lat.size), lat.resolution), axis=1)
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            ["node", *(f"i{j + 1}" for j in range(d)), *(f"x{j + 1}" for j in range(d)),
             "count", "denominator", "p"]
        )
        denom = field.n_train + 1
        for n in range(lat.size):
            w.writerow(
                [n, *multi[n].tolist(), *(repr(float(v)) for v in lat.coordinates[n]),
                 int(field.counts[n]), denom, repr(float(field.p[n]))]
            )


def read_field_csv(path) -> PValueField:
    header, rows = _read_rows(path)
    d = sum(1 for h in header if h.startswith("i") and h[1:].isdigit())
    if d == 0 or "count" not in header or "denominator" not in header:
        raise ParseError(f"{path}: not a p-value field file")
    try:
        multi = np.array([[int(row[1 + j]) for j in range(d)] for _, row in rows])
        coords = np.array([[float(row[1 + d + j]) for j in range(d)] for _, row in rows])
        counts = np.array([int(row[header.index("count")]) for _, row in rows])
        denom = {int(row[header.index("denominator")]) for _, row in rows}
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None
    if len(denom) != 1:
        raise ParseError(f"{path}: inconsistent denominators")
    resolution = tuple(int(m) + 1 for m in multi.max(axis=0))
    lower = tuple(coords[:, j].min() for j in range(d))
    upper = tuple(coords[:, j].max() for j in range(d))
    lattice = Lattice(resolution, lower, upper)
    if len(rows) != lattice.size:
        raise ParseError(f"{path}: expected {lattice.size} rows, got {len(rows)}")
    order = np.ravel_multi_index(tuple(multi.T), resolution)
    full = np.empty(lattice.size, dtype=np.int64)
    full[order] = counts
    return PValueField(lattice, full, denom.pop() - 1)


# cluster tree -------------------------------------------------------------


def tree_document(dendrogram, adjacency: str) -> dict:
    tree = dendrogram.tree
    traj = dendrogram.trajectories
    members = dendrogram.cluster_examples
    last = tree.n_levels - 1
    clusters = []
    for c in tree.clusters:
        clusters.append(
            {
                "level": c.level,
                "eps": tree.ladder[c.level],
                "id": c.id,
                "parent": c.parent,
                "node_count": c.size,
                "examples": members.get(c.id, np.empty(0, dtype=int)).tolist(),
                "split": len(c.children) >= 2,
                "death": not c.children and c.level < last,
            }
        )
    lat = tree.lattice
    return {
        "format": TREE_FORMAT,
        "lattice": {"resolution": list(lat.resolution), "lower": list(lat.lower), "upper": list(lat.upper)},
        "adjacency": adjacency,
        "ladder": list(tree.ladder.levels),
        "clusters": clusters,
        "splits": [list(s) for s in tree.splits],
        "deaths": [list(s) for s in tree.deaths],
        "trajectories": {
            "nodes": traj.nodes.tolist(),
            "membership": traj.membership.tolist(),
        },
        "leaf_order": dendrogram.leaf_order.tolist(),
        "death_level": dendrogram.death_level.tolist(),
        "split_markers": [list(s) for s in dendrogram.split_markers],
    }


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def write_tree_document(path, doc: dict) -> None:
    """JSON with one cluster record / trajectory row per line, so runs diff cleanly."""
    lines = ["{"]
    keys = list(doc)
    for i, key in enumerate(keys):
        comma = "," if i < len(keys) - 1 else ""
        val = doc[key]
        if key == "clusters":
            body = ",\n".join("  " + _dump(c) for c in val)
            lines.append(f'"{key}":[\n{body}\n]{comma}')
        elif key == "trajectories":
            rows = ",\n".join("  " + _dump(r) for r in val["membership"])
            lines.append(
                f'"{key}":{{"nodes":{_dump(val["nodes"])},\n"membership":[\n{rows}\n]}}{comma}'
            )
        else:
            lines.append(f'"{key}":{_dump(val)}{comma}')
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_tree_document(path) -> dict:
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != TREE_FORMAT:
        raise ParseError(f"{path}: not an {TREE_FORMAT} document")
    return doc


def write_counts_csv(path, counts) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["eps", "clusters"])
        for eps, n in counts:
            w.writerow([repr(float(eps)), n])


def write_points_csv(path, dendrogram, p_values) -> None:
    """Per-example node, p-value, death level and dendrogram position."""
    traj = dendrogram.trajectories
    position = np.empty(len(traj), dtype=np.int64)
    position[dendrogram.leaf_order] = np.arange(len(traj))
    ladder = dendrogram.tree.ladder
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["example", "node", "p", "death_level", "death_eps", "position"])
        for i in range(len(traj)):
            lvl = int(dendrogram.death_level[i])
            eps = repr(ladder[lvl]) if lvl < len(ladder) else ""
            w.writerow([i, int(traj.nodes[i]), repr(float(p_values[i])), lvl, eps, int(position[i])])


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
