"""Command-line interface.

Every option can also be set through an environment variable named
``MLCC_<OPTION>`` (upper case, dashes as underscores), e.g. ``MLCC_K=7`` or
``MLCC_WORKERS=max``. Command-line flags win over the environment.

Exit codes: 0 success, 2 invalid arguments, 3 unreadable input, 4 lattice over
the node budget, 5 file-system error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import io as mio
from .core import BudgetError, MlccError, ParseError
from .pipeline import (
    RunConfig,
    compute_field,
    load,
    run_pipeline,
    tree_from_saved_field,
    write_manifest,
    write_svgs,
    write_tree,
)

ENV_PREFIX = "MLCC_"
EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_BUDGET, EXIT_IO = 0, 2, 3, 4, 5

log = logging.getLogger("mlcc")


def _floats(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


def _ints(text):
    return tuple(int(v) for v in text.split(",") if v.strip())


def _names(text):
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _workers(text):
    return "max" if text == "max" else int(text)


def _data_options(p):
    p.add_argument("input", help="CSV file with a header row")
    p.add_argument("--features", type=_names, help="comma-separated feature columns (default: all but label/excluded)")
    p.add_argument("--exclude", type=_names, default=(), help="columns to ignore")
    p.add_argument("--label", help="label column, used for plots and evaluation only")
    p.add_argument("--binarize", action="store_true", help="threshold a numeric label at its mean")


def _lattice_options(p):
    p.add_argument("--scale", type=float, help="axis length S of the rescaled space (default 50 in 2-D, 20 in 3-D)")
    p.add_argument("--resolution", type=_ints, help="nodes per axis, one value or one per axis")
    p.add_argument("--k", type=int, default=5, help="neighbours in the nonconformity measure")
    p.add_argument("--workers", type=_workers, default=1, help="threads for the field evaluation, or 'max'")
    p.add_argument("--node-budget", type=int, default=1_000_000)
    p.add_argument("--output", "-o", default="mlcc-out", help="output directory")


def _tree_options(p):
    p.add_argument("--ladder", type=_floats, help="explicit significance levels (default: every k/(l+1))")
    p.add_argument("--ladder-step", type=int, default=1, help="keep every n-th attainable level")
    p.add_argument("--adjacency", choices=("moore", "vonneumann"), default="moore")
    p.add_argument("--eps", type=_floats, default=(0.05, 0.2), help="levels for region plots")
    p.add_argument("--no-svg", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mlcc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="full pipeline: field, tree, trajectories, plots")
    _data_options(p)
    _lattice_options(p)
    _tree_options(p)

    p = sub.add_parser("field", help="p-value field only")
    _data_options(p)
    _lattice_options(p)

    p = sub.add_parser("tree", help="cluster tree from a saved field")
    _data_options(p)
    p.add_argument("--field", required=True, help="field.csv written by 'field' or 'cluster'")
    p.add_argument("--output", "-o", default="mlcc-out")
    _tree_options(p)

    p = sub.add_parser("synth", help="generate a noisy five-component sample")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--noise", type=float, default=0.2, help="share of corrupted points per component")
    p.add_argument("--size", type=int, default=100, help="points per component")
    p.add_argument("--inflation", type=float, default=5.0, help="variance factor of corrupted points")
    p.add_argument("--output", "-o", default="-", help="CSV path, '-' for stdout")

    p = sub.add_parser("hc", help="single-linkage baseline and its averaged purity")
    _data_options(p)
    p.add_argument("--n-splits", type=int, default=10)
    p.add_argument("--cut", type=int, help="also print the partition into this many clusters")

    p = sub.add_parser("eval", help="AUC and purity from a finished run directory")
    p.add_argument("run", help="directory written by 'cluster'")
    p.add_argument("--input", help="override the input CSV recorded in the manifest")
    p.add_argument("--auc", action="store_true", help="anomaly-detection AUC")
    p.add_argument("--noise-column", default="is_noise")
    p.add_argument("--purity", action="store_true", help="averaged purity of MLCC (and HC with --hc)")
    p.add_argument("--label", help="label column for purity (default: the run's label)")
    p.add_argument("--hc", action="store_true")
    p.add_argument("--n-splits", type=int, default=10)

    p = sub.add_parser("bench", help="time the field evaluation against worker counts")
    _data_options(p)
    _lattice_options(p)
    p.add_argument("--worker-counts", type=lambda t: tuple(_workers(v) for v in t.split(",")), default=(1, 2, 4, "max"))
    p.add_argument("--repeat", type=int, default=3)

    _apply_env(parser)
    return parser


def _apply_env(parser: argparse.ArgumentParser) -> None:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for sub in action.choices.values():
                _apply_env(sub)
            continue
        if not action.option_strings or action.dest in ("help", "version"):
            continue
        value = os.environ.get(ENV_PREFIX + action.dest.upper())
        if value is None:
            continue
        if isinstance(action, argparse._StoreTrueAction):
            action.default = value.strip().lower() in ("1", "true", "yes", "on")
        else:
            action.default = action.type(value) if action.type else value
            action.required = False


def _run_config(args) -> RunConfig:
    get = lambda name, default=None: getattr(args, name, default)  # noqa: E731
    return RunConfig(
        input=args.input,
        output=get("output", "mlcc-out"),
        features=get("features"),
        exclude=get("exclude", ()),
        label=get("label"),
        binarize=get("binarize", False),
        scale=get("scale"),
        resolution=get("resolution"),
        k=get("k", 5),
        ladder=get("ladder"),
        ladder_step=get("ladder_step", 1),
        adjacency=get("adjacency", "moore"),
        workers=get("workers", 1),
        plot_eps=get("eps", (0.05, 0.2)),
        svg=not get("no_svg", False),
        node_budget=get("node_budget", 1_000_000),
    )


def _print(obj):
    print(json.dumps(obj, indent=2, sort_keys=True, default=float))


def cmd_cluster(args):
    config = _run_config(args)
    result = run_pipeline(config)
    tree = result.tree
    _print(
        {
            "output": config.output,
            "examples": result.dataset.l,
            "nodes": result.lattice.size,
            "levels": tree.n_levels,
            "clusters": len(tree.clusters),
            "splits": len(tree.splits),
            "timings": result.timings,
        }
    )


def cmd_field(args):
    config = _run_config(args)
    raw = load(config)
    out = Path(config.output)
    out.mkdir(parents=True, exist_ok=True)
    result = compute_field(raw, config)
    mio.write_field_csv(out / "field.csv", result.field)
    write_manifest(result, out, config, "field")
    _print({"output": str(out / "field.csv"), "nodes": result.lattice.size, "timings": result.timings})


def cmd_tree(args):
    config = _run_config(args)
    result = tree_from_saved_field(config, args.field)
    out = Path(config.output)
    out.mkdir(parents=True, exist_ok=True)
    path = write_tree(result, out, config)
    if config.svg:
        write_svgs(result, out, config)
    _print({"output": str(path), "levels": result.tree.n_levels, "clusters": len(result.tree.clusters)})


def cmd_synth(args):
    from .synth import SynthConfig, generate

    sample = generate(SynthConfig(args.seed, args.noise, args.size, args.inflation))
    mio.write_synth_csv(sys.stdout if args.output == "-" else args.output, sample)


def cmd_hc(args):
    from .baseline_hc import cut, single_linkage
    from .metrics import averaged_purity_hc
    from .preprocess import default_scale, rescale_dataset

    config = _run_config(args)
    raw = load(config)
    data, _ = rescale_dataset(raw, default_scale(raw.d))
    tree = single_linkage(data)
    out = {"merges": len(tree.merges), "top_distances": tree.distances()[::-1][: args.n_splits].tolist()}
    if raw.labels is not None:
        rep = averaged_purity_hc(tree, raw.labels, args.n_splits)
        out["purity"] = {"mean": rep.mean, "clusters": list(rep.purities), "warning": rep.warning}
    if args.cut:
        out["partition"] = [b.tolist() for b in cut(tree, args.cut)]
    _print(out)


def cmd_eval(args):
    from .baseline_hc import single_linkage
    from .metrics import anomaly_auc, averaged_purity_hc, averaged_purity_mlcc

    run = Path(args.run)
    manifest = json.loads((run / "manifest.json").read_text())
    cfg = dict(manifest["config"])
    if args.input:
        cfg["input"] = args.input
    for key in ("features", "exclude", "resolution", "ladder", "plot_eps"):
        if cfg.get(key) is not None:
            cfg[key] = tuple(cfg[key])
    config = RunConfig(**cfg)
    out = {}
    if args.auc:
        points = mio.read_column(run / "points.csv", "p").astype(float)
        noise = mio.read_column(config.input, args.noise_column).astype(float).astype(int)
        rep = anomaly_auc(points, noise)
        out["auc"] = {"auc": rep.auc, "n_noise": rep.n_positive, "n_normal": rep.n_negative}
    if args.purity:
        label = args.label or config.label
        if not label:
            raise ValueError("purity needs --label (the run had no label column)")
        config.label = label
        result = tree_from_saved_field(config, run / "field.csv")
        labels = result.raw.labels
        rep = averaged_purity_mlcc(result.dendrogram, labels, args.n_splits)
        out["purity_mlcc"] = {"mean": rep.mean, "clusters": list(rep.purities), "warning": rep.warning}
        if args.hc:
            hc = averaged_purity_hc(single_linkage(result.dataset), labels, args.n_splits)
            out["purity_hc"] = {"mean": hc.mean, "clusters": list(hc.purities), "warning": hc.warning}
    if not out:
        raise ValueError("nothing to evaluate; pass --auc and/or --purity")
    _print(out)


def cmd_bench(args):
    from .conformal import field
    from .ncm import NcmConfig

    config = _run_config(args)
    base = compute_field(load(config), config)

    rows = []
    for w in args.worker_counts:
        times = []
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            f = field(base.dataset, base.lattice, NcmConfig(config.k), workers=w)
            times.append(time.perf_counter() - t0)
        rows.append(
            {"workers": w, "best_s": min(times), "mean_s": float(np.mean(times)),
             "identical": bool(np.array_equal(f.counts, base.field.counts))}
        )
    _print({"nodes": base.lattice.size, "examples": base.dataset.l, "cpu_count": os.cpu_count(), "runs": rows})


COMMANDS = {
    "cluster": cmd_cluster,
    "field": cmd_field,
    "tree": cmd_tree,
    "synth": cmd_synth,
    "hc": cmd_hc,
    "eval": cmd_eval,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        COMMANDS[args.command](args)
    except BudgetError as exc:
        log.error("%s", exc)
        return EXIT_BUDGET
    except ParseError as exc:
        log.error("%s", exc)
        return EXIT_PARSE
    except OSError as exc:
        log.error("%s: %s", getattr(exc, "filename", None) or "I/O error", exc.strerror or exc)
        return EXIT_IO
    except (ValueError, MlccError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
