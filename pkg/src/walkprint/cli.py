"""Command-line front end: summarize, extract, evaluate, compare.

Every artifact written here embeds the resolved run configuration and a
content hash of the input files, so identical inputs and flags always
reproduce identical artifacts. Exit codes: 0 success, 2 usage or input
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import glob
import json
import os
import sys

import numpy as np

from . import __version__
from .datasets import Dataset, load_json_dataset, load_tu_dataset, summarize
from .fingerprint import FingerprintConfig, feature_csv, fingerprint_dataset
from .learn import evaluate_protocol
from .spectral import EigenConvergenceError
from .stats import (
    bundled_accuracy_table,
    friedman_test,
    load_accuracy_csv,
    nemenyi_cd,
    significance_diagram,
)
from .util import atomic_write_text, sha256_of_files

# Feature recipes matching the published per-dataset configurations.
PRESETS = {
    "mutag": ((1, 2, 3, 4, 5, 6, 7), 3),
    "ptc": ((1, 2, 3, 4, 5, 6, 7), 3),
    "nci1": ((1, 2, 3, 4, 5, 6, 7), 3),
    "nci109": ((1, 2, 3, 4, 5, 6, 7), 3),
    "enzymes": ((1, 2, 3, 4, 5, 6, 7), 3),
    "proteins": ((1, 2, 3, 4, 5, 6, 7), 3),
    "collab": ((1, 2, 3, 6, 7), 5),
    "reddit-binary": ((1, 2, 3, 6, 7), 5),
    "reddit-multi-5k": ((1, 2, 3, 6, 7), 5),
    "reddit-multi-12k": ((1, 2, 3, 6, 7), 5),
    "imdb-binary": ((1, 2, 3, 6, 7), 3),
    "imdb-multi": ((1, 2, 3, 6, 7), 3),
}


class UsageError(Exception):
    pass


def _add_dataset_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dir", help="TU-format dataset directory")
    p.add_argument("--file", help="JSON dataset file")
    p.add_argument("--format", choices=("tu", "json"), required=True)
    p.add_argument("--name", help="dataset name (defaults from the path)")


def _load_dataset(args) -> tuple[Dataset, list[str]]:
    """Load per the CLI flags; returns the dataset and its input files."""
    if args.format == "tu":
        if not args.dir:
            raise UsageError("--format tu requires --dir")
        name = args.name or os.path.basename(os.path.normpath(args.dir))
        ds = load_tu_dataset(args.dir, name)
        files = sorted(glob.glob(os.path.join(args.dir, f"{name}_*.txt")))
        return ds, files
    if not args.file:
        raise UsageError("--format json requires --file")
    ds = load_json_dataset(args.file, name=args.name)
    return ds, [args.file]


def _fingerprint_config(args) -> FingerprintConfig:
    if args.preset:
        key = args.preset.lower()
        if key not in PRESETS:
            raise UsageError(
                f"unknown preset {args.preset!r}; choose from {sorted(PRESETS)}"
            )
        ids, p = PRESETS[key]
    else:
        try:
            ids = tuple(int(x) for x in args.features.split(","))
        except ValueError as exc:
            raise UsageError(f"bad --features value {args.features!r}") from exc
        p = args.eigenvectors
    return FingerprintConfig(
        feature_ids=ids,
        num_eigenvectors=p,
        max_hop=args.hops,
        use_labels=4 in ids or 5 in ids,
    )


def _run_config(args, keys) -> dict:
    cfg = {"command": args.command, "version": __version__}
    for key in keys:
        cfg[key] = getattr(args, key)
    return cfg


def cmd_summarize(args) -> int:
    ds, files = _load_dataset(args)
    s = summarize(ds)
    cats = "-" if s.num_node_categories is None else str(s.num_node_categories)
    print(f"{'dataset':<18} {'graphs':>7} {'classes':>8} {'categories':>11} "
          f"{'mean nodes':>11} {'mean edges':>11}")
    print(f"{s.name:<18} {s.num_graphs:>7} {s.num_classes:>8} {cats:>11} "
          f"{s.mean_nodes:>11.2f} {s.mean_edges:>11.2f}")
    if args.json:
        payload = {
            "run_config": _run_config(args, ("dir", "file", "format", "name")),
            "input_sha256": sha256_of_files(files),
            "summary": {
                "name": s.name,
                "num_graphs": s.num_graphs,
                "num_classes": s.num_classes,
                "num_node_categories": s.num_node_categories,
                "mean_nodes": s.mean_nodes,
                "mean_edges": s.mean_edges,
            },
        }
        atomic_write_text(args.json, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_extract(args) -> int:
    ds, files = _load_dataset(args)
    cfg = _fingerprint_config(args)
    table = fingerprint_dataset(ds, cfg, threads=args.threads)
    atomic_write_text(args.out, feature_csv(table))
    meta = {
        "run_config": _run_config(
            args, ("dir", "file", "format", "name", "features", "eigenvectors",
                   "hops", "preset", "threads")
        ),
        "resolved_config": {
            "feature_ids": list(cfg.feature_ids),
            "num_eigenvectors": cfg.num_eigenvectors,
            "max_hop": cfg.max_hop,
            "use_labels": cfg.use_labels,
        },
        "input_sha256": sha256_of_files(files),
        "num_graphs": int(table.matrix.shape[0]),
        "dimension": int(table.matrix.shape[1]),
    }
    atomic_write_text(args.out + ".meta.json",
                      json.dumps(meta, indent=2, sort_keys=True) + "\n")
    print(f"wrote {args.out}: {table.matrix.shape[0]} graphs x "
          f"{table.matrix.shape[1]} features (+ class)")
    return 0


def cmd_evaluate(args) -> int:
    ds, files = _load_dataset(args)
    cfg = _fingerprint_config(args)
    table = fingerprint_dataset(ds, cfg, threads=args.threads)
    grid = [int(x) for x in args.trees_grid.split(",")]
    report = evaluate_protocol(
        table.matrix,
        table.classes,
        trees_grid=grid,
        repeats=args.repeats,
        folds=args.folds,
        split_fraction=args.split_fraction,
        master_seed=args.seed,
        threads=args.threads,
    )
    payload = {
        "run_config": _run_config(
            args, ("dir", "file", "format", "name", "features", "eigenvectors",
                   "hops", "preset", "trees_grid", "repeats", "folds",
                   "split_fraction", "seed", "threads")
        ),
        "input_sha256": sha256_of_files(files),
        "report": report.to_dict(),
    }
    if args.out:
        atomic_write_text(args.out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"dataset            : {ds.name}")
    print(f"mean accuracy      : {report.mean_accuracy:.4f}")
    print(f"std accuracy       : {report.std_accuracy:.4f}")
    print(f"per-repeat         : " + ", ".join(f"{a:.4f}" for a in report.per_repeat_accuracies))
    print(f"chosen num_trees   : " + ", ".join(str(c["num_trees"]) for c in report.chosen_hyperparameters))
    return 0


def cmd_compare(args) -> int:
    if args.fixture:
        table = bundled_accuracy_table(args.fixture)
        files = []
    elif args.table:
        table = load_accuracy_csv(args.table)
        files = [args.table]
    else:
        raise UsageError("compare needs --table or --fixture")
    fr = friedman_test(table)
    nm = nemenyi_cd(len(table.algorithms), len(table.datasets),
                    alpha=args.alpha, convention=args.convention)
    diagram = significance_diagram(fr, nm, args.out_svg)
    payload = {
        "run_config": _run_config(
            args, ("table", "fixture", "alpha", "convention", "out_svg")
        ),
        "input_sha256": sha256_of_files(files) if files else None,
        "result": diagram,
    }
    if args.out_json:
        atomic_write_text(args.out_json, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"K={len(table.algorithms)} algorithms, D={len(table.datasets)} datasets")
    print(f"Q = {fr.Q:.4f}, p = {fr.p_value:.6g}")
    print(f"CD({args.convention}, alpha={args.alpha:g}) = {nm.cd:.4f}")
    ranked = sorted(zip(table.algorithms, fr.average_ranks), key=lambda t: t[1])
    for name, rank in ranked:
        print(f"  {name:<12} AR = {rank:.4f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walkprint",
        description="Graph fingerprints from random-walk assortativities, "
                    "with evaluation and comparison tools.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize", help="dataset statistics")
    _add_dataset_args(p)
    p.add_argument("--json", help="also write the summary as JSON")
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("extract", help="write the fingerprint feature CSV")
    _add_dataset_args(p)
    p.add_argument("--features", default="1,2,3,4,5,6,7",
                   help="comma-separated feature ids (default all)")
    p.add_argument("--eigenvectors", type=int, default=3)
    p.add_argument("--hops", type=int, default=3)
    p.add_argument("--preset", help="named per-dataset recipe, e.g. mutag")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("evaluate", help="repeated CV evaluation of a random forest")
    _add_dataset_args(p)
    p.add_argument("--features", default="1,2,3,4,5,6,7")
    p.add_argument("--eigenvectors", type=int, default=3)
    p.add_argument("--hops", type=int, default=3)
    p.add_argument("--preset")
    p.add_argument("--trees-grid", default="128,256,512", dest="trees_grid")
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--split-fraction", type=float, default=0.9, dest="split_fraction")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="write the evaluation report as JSON")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="Friedman/Nemenyi over an accuracy table")
    p.add_argument("--table", help="accuracy CSV (datasets x algorithms)")
    p.add_argument("--fixture", choices=("chemo", "social"),
                   help="use a bundled accuracy table")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--convention", choices=("demsar", "paper"), default="demsar")
    p.add_argument("--out-json", dest="out_json")
    p.add_argument("--out-svg", dest="out_svg", required=True)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EigenConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
