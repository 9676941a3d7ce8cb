"""Benchmark dataset ingestion: TU-style text bundles and a JSON format.

A dataset couples a list of graphs with per-graph classes and one shared
node-category alphabet. The alphabet is dataset-level on purpose: feature
dimensions downstream must be constant across the graphs of a dataset, so
categories absent from an individual graph simply contribute empty one-hot
columns there.
"""

from __future__ import annotations

import json
import os
import warnings
from dataclasses import dataclass

import numpy as np

from .graphs import Graph, build_graph, degree_profile


@dataclass(frozen=True)
class Dataset:
    name: str
    graphs: list[Graph]
    graph_labels: np.ndarray
    label_alphabet: tuple | None
    class_alphabet: tuple

    @property
    def labeled(self) -> bool:
        return self.label_alphabet is not None

    @property
    def num_categories(self) -> int | None:
        return len(self.label_alphabet) if self.labeled else None


@dataclass(frozen=True)
class DatasetSummary:
    name: str
    num_graphs: int
    num_classes: int
    num_node_categories: int | None
    mean_nodes: float
    mean_edges: float


def _read_lines(path: str) -> list[str]:
    """All non-empty lines, tolerating CRLF endings and trailing blanks."""
    with open(path, "r", encoding="utf-8") as fh:
        return [ln.strip() for ln in fh if ln.strip()]


def _read_int_column(path: str) -> np.ndarray:
    return np.asarray([int(x) for x in _read_lines(path)], dtype=np.int64)


def load_tu_dataset(directory: str | os.PathLike, name: str) -> Dataset:
    """Parse a TU-style benchmark directory.

    Expects ``<name>_A.txt`` (comma-separated 1-indexed edge pairs),
    ``<name>_graph_indicator.txt`` (graph id per node), and
    ``<name>_graph_labels.txt`` (class per graph); ``<name>_node_labels.txt``
    is optional. Edge files list both orientations of each edge; duplicate
    pairs collapse to a single unit-weight undirected edge.
    """
    directory = os.fspath(directory)

    def path_of(suffix: str) -> str:
        return os.path.join(directory, f"{name}_{suffix}.txt")

    for suffix in ("A", "graph_indicator", "graph_labels"):
        if not os.path.isfile(path_of(suffix)):
            raise FileNotFoundError(f"missing mandatory file {path_of(suffix)}")

    indicator = _read_int_column(path_of("graph_indicator"))
    total_nodes = indicator.size
    node_graph = indicator - 1
    graph_ids = np.unique(indicator)
    num_graphs = graph_ids.size
    if not np.array_equal(graph_ids, np.arange(1, num_graphs + 1)):
        raise ValueError("graph indicator ids must be contiguous and 1-indexed")

    raw_classes = _read_int_column(path_of("graph_labels"))
    if raw_classes.size != num_graphs:
        raise ValueError(
            f"{name}_graph_labels.txt has {raw_classes.size} lines "
            f"for {num_graphs} graphs"
        )

    node_labels_raw = None
    if os.path.isfile(path_of("node_labels")):
        node_labels_raw = _read_int_column(path_of("node_labels"))
        if node_labels_raw.size != total_nodes:
            raise ValueError(
                f"{name}_node_labels.txt has {node_labels_raw.size} lines "
                f"for {total_nodes} nodes"
            )

    # Global node id -> local index inside its graph, in file order.
    counts = np.bincount(node_graph, minlength=num_graphs)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    order = np.argsort(node_graph, kind="stable")
    local_index = np.empty(total_nodes, dtype=np.int64)
    local_index[order] = np.arange(total_nodes) - np.repeat(starts, counts)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # empty edge file is legal, not a warning
        pairs = np.loadtxt(path_of("A"), delimiter=",", dtype=np.int64, ndmin=2)
    if pairs.size == 0:
        pairs = np.zeros((0, 2), dtype=np.int64)
    if pairs.shape[1] != 2:
        raise ValueError(f"{name}_A.txt must hold two comma-separated ids per line")
    uu, vv = pairs[:, 0] - 1, pairs[:, 1] - 1
    if pairs.size and (
        uu.min() < 0 or vv.min() < 0 or uu.max() >= total_nodes or vv.max() >= total_nodes
    ):
        raise ValueError(f"{name}_A.txt references a node outside the indicator range")
    gu, gv = node_graph[uu], node_graph[vv]
    bad = np.flatnonzero(gu != gv)
    if bad.size:
        b = bad[0]
        raise ValueError(
            f"edge ({uu[b] + 1}, {vv[b] + 1}) spans graphs {gu[b] + 1} and {gv[b] + 1}"
        )
    lo = np.minimum(local_index[uu], local_index[vv])
    hi = np.maximum(local_index[uu], local_index[vv])
    # Collapse both orientations (and any exact duplicates) to one pair.
    uniq = np.unique(np.column_stack([gu, lo, hi]), axis=0)

    label_alphabet = None
    label_index = None
    if node_labels_raw is not None:
        label_alphabet = tuple(sorted(set(int(x) for x in node_labels_raw)))
        lookup = {val: i for i, val in enumerate(label_alphabet)}
        label_index = np.asarray([lookup[int(x)] for x in node_labels_raw])

    graphs = []
    edge_starts = np.searchsorted(uniq[:, 0], np.arange(num_graphs + 1))
    for g in range(num_graphs):
        n = int(counts[g])
        rows = uniq[edge_starts[g] : edge_starts[g + 1]]
        edges = [(int(a), int(b), 1.0) for a, b in rows[:, 1:]]
        labels = None
        if label_index is not None:
            labels = np.empty(n, dtype=np.int64)
            idx = order[starts[g] : starts[g] + n]
            labels[local_index[idx]] = label_index[idx]
        graphs.append(build_graph(edges, n, node_labels=labels, graph_id=g))

    class_alphabet = tuple(sorted(set(int(c) for c in raw_classes)))
    class_of = {val: i for i, val in enumerate(class_alphabet)}
    graph_labels = np.asarray([class_of[int(c)] for c in raw_classes], dtype=np.int64)

    return Dataset(
        name=name,
        graphs=graphs,
        graph_labels=graph_labels,
        label_alphabet=label_alphabet,
        class_alphabet=class_alphabet,
    )


def load_json_dataset(file: str | os.PathLike, name: str | None = None) -> Dataset:
    """Load a dataset from a JSON list of records.

    Each record is ``{"nodes": N, "edges": [[i, j, w], ...],
    "node_labels": [...], "class": value}`` with ``node_labels`` optional
    (all records must agree on whether labels are present; a null label
    marks an individual unlabeled node).
    """
    file = os.fspath(file)
    with open(file, "r", encoding="utf-8") as fh:
        records = json.load(fh)
    if not isinstance(records, list):
        raise ValueError("dataset file must hold a JSON list of records")
    if not records:
        raise ValueError("empty dataset")

    if name is None:
        name = os.path.splitext(os.path.basename(file))[0]

    raw: list[dict] = []
    for i, rec in enumerate(records):
        try:
            nodes = int(rec["nodes"])
            edges = [(int(e[0]), int(e[1]), float(e[2])) for e in rec["edges"]]
            labels = rec.get("node_labels")
            cls = rec["class"]
            if labels is not None and len(labels) != nodes:
                raise ValueError(
                    f"node_labels has {len(labels)} entries for {nodes} nodes"
                )
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            raise ValueError(f"record {i}: {exc}") from exc
        raw.append({"nodes": nodes, "edges": edges, "labels": labels, "class": cls})

    labeled = [r["labels"] is not None for r in raw]
    if any(labeled) and not all(labeled):
        raise ValueError("either every record has node_labels or none does")

    label_alphabet = None
    label_of = None
    if all(labeled):
        values = sorted({v for r in raw for v in r["labels"] if v is not None})
        label_alphabet = tuple(values)
        label_of = {v: i for i, v in enumerate(values)}

    graphs = []
    for i, r in enumerate(raw):
        labels = None
        if label_of is not None:
            labels = np.asarray(
                [-1 if v is None else label_of[v] for v in r["labels"]],
                dtype=np.int64,
            )
        try:
            graphs.append(
                build_graph(r["edges"], r["nodes"], node_labels=labels, graph_id=i)
            )
        except ValueError as exc:
            raise ValueError(f"record {i}: {exc}") from exc

    class_alphabet = tuple(sorted({r["class"] for r in raw}))
    class_of = {v: i for i, v in enumerate(class_alphabet)}
    graph_labels = np.asarray([class_of[r["class"]] for r in raw], dtype=np.int64)

    return Dataset(
        name=name,
        graphs=graphs,
        graph_labels=graph_labels,
        label_alphabet=label_alphabet,
        class_alphabet=class_alphabet,
    )


def save_json_dataset(d: Dataset, file: str | os.PathLike) -> None:
    """Write a dataset in the JSON record format (inverse of the loader)."""
    records = []
    for g, cls_idx in zip(d.graphs, d.graph_labels):
        adj = g.adjacency.tocoo()
        edges = [
            [int(i), int(j), float(w)]
            for i, j, w in zip(adj.row, adj.col, adj.data)
            if i <= j
        ]
        rec = {"nodes": g.num_nodes, "edges": edges, "class": d.class_alphabet[cls_idx]}
        if d.labeled and g.node_labels is not None:
            rec["node_labels"] = [
                d.label_alphabet[i] if i >= 0 else None for i in g.node_labels
            ]
        records.append(rec)
    with open(os.fspath(file), "w", encoding="utf-8") as fh:
        json.dump(records, fh)


def summarize(d: Dataset) -> DatasetSummary:
    """Dataset-level counts and per-graph means of node and edge counts."""
    if not d.graphs:
        raise ValueError("empty dataset")
    nodes = [g.num_nodes for g in d.graphs]
    edges = [degree_profile(g).edge_count for g in d.graphs]
    return DatasetSummary(
        name=d.name,
        num_graphs=len(d.graphs),
        num_classes=len(d.class_alphabet),
        num_node_categories=d.num_categories,
        mean_nodes=float(np.mean(nodes)),
        mean_edges=float(np.mean(edges)),
    )
