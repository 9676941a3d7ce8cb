"""Fixed-order feature vectors describing a graph.

Seven feature families are available, selected by id:

  1. node-identity assortativities for hops 0..T
  2. degree-weighted averages of the first p dominant left eigenvectors
  3. multi-hop assortativities of those eigenvectors, hops 0..T each
  4. degree-weighted frequency of each node category
  5. multi-hop assortativities of each category indicator, hops 0..T each
  6. node count
  7. edge count

Serialization order is the family order above; family 3 is eigenvector-major
(all hops of u1, then u2, ...), family 5 category-major. When a graph has
fewer than p eigenpairs, the missing eigenvector slots are zero-filled so
every graph of a dataset shares one schema.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .datasets import Dataset
from .graphs import Graph, degree_profile
from .spectral import dominant_left_eigenvectors
from .util import ordered_map
from .walks import (
    categorical_assortativity,
    encoding_from_labels,
    node_id_assortativity,
    scalar_assortativity,
    walk_model,
)

ALL_FEATURES = (1, 2, 3, 4, 5, 6, 7)


@dataclass(frozen=True)
class FingerprintConfig:
    """Feature recipe applied uniformly to every graph of a dataset."""

    feature_ids: tuple[int, ...] = ALL_FEATURES
    num_eigenvectors: int = 3
    max_hop: int = 3
    use_labels: bool = False

    def __post_init__(self):
        ids = tuple(sorted(set(self.feature_ids)))
        if not ids:
            raise ValueError("feature_ids must be non-empty")
        if any(i not in ALL_FEATURES for i in ids):
            raise ValueError(f"unknown feature ids in {self.feature_ids}")
        if (4 in ids or 5 in ids) and not self.use_labels:
            raise ValueError("features 4 and 5 require use_labels=True")
        object.__setattr__(self, "feature_ids", ids)
        if self.num_eigenvectors < 1:
            raise ValueError("num_eigenvectors must be >= 1")
        if self.max_hop < 0:
            raise ValueError("max_hop must be >= 0")

    def dimension(self, k: int) -> int:
        """Feature count for a dataset with k node categories."""
        ids = self.feature_ids
        hops = self.max_hop + 1
        p = self.num_eigenvectors
        return (
            hops * (1 in ids)
            + p * (2 in ids)
            + p * hops * (3 in ids)
            + k * (4 in ids)
            + k * hops * (5 in ids)
            + (6 in ids)
            + (7 in ids)
        )


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    names: tuple[str, ...]

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class FeatureTable:
    """Feature matrix for a whole dataset plus the class column."""

    matrix: np.ndarray
    classes: np.ndarray
    feature_names: tuple[str, ...]
    class_alphabet: tuple


def fingerprint(g: Graph, cfg: FingerprintConfig, k: int = 0) -> FeatureVector:
    """Feature vector of one graph under ``cfg``.

    ``k`` is the dataset-level category count (ignored unless features 4/5
    are selected). Nodes without a label contribute to no category column.
    """
    ids = cfg.feature_ids
    hops = range(cfg.max_hop + 1)
    p = cfg.num_eigenvectors
    needs_labels = 4 in ids or 5 in ids
    if needs_labels:
        if not cfg.use_labels:
            raise ValueError("features 4/5 selected without use_labels")
        if g.node_labels is None:
            raise ValueError("graph has no node labels but features 4/5 need them")
        if k < 1:
            raise ValueError("category count k must be >= 1 for features 4/5")

    model = walk_model(g)
    values: list[float] = []
    names: list[str] = []

    if 1 in ids:
        for t in hops:
            values.append(node_id_assortativity(model, t, max_hop=cfg.max_hop).value)
            names.append(f"idassort_t{t}")

    if 2 in ids or 3 in ids:
        basis = dominant_left_eigenvectors(model, p)
        avail = len(basis)
        if 2 in ids:
            for i in range(p):
                if i < avail:
                    values.append(float(np.dot(model.pi, basis.left_eigenvectors[i])))
                else:
                    values.append(0.0)
                names.append(f"eig{i + 1}_avg")
        if 3 in ids:
            for i in range(p):
                for t in hops:
                    if i < avail:
                        values.append(
                            scalar_assortativity(
                                model, basis.left_eigenvectors[i], t
                            ).value
                        )
                    else:
                        values.append(0.0)
                    names.append(f"eig{i + 1}_assort_t{t}")

    if needs_labels:
        enc = encoding_from_labels(g.node_labels, k)
        if 4 in ids:
            freq = model.pi @ enc.membership
            for i in range(k):
                values.append(float(freq[i]))
                names.append(f"cat{i + 1}_avg")
        if 5 in ids:
            per_hop = [categorical_assortativity(model, enc, t)[0] for t in hops]
            for i in range(k):
                for t in hops:
                    values.append(per_hop[t][i].value)
                    names.append(f"cat{i + 1}_assort_t{t}")

    if 6 in ids:
        values.append(float(g.num_nodes))
        names.append("num_nodes")
    if 7 in ids:
        values.append(float(degree_profile(g).edge_count))
        names.append("num_edges")

    out = np.asarray(values)
    if not np.all(np.isfinite(out)):
        raise ValueError(f"non-finite feature for graph {g.graph_id}")
    return FeatureVector(values=out, names=tuple(names))


def fingerprint_dataset(
    d: Dataset, cfg: FingerprintConfig, threads: int = 1
) -> FeatureTable:
    """Feature matrix over a dataset, one row per graph in dataset order."""
    if cfg.use_labels and not d.labeled:
        raise ValueError(
            f"config requires node labels but dataset {d.name!r} is unlabeled"
        )
    k = d.num_categories or 0

    def row(i: int) -> FeatureVector:
        try:
            return fingerprint(d.graphs[i], cfg, k)
        except Exception as exc:
            raise type(exc)(f"graph {d.graphs[i].graph_id}: {exc}") from exc

    rows = ordered_map(row, range(len(d.graphs)), threads=threads)
    names = rows[0].names
    matrix = np.vstack([r.values for r in rows])
    return FeatureTable(
        matrix=matrix,
        classes=d.graph_labels.copy(),
        feature_names=names,
        class_alphabet=d.class_alphabet,
    )


def feature_csv(table: FeatureTable) -> str:
    """Render a feature table as CSV text.

    Header row holds feature names plus a final ``class`` column; values are
    written with 17 significant digits so they round-trip exactly.
    """
    lines = [",".join(table.feature_names + ("class",))]
    for row, cls in zip(table.matrix, table.classes):
        cells = [f"{x:.17g}" for x in row]
        cells.append(str(table.class_alphabet[cls]))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
