"""Undirected weighted graphs in compressed sparse form, plus degree quantities.

Every graph produced by :func:`build_graph` is symmetric, has non-negative
weights, and carries a unit self-loop on each otherwise isolated node so that
all row sums are strictly positive (random-walk operators stay well defined
on every node).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph.

    ``adjacency`` is a symmetric CSR matrix of non-negative weights; a
    self-loop appears once on the diagonal. ``node_labels`` maps each node to
    a category index in a dataset-level alphabet, with -1 marking an
    unlabeled node; it is None when the graph carries no labels at all.
    """

    num_nodes: int
    adjacency: sparse.csr_array
    node_labels: np.ndarray | None = None
    graph_id: object = None

    def degrees(self) -> np.ndarray:
        """Weighted degree vector: row sums of the adjacency."""
        return np.asarray(self.adjacency.sum(axis=1)).ravel()


@dataclass(frozen=True)
class DegreeProfile:
    """Per-node weighted degrees with their aggregate quantities.

    ``total_weight`` is the sum of all degrees (2m on a loop-free unweighted
    graph); ``edge_count`` counts each undirected edge once, self-loops
    included once.
    """

    degrees: np.ndarray
    total_weight: float
    edge_count: int


def build_graph(edge_list, num_nodes: int, node_labels=None, graph_id=None) -> Graph:
    """Assemble a Graph from an iterable of ``(i, j, weight)`` triples.

    Duplicate entries for the same unordered pair (either orientation) are
    merged by summing their weights. Nodes left with zero degree receive a
    unit self-loop.

    Raises ValueError for negative weights or out-of-range node indices.
    """
    if num_nodes < 1:
        raise ValueError(f"num_nodes must be >= 1, got {num_nodes}")

    edges = list(edge_list)
    if edges:
        ii = np.asarray([e[0] for e in edges], dtype=np.int64)
        jj = np.asarray([e[1] for e in edges], dtype=np.int64)
        ww = np.asarray([e[2] for e in edges], dtype=np.float64)
        if ii.min() < 0 or jj.min() < 0 or ii.max() >= num_nodes or jj.max() >= num_nodes:
            raise ValueError("edge endpoint out of range")
        if np.any(ww < 0):
            bad = int(np.flatnonzero(ww < 0)[0])
            raise ValueError(
                f"negative edge weight {ww[bad]} on ({ii[bad]}, {jj[bad]})"
            )
        off = ii != jj
        rows = np.concatenate([ii, jj[off]])
        cols = np.concatenate([jj, ii[off]])
        data = np.concatenate([ww, ww[off]])
        adj = sparse.coo_array(
            (data, (rows, cols)), shape=(num_nodes, num_nodes)
        ).tocsr()
        adj.sum_duplicates()
        adj.eliminate_zeros()
    else:
        adj = sparse.csr_array((num_nodes, num_nodes), dtype=np.float64)

    deg = np.asarray(adj.sum(axis=1)).ravel()
    isolated = np.flatnonzero(deg == 0)
    if isolated.size:
        loops = sparse.coo_array(
            (np.ones(isolated.size), (isolated, isolated)),
            shape=(num_nodes, num_nodes),
        )
        adj = (adj + loops.tocsr()).tocsr()
    adj.sort_indices()

    labels = None
    if node_labels is not None:
        labels = np.asarray(node_labels, dtype=np.int64)
        if labels.shape != (num_nodes,):
            raise ValueError(
                f"node_labels has length {labels.size}, expected {num_nodes}"
            )
        labels = labels.copy()
        labels.setflags(write=False)

    return Graph(num_nodes=num_nodes, adjacency=adj, node_labels=labels, graph_id=graph_id)


def degree_profile(g: Graph) -> DegreeProfile:
    """Degrees, their total, and the undirected edge count of ``g``."""
    deg = g.degrees()
    n_diag = int(np.count_nonzero(g.adjacency.diagonal()))
    nnz = g.adjacency.nnz
    edge_count = (nnz - n_diag) // 2 + n_diag
    return DegreeProfile(
        degrees=deg, total_weight=float(deg.sum()), edge_count=edge_count
    )
