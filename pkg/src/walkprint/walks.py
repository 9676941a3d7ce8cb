"""Stationary random-walk model and multi-hop assortativity computations.

The walk on a graph with adjacency A and degree matrix D moves with the
row-stochastic operator M = D^-1 A, whose stationary distribution is the
degree-proportional vector pi = d / sum(d). The lag-t autocovariance of the
walker's position indicators is

    rho(t) = Pi M^t - pi' pi        (Pi = diag(pi)),

and the t-hop assortativity of a scalar node attribute v is v' rho(t) v.
rho(t) is never materialized: every computation reduces to t sparse
matrix-vector products against M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import sparse

from .graphs import Graph
from .util import derived_rng, ordered_map

DEFAULT_MAX_HOP = 3

# Sample chunk for Monte Carlo estimation. Chunks are seeded independently,
# so the estimate depends only on (seed, samples), not on the worker count.
_MC_CHUNK = 1 << 16


@dataclass(frozen=True)
class WalkModel:
    """Stationary walk on one graph: pi plus a lazy M = D^-1 A action."""

    graph: Graph
    degrees: np.ndarray
    pi: np.ndarray

    def apply(self, v: np.ndarray) -> np.ndarray:
        """One transition step: returns M v (column-wise for 2-D input)."""
        out = self.graph.adjacency @ v
        if out.ndim == 1:
            return out / self.degrees
        return out / self.degrees[:, None]

    @cached_property
    def _degree_cumsum(self) -> np.ndarray:
        return np.cumsum(self.degrees)

    @cached_property
    def _edge_cumsum(self) -> np.ndarray:
        # Running total over CSR data; used for vectorized neighbor sampling.
        return np.cumsum(self.graph.adjacency.data)


@dataclass(frozen=True)
class CategoricalEncoding:
    """One-hot membership matrix H (N x k) for a categorical node attribute.

    Rows of unlabeled nodes are all-zero; labeled rows contain exactly one 1.
    """

    membership: np.ndarray
    k: int


@dataclass(frozen=True)
class AssortativityValue:
    """A single multi-hop assortativity: hop count and value."""

    t: int
    value: float


def walk_model(g: Graph) -> WalkModel:
    """Stationary walk model for a regularized graph."""
    deg = g.degrees()
    if np.any(deg <= 0):
        raise ValueError("graph has a zero-degree node; build_graph regularizes these")
    pi = deg / deg.sum()
    return WalkModel(graph=g, degrees=deg, pi=pi)


def encoding_from_labels(labels, k: int) -> CategoricalEncoding:
    """One-hot encode per-node category indices; -1 rows stay all-zero."""
    labels = np.asarray(labels, dtype=np.int64)
    if k < 1:
        raise ValueError("k must be >= 1")
    if np.any(labels >= k):
        raise ValueError(f"label index {labels.max()} out of range for k={k}")
    h = np.zeros((labels.size, k))
    mask = labels >= 0
    h[np.flatnonzero(mask), labels[mask]] = 1.0
    return CategoricalEncoding(membership=h, k=k)


def hop_vector(m: WalkModel, v: np.ndarray, t: int) -> np.ndarray:
    """M^t v by t sparse mat-vec applications; t = 0 returns v unchanged."""
    if t < 0:
        raise ValueError("hop count must be >= 0")
    v = np.asarray(v, dtype=np.float64)
    if v.shape[0] != m.graph.num_nodes:
        raise ValueError(
            f"attribute length {v.shape[0]} != num_nodes {m.graph.num_nodes}"
        )
    for _ in range(t):
        v = m.apply(v)
    return v


def scalar_assortativity(m: WalkModel, v: np.ndarray, t: int) -> AssortativityValue:
    """t-hop assortativity of a scalar attribute: v' rho(t) v.

    Evaluated as sum_i pi_i v_i (M^t v)_i - (pi . v)^2. A constant attribute
    has zero covariance at every lag and short-circuits to exactly 0.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.shape[0] != m.graph.num_nodes:
        raise ValueError(
            f"attribute length {v.shape[0]} != num_nodes {m.graph.num_nodes}"
        )
    if v.size and v.max() == v.min():
        return AssortativityValue(t=t, value=0.0)
    w = hop_vector(m, v, t)
    mean = float(np.dot(m.pi, v))
    value = float(np.sum(m.pi * v * w)) - mean * mean
    return AssortativityValue(t=t, value=value)


def categorical_assortativity(
    m: WalkModel, h: CategoricalEncoding, t: int
) -> tuple[list[AssortativityValue], AssortativityValue]:
    """Per-category assortativities h_i' rho(t) h_i and their sum.

    The total equals the trace of H' rho(t) H and is computed as the exact
    sum of the per-category values.
    """
    H = h.membership
    if H.shape[0] != m.graph.num_nodes:
        raise ValueError(
            f"encoding has {H.shape[0]} rows, expected {m.graph.num_nodes}"
        )
    W = hop_vector(m, H, t)
    means = m.pi @ H
    per_values = np.einsum("i,ik,ik->k", m.pi, H, W) - means * means
    per = [AssortativityValue(t=t, value=float(x)) for x in per_values]
    total = AssortativityValue(t=t, value=float(np.sum(per_values)))
    return per, total


def node_id_assortativity(
    m: WalkModel, t: int, max_hop: int = DEFAULT_MAX_HOP
) -> AssortativityValue:
    """Node-identity assortativity r(t, I) = sum_i pi_i (M^t)_ii - ||pi||^2.

    The diagonal of M^t is obtained from sparse half-power products, never a
    dense matrix; ``max_hop`` guards against accidental large-t blowup.
    """
    if t < 0:
        raise ValueError("hop count must be >= 0")
    if t > max_hop:
        raise ValueError(f"hop count {t} exceeds configured maximum {max_hop}")
    pi = m.pi
    norm2 = float(np.dot(pi, pi))
    if t == 0:
        return AssortativityValue(t=0, value=float(np.sum(pi)) - norm2)

    adj = m.graph.adjacency
    trans = adj.multiply(1.0 / m.degrees[:, None]).tocsr()
    if t == 1:
        diag = trans.diagonal()
    else:
        half = trans
        for _ in range(t // 2 - 1):
            half = (half @ trans).tocsr()
        other = half if t % 2 == 0 else (half @ trans).tocsr()
        # diag(P Q) = row sums of P .* Q'
        diag = np.asarray(half.multiply(other.T.tocsr()).sum(axis=1)).ravel()
    value = float(np.dot(pi, diag)) - norm2
    return AssortativityValue(t=t, value=value)


def mc_assortativity(
    m: WalkModel,
    v: np.ndarray,
    t: int,
    samples: int,
    seed: int,
    threads: int = 1,
) -> AssortativityValue:
    """Monte Carlo estimate of the t-hop assortativity from simulated walks.

    Each sample starts at a node drawn from pi (an edge endpoint chosen
    proportionally to weight) and takes t transition steps; the estimator is
    mean(v[x0] * v[xt]) - (pi . v)^2 with the mean attribute computed
    exactly. Samples are drawn in fixed-size chunks with per-chunk derived
    seeds, so the result depends only on (seed, samples) and not on the
    worker count.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if t < 0:
        raise ValueError("hop count must be >= 0")
    v = np.asarray(v, dtype=np.float64)
    if v.shape[0] != m.graph.num_nodes:
        raise ValueError(
            f"attribute length {v.shape[0]} != num_nodes {m.graph.num_nodes}"
        )
    if v.size and v.max() == v.min():
        return AssortativityValue(t=t, value=0.0)

    adj = m.graph.adjacency
    indptr, indices = adj.indptr, adj.indices
    deg_cum = m._degree_cumsum
    edge_cum = m._edge_cumsum
    total_weight = deg_cum[-1]

    def run_chunk(chunk_index: int) -> float:
        start = chunk_index * _MC_CHUNK
        size = min(_MC_CHUNK, samples - start)
        rng = derived_rng(seed, chunk_index)
        u = rng.random(size)
        x = np.searchsorted(deg_cum, u * total_weight, side="right")
        x = np.minimum(x, m.graph.num_nodes - 1)
        v0 = v[x]
        for _ in range(t):
            u = rng.random(size)
            target = edge_cum[indptr[x]] - adj.data[indptr[x]] + u * m.degrees[x]
            pos = np.searchsorted(edge_cum, target, side="right")
            pos = np.clip(pos, indptr[x], indptr[x + 1] - 1)
            x = indices[pos]
        return float(np.sum(v0 * v[x]))

    n_chunks = (samples + _MC_CHUNK - 1) // _MC_CHUNK
    chunk_sums = ordered_map(run_chunk, range(n_chunks), threads=threads)
    mean = float(np.dot(m.pi, v))
    value = math.fsum(chunk_sums) / samples - mean * mean
    return AssortativityValue(t=t, value=value)
