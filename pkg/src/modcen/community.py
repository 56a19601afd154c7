"""Community structure: detection, quality, and mixing statistics.

Louvain here is deterministic for a fixed seed: node visit order is the only
random ingredient, equal-gain moves go to the lowest community id, and a
level ends once a full pass improves modularity by less than a fixed
threshold.  A final single-node refinement pass on the original graph makes
the returned partition a local maximum under individual node moves, not just
under supernode moves.
"""
from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from ._rng import STREAM_DETECTION, substream
from .graph import Graph, Partition, _check_partition

__all__ = [
    "CommunityStats",
    "Louvain",
    "community_stats",
    "global_mixing",
    "louvain",
    "mixing_per_community",
    "modularity",
    "read_partition",
    "write_community_stats_csv",
    "write_partition",
]

_GAIN_THRESHOLD = 1e-7


def modularity(graph: Graph, partition: Partition, *, resolution: float = 1.0) -> float:
    """Newman modularity of a partition.

    Raises:
        ValueError: for a graph without edges (the measure is undefined).
    """
    if graph.n_edges == 0:
        raise ValueError("modularity is undefined for a graph without edges")
    _check_partition(graph, partition)
    comm = partition.labels
    m = float(graph.n_edges)
    u, v = graph.edges[:, 0], graph.edges[:, 1]
    intra = np.bincount(comm[u], weights=(comm[u] == comm[v]).astype(np.float64),
                        minlength=partition.n_communities)
    degree_sum = np.bincount(comm, weights=graph.degrees().astype(np.float64),
                             minlength=partition.n_communities)
    return float((intra / m).sum() - resolution * ((degree_sum / (2.0 * m)) ** 2).sum())


# ----------------------------------------------------------------------
# Louvain

def _local_moves(neigh: list[dict], k: np.ndarray, m: float, comm: np.ndarray,
                 sigma_tot: np.ndarray, rng: np.random.Generator,
                 resolution: float) -> bool:
    """Sweep passes until one gains < threshold; returns whether anything moved."""
    n = len(neigh)
    moved_any = False
    while True:
        pass_gain = 0.0
        for v in rng.permutation(n):
            v = int(v)
            a = int(comm[v])
            k_v = k[v]
            link: dict[int, float] = {}
            for u, w in neigh[v].items():
                if u != v:
                    c = int(comm[u])
                    link[c] = link.get(c, 0.0) + w
            sigma_tot[a] -= k_v
            stay = link.get(a, 0.0) - resolution * k_v * sigma_tot[a] / (2.0 * m)
            best_c, best_gain = a, stay
            for c in sorted(link):
                if c == a:
                    continue
                gain = link[c] - resolution * k_v * sigma_tot[c] / (2.0 * m)
                # Strict improvement required; ascending id scan means the
                # lowest community id wins exact ties.
                if gain > best_gain:
                    best_c, best_gain = c, gain
            sigma_tot[best_c] += k_v
            if best_c != a:
                comm[v] = best_c
                moved_any = True
                pass_gain += (best_gain - stay) / m
        if pass_gain < _GAIN_THRESHOLD:
            return moved_any


def _compact_by_smallest_member(comm: np.ndarray) -> np.ndarray:
    """Renumber community ids so they ascend with the smallest member id."""
    _, first, inverse = np.unique(comm, return_index=True, return_inverse=True)
    return np.argsort(np.argsort(first))[inverse]


def _aggregate(neigh: list[dict], self_w: np.ndarray, comm: np.ndarray
               ) -> tuple[list[dict], np.ndarray]:
    n_new = int(comm.max()) + 1
    new_neigh: list[dict] = [dict() for _ in range(n_new)]
    new_self = np.zeros(n_new)
    for v, c in enumerate(comm):
        new_self[c] += self_w[v]
        row = new_neigh[c]
        for u, w in neigh[v].items():
            cu = int(comm[u])
            if cu == c:
                new_self[c] += w / 2.0  # both directions add up to the edge weight
            else:
                row[cu] = row.get(cu, 0.0) + w
    return new_neigh, new_self


def louvain(graph: Graph, *, seed: int = 0, resolution: float = 1.0) -> Partition:
    """Multilevel greedy modularity optimization.

    Returns the final-level partition flattened to original nodes and
    relabeled so community ids ascend with their smallest member.

    Raises:
        ValueError: for a graph without edges.
    """
    if graph.n_edges == 0:
        raise ValueError("community detection needs at least one edge")
    rng = substream(seed, STREAM_DETECTION)
    m = float(graph.n_edges)

    neigh: list[dict] = [
        dict.fromkeys(graph.neighbors(v).tolist(), 1.0) for v in range(graph.n_nodes)]
    self_w = np.zeros(graph.n_nodes)
    k = graph.degrees().astype(np.float64)

    assignment = np.arange(graph.n_nodes)  # original node -> current supernode
    while True:
        comm = np.arange(len(neigh))
        sigma_tot = k.copy()
        moved = _local_moves(neigh, k, m, comm, sigma_tot, rng, resolution)
        comm = _compact_by_smallest_member(comm)
        assignment = comm[assignment]
        if not moved or comm.max() + 1 == len(neigh):
            break
        neigh, self_w = _aggregate(neigh, self_w, comm)
        k = np.array([sum(row.values()) + 2.0 * s for row, s in zip(neigh, self_w)])

    # Refinement on the original graph: guarantees no single-node move can
    # still improve Q at the returned partition.
    neigh = [dict.fromkeys(graph.neighbors(v).tolist(), 1.0) for v in range(graph.n_nodes)]
    k = graph.degrees().astype(np.float64)
    comm = assignment.copy()
    sigma_tot = np.bincount(comm, weights=k, minlength=int(comm.max()) + 1).astype(np.float64)
    _local_moves(neigh, k, m, comm, sigma_tot, rng, resolution)
    return Partition.from_labels(_compact_by_smallest_member(comm))


class Louvain(ClusterMixin, BaseEstimator):
    """Estimator wrapper around :func:`louvain`.

    Attributes after ``fit``: ``labels_``, ``partition_``, ``modularity_``,
    ``n_communities_``.
    """

    def __init__(self, resolution: float = 1.0, seed: int = 0):
        self.resolution = resolution
        self.seed = seed

    def fit(self, X: Graph, y=None) -> "Louvain":
        partition = louvain(X, seed=self.seed, resolution=self.resolution)
        self.partition_ = partition
        self.labels_ = partition.labels
        self.n_communities_ = partition.n_communities
        self.modularity_ = modularity(X, partition)
        return self


# ----------------------------------------------------------------------
# mixing statistics

def _external_degrees(graph: Graph, partition: Partition) -> np.ndarray:
    comm = partition.labels
    u, v = graph.edges[:, 0], graph.edges[:, 1]
    inter = comm[u] != comm[v]
    ext = np.zeros(graph.n_nodes, dtype=np.int64)
    np.add.at(ext, u[inter], 1)
    np.add.at(ext, v[inter], 1)
    return ext


def mixing_per_community(graph: Graph, partition: Partition) -> np.ndarray:
    """Fraction of each community's degree that leaves the community.

    A community without any attached edge gets 0.
    """
    _check_partition(graph, partition)
    ext = _external_degrees(graph, partition)
    total = np.bincount(partition.labels, weights=graph.degrees().astype(np.float64),
                        minlength=partition.n_communities)
    external = np.bincount(partition.labels, weights=ext.astype(np.float64),
                           minlength=partition.n_communities)
    out = np.zeros(partition.n_communities)
    np.divide(external, total, out=out, where=total > 0)
    return out


def global_mixing(graph: Graph, partition: Partition, *,
                  method: str = "node_average") -> float:
    """Network-level mixing: how much of the linkage crosses communities.

    ``node_average`` (default) averages each node's external-degree fraction,
    skipping degree-0 nodes.  ``edge_fraction`` is the share of edges that
    cross communities.

    Raises:
        ValueError: when every node has degree 0 (or, for ``edge_fraction``,
            the graph has no edges), or on an unknown method.
    """
    _check_partition(graph, partition)
    comm = partition.labels
    if method == "edge_fraction":
        if graph.n_edges == 0:
            raise ValueError("mixing is undefined for a graph without edges")
        inter = comm[graph.edges[:, 0]] != comm[graph.edges[:, 1]]
        return float(np.count_nonzero(inter)) / float(graph.n_edges)
    if method != "node_average":
        raise ValueError(f"unknown mixing method {method!r}")
    degrees = graph.degrees()
    mask = degrees > 0
    if not mask.any():
        raise ValueError("mixing is undefined when all nodes are isolated")
    ext = _external_degrees(graph, partition)
    return float((ext[mask] / degrees[mask]).mean())


@dataclass(frozen=True)
class CommunityStats:
    """Per-community degree bookkeeping plus network-level summaries."""

    sizes: np.ndarray
    internal_degree: np.ndarray
    external_degree: np.ndarray
    mixing: np.ndarray
    global_mixing: float
    modularity: float


def community_stats(graph: Graph, partition: Partition) -> CommunityStats:
    _check_partition(graph, partition)
    ext = _external_degrees(graph, partition)
    total = np.bincount(partition.labels, weights=graph.degrees().astype(np.float64),
                        minlength=partition.n_communities).astype(np.int64)
    external = np.bincount(partition.labels, weights=ext.astype(np.float64),
                           minlength=partition.n_communities).astype(np.int64)
    return CommunityStats(
        sizes=partition.sizes(),
        internal_degree=total - external,
        external_degree=external,
        mixing=mixing_per_community(graph, partition),
        global_mixing=global_mixing(graph, partition),
        modularity=modularity(graph, partition),
    )


def write_community_stats_csv(stats: CommunityStats, sink) -> None:
    """Emit ``community,size,internal_deg,external_deg,mu`` rows."""
    close = False
    if isinstance(sink, (str, os.PathLike)):
        sink = open(sink, "w", newline="", encoding="utf-8")
        close = True
    try:
        writer = csv.writer(sink)
        writer.writerow(["community", "size", "internal_deg", "external_deg", "mu"])
        for c in range(stats.sizes.shape[0]):
            writer.writerow([c, stats.sizes[c], stats.internal_degree[c],
                             stats.external_degree[c], f"{stats.mixing[c]:.12g}"])
    finally:
        if close:
            sink.close()


# ----------------------------------------------------------------------
# partition files

def read_partition(source, graph: Graph) -> Partition:
    """Read ``node_label community_id`` lines covering every node exactly once.

    Raises:
        ValueError: on an unknown or repeated label, or an uncovered node;
            the offending label is named in the message.
    """
    close = False
    if isinstance(source, (str, os.PathLike)):
        source = open(source, "r", encoding="utf-8")
        close = True
    by_label = {lab: i for i, lab in enumerate(graph.labels.tolist())}
    integer_labels = graph.labels.dtype.kind in "iu"
    raw = np.full(graph.n_nodes, -1, dtype=np.int64)
    try:
        for line_no, line in enumerate(source, start=1):
            text = line.strip()
            if not text or text.startswith(("#", "%")):
                continue
            parts = text.split()
            if len(parts) != 2:
                raise ValueError(f"line {line_no}: expected 'node community', got {text!r}")
            label = int(parts[0]) if integer_labels else parts[0]
            if label not in by_label:
                raise ValueError(f"line {line_no}: label {label!r} is not in the graph")
            node = by_label[label]
            if raw[node] >= 0:
                raise ValueError(f"line {line_no}: label {label!r} assigned twice")
            raw[node] = int(parts[1])
    finally:
        if close:
            source.close()
    missing = np.flatnonzero(raw < 0)
    if missing.shape[0]:
        raise ValueError(f"no community for node label {graph.labels[missing[0]]!r}")
    return Partition.from_labels(raw)


def write_partition(graph: Graph, partition: Partition, sink) -> None:
    """Write ``node_label community_id`` lines in node-id order."""
    _check_partition(graph, partition)
    close = False
    if isinstance(sink, (str, os.PathLike)):
        sink = open(sink, "w", encoding="utf-8")
        close = True
    try:
        for v in range(graph.n_nodes):
            sink.write(f"{graph.labels[v]} {partition.labels[v]}\n")
    finally:
        if close:
            sink.close()
