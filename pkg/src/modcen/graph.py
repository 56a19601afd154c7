"""Immutable undirected graphs with dense integer ids.

Nodes are always ``0..n-1`` internally; a side table maps them back to the
labels found in the input file.  Edges are stored once as canonical
``(min, max)`` pairs sorted lexicographically, plus a CSR adjacency for
traversal.  Derived objects (community-restricted views, extracted
components) never mutate their parent.
"""
from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import IO, Iterable, Union

import numpy as np
import scipy.sparse as sp

__all__ = [
    "EdgeListFormatError",
    "Graph",
    "LoadStats",
    "Partition",
    "SubgraphView",
    "connected_components",
    "global_network",
    "largest_connected_component",
    "load_edge_list",
    "local_network",
    "write_edge_list",
]

PathOrFile = Union[str, os.PathLike, IO[str]]

_COMMENT_PREFIXES = ("#", "%")


class EdgeListFormatError(ValueError):
    """Raised for malformed edge-list input; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class LoadStats:
    """What the edge-list reader saw and silently dropped."""

    lines: int
    edges: int
    dropped_self_loops: int
    dropped_duplicates: int


def _canonical_edges(pairs: np.ndarray) -> tuple[np.ndarray, int, int]:
    """Sort each pair, drop self-loops and duplicates; return counts of both."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    self_loops = int(np.count_nonzero(pairs[:, 0] == pairs[:, 1]))
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    lo = np.minimum(pairs[:, 0], pairs[:, 1])
    hi = np.maximum(pairs[:, 0], pairs[:, 1])
    edges = np.unique(np.column_stack([lo, hi]), axis=0)
    duplicates = pairs.shape[0] - edges.shape[0]
    return edges, self_loops, duplicates


def _build_csr(n_nodes: int, edges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Build (indptr, indices) with each undirected edge stored both ways."""
    if edges.shape[0] == 0:
        return np.zeros(n_nodes + 1, dtype=np.int64), np.empty(0, dtype=np.int64)
    heads = np.concatenate([edges[:, 0], edges[:, 1]])
    tails = np.concatenate([edges[:, 1], edges[:, 0]])
    order = np.lexsort((tails, heads))
    heads, tails = heads[order], tails[order]
    indptr = np.zeros(n_nodes + 1, dtype=np.int64)
    np.add.at(indptr, heads + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, tails


class Graph:
    """Undirected simple graph, immutable after construction.

    Build instances through :meth:`from_edges` or :func:`load_edge_list`;
    the constructor expects already-canonical inputs.
    """

    __slots__ = ("_n", "_edges", "_labels", "_indptr", "_indices",
                 "_csr", "_components")

    def __init__(self, edges: np.ndarray, n_nodes: int, labels: np.ndarray | None = None):
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.shape[0] and edges.max() >= n_nodes:
            raise ValueError("edge endpoint out of range")
        if edges.shape[0] and edges.min() < 0:
            raise ValueError("negative node id")
        self._n = int(n_nodes)
        self._edges = edges
        self._edges.setflags(write=False)
        if labels is None:
            labels = np.arange(self._n, dtype=np.int64)
        else:
            labels = np.asarray(labels)
            if labels.shape[0] != self._n:
                raise ValueError("labels length does not match node count")
        self._labels = labels
        self._labels.setflags(write=False)
        self._indptr, self._indices = _build_csr(self._n, edges)
        self._indptr.setflags(write=False)
        self._indices.setflags(write=False)
        self._csr = None
        self._components = None

    # ------------------------------------------------------------------
    # construction helpers

    @classmethod
    def from_edges(cls, pairs: Iterable[tuple[int, int]] | np.ndarray,
                   n_nodes: int | None = None) -> "Graph":
        """Build a graph from integer id pairs, dropping loops and duplicates."""
        pairs = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs,
                           dtype=np.int64).reshape(-1, 2)
        edges, _, _ = _canonical_edges(pairs)
        if n_nodes is None:
            n_nodes = int(edges.max()) + 1 if edges.shape[0] else 0
        return cls(edges, n_nodes)

    # ------------------------------------------------------------------
    # basic accessors

    @property
    def n_nodes(self) -> int:
        return self._n

    @property
    def n_edges(self) -> int:
        return self._edges.shape[0]

    @property
    def edges(self) -> np.ndarray:
        """Canonical (min, max) pairs, lexicographically sorted, shape (m, 2)."""
        return self._edges

    @property
    def labels(self) -> np.ndarray:
        """Original input label for each dense node id."""
        return self._labels

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    def neighbors(self, v: int) -> np.ndarray:
        return self._indices[self._indptr[v]:self._indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self._indptr)

    def adjacency(self) -> sp.csr_matrix:
        """Symmetric 0/1 adjacency as a scipy CSR matrix (cached)."""
        if self._csr is None:
            data = np.ones(self._indices.shape[0], dtype=np.float64)
            self._csr = sp.csr_matrix((data, self._indices, self._indptr),
                                      shape=(self._n, self._n))
        return self._csr

    def label_of(self, v: int):
        return self._labels[v]

    def __repr__(self) -> str:
        return f"Graph(n_nodes={self._n}, n_edges={self.n_edges})"

    # ------------------------------------------------------------------
    # derived graphs

    def induced_subgraph(self, nodes: np.ndarray) -> "Graph":
        """Extract the subgraph on ``nodes`` with fresh dense ids.

        Nodes are renumbered in ascending old-id order and keep their
        original labels.
        """
        nodes = np.unique(np.asarray(nodes, dtype=np.int64))
        remap = np.full(self._n, -1, dtype=np.int64)
        remap[nodes] = np.arange(nodes.shape[0])
        mask = (remap[self._edges[:, 0]] >= 0) & (remap[self._edges[:, 1]] >= 0)
        edges = remap[self._edges[mask]]
        edges = np.unique(np.column_stack([edges.min(axis=1), edges.max(axis=1)]), axis=0)
        return Graph(edges, nodes.shape[0], labels=self._labels[nodes].copy())


@dataclass(frozen=True)
class Partition:
    """Assignment of every node to exactly one community.

    Community ids are dense ``0..n_communities-1``.
    """

    labels: np.ndarray
    n_communities: int = field(default=0)

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int64, copy=True)
        object.__setattr__(self, "labels", labels)
        if labels.shape[0] and labels.min() < 0:
            raise ValueError("community ids must be non-negative")
        n_comm = int(labels.max()) + 1 if labels.shape[0] else 0
        seen = np.zeros(n_comm, dtype=bool)
        seen[labels] = True
        if not seen.all():
            raise ValueError("community ids must be dense (no gaps)")
        object.__setattr__(self, "n_communities", n_comm)
        labels.setflags(write=False)

    @classmethod
    def from_labels(cls, labels: Iterable[int]) -> "Partition":
        """Compact arbitrary non-negative ids to dense ones.

        Renumbering is by ascending smallest member node id, so the result
        does not depend on the original id values.
        """
        labels = np.asarray(list(labels) if not isinstance(labels, np.ndarray) else labels,
                            dtype=np.int64)
        _, first_pos, inverse = np.unique(labels, return_index=True, return_inverse=True)
        order = np.argsort(np.argsort(first_pos))
        return cls(order[inverse])

    @property
    def n_nodes(self) -> int:
        return self.labels.shape[0]

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_communities)

    def members(self, community: int) -> np.ndarray:
        return np.flatnonzero(self.labels == community)


def _check_partition(graph: Graph, partition: Partition) -> None:
    if partition.n_nodes != graph.n_nodes:
        raise ValueError(
            f"partition covers {partition.n_nodes} nodes, graph has {graph.n_nodes}")


# ----------------------------------------------------------------------
# connected components

def _label_components(n_nodes: int, indptr: np.ndarray, indices: np.ndarray,
                      active: np.ndarray | None = None) -> tuple[np.ndarray, int]:
    """BFS labeling; the component of the smallest active node id gets 0."""
    labels = np.full(n_nodes, -1, dtype=np.int64)
    queue = np.empty(n_nodes, dtype=np.int64)
    current = 0
    for start in range(n_nodes):
        if labels[start] >= 0 or (active is not None and not active[start]):
            continue
        labels[start] = current
        queue[0] = start
        head, tail = 0, 1
        while head < tail:
            v = queue[head]
            head += 1
            for w in indices[indptr[v]:indptr[v + 1]]:
                if labels[w] < 0:
                    labels[w] = current
                    queue[tail] = w
                    tail += 1
        current += 1
    return labels, current


@dataclass(frozen=True)
class SubgraphView:
    """Edge-restricted view of a parent graph.

    Keeps parent node ids: adjacency arrays span the full parent id range,
    with empty rows for nodes outside the view.  ``component_of`` is -1 for
    excluded nodes; component ids follow ascending smallest-member order.
    """

    parent: Graph
    node_mask: np.ndarray
    edges: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    component_of: np.ndarray
    n_components: int

    @classmethod
    def from_edge_mask(cls, parent: Graph, edge_mask: np.ndarray,
                       keep_all_nodes: bool) -> "SubgraphView":
        edges = parent.edges[edge_mask]
        node_mask = np.zeros(parent.n_nodes, dtype=bool)
        if keep_all_nodes:
            node_mask[:] = True
        else:
            node_mask[edges.ravel()] = True
        indptr, indices = _build_csr(parent.n_nodes, edges)
        component_of, n_comp = _label_components(parent.n_nodes, indptr, indices,
                                                 active=node_mask)
        for arr in (node_mask, edges, indptr, indices, component_of):
            arr.setflags(write=False)
        return cls(parent, node_mask, edges, indptr, indices, component_of, n_comp)

    @property
    def node_ids(self) -> np.ndarray:
        return np.flatnonzero(self.node_mask)

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    def degrees(self) -> np.ndarray:
        """Degree within the view, indexed by parent node id."""
        return np.diff(self.indptr)

    def component_subgraph(self, component: int) -> Graph:
        """Extract one component as a standalone graph (dense relabeling)."""
        return self.parent.induced_subgraph(
            np.flatnonzero(self.component_of == component))


def connected_components(scope: Graph | SubgraphView) -> tuple[np.ndarray, int]:
    """Component label per node and the number of components.

    For a view, excluded nodes get label -1.  The component containing the
    smallest (retained) node id is labeled 0, the next unvisited smallest 1,
    and so on.
    """
    if isinstance(scope, SubgraphView):
        return scope.component_of, scope.n_components
    if scope._components is None:
        scope._components = _label_components(scope.n_nodes, scope.indptr, scope.indices)
    return scope._components


def largest_connected_component(graph: Graph) -> Graph:
    """Extract the largest component; ties go to the smallest minimum label."""
    labels, n_comp = connected_components(graph)
    if n_comp == 0:
        return graph
    sizes = np.bincount(labels, minlength=n_comp)
    best = int(np.flatnonzero(sizes == sizes.max())[0])
    # Component ids follow ascending smallest-member order, and node ids
    # follow ascending label order at load time, so the first maximal
    # component already has the smallest minimum original label.
    return graph.induced_subgraph(np.flatnonzero(labels == best))


# ----------------------------------------------------------------------
# community-restricted views

def local_network(graph: Graph, partition: Partition) -> SubgraphView:
    """Keep only intra-community edges; every node stays in the view."""
    _check_partition(graph, partition)
    comm = partition.labels
    mask = comm[graph.edges[:, 0]] == comm[graph.edges[:, 1]]
    return SubgraphView.from_edge_mask(graph, mask, keep_all_nodes=True)


def global_network(graph: Graph, partition: Partition) -> SubgraphView:
    """Keep only inter-community edges; nodes without one are excluded."""
    _check_partition(graph, partition)
    comm = partition.labels
    mask = comm[graph.edges[:, 0]] != comm[graph.edges[:, 1]]
    return SubgraphView.from_edge_mask(graph, mask, keep_all_nodes=False)


# ----------------------------------------------------------------------
# edge-list input/output

def _open_maybe(source: PathOrFile, mode: str):
    if isinstance(source, (str, os.PathLike)):
        return open(source, mode, encoding="utf-8"), True
    return source, False


def load_edge_list(source: PathOrFile, *, labels: str = "int",
                   return_stats: bool = False):
    """Read a whitespace-separated edge list.

    Each non-comment line holds two node labels.  Lines starting with ``#``
    or ``%`` and blank lines are skipped.  Self-loops and duplicate edges
    (in either orientation) are dropped; the counts are available through
    ``return_stats``.  Labels are compacted to dense ids in ascending label
    order.

    Args:
        source: path or open text stream.
        labels: "int" to require integer labels, "str" to accept any token.
        return_stats: also return a :class:`LoadStats`.

    Raises:
        EdgeListFormatError: on a malformed line, with its line number.
    """
    if labels not in ("int", "str"):
        raise ValueError("labels must be 'int' or 'str'")
    stream, should_close = _open_maybe(source, "r")
    raw_u: list = []
    raw_v: list = []
    n_lines = 0
    try:
        for line_no, line in enumerate(stream, start=1):
            text = line.strip()
            if not text or text.startswith(_COMMENT_PREFIXES):
                continue
            n_lines += 1
            parts = text.split()
            if len(parts) != 2:
                raise EdgeListFormatError(line_no, f"expected 2 fields, got {len(parts)}")
            if labels == "int":
                try:
                    raw_u.append(int(parts[0]))
                    raw_v.append(int(parts[1]))
                except ValueError:
                    raise EdgeListFormatError(line_no, f"non-integer label in {parts!r}") from None
            else:
                raw_u.append(parts[0])
                raw_v.append(parts[1])
    finally:
        if should_close:
            stream.close()

    uniq = np.unique(np.concatenate([np.asarray(raw_u), np.asarray(raw_v)])) \
        if raw_u else np.empty(0, dtype=np.int64)
    lookup = {lab: i for i, lab in enumerate(uniq.tolist())}
    pairs = np.empty((len(raw_u), 2), dtype=np.int64)
    for i, (a, b) in enumerate(zip(raw_u, raw_v)):
        pairs[i, 0] = lookup[a]
        pairs[i, 1] = lookup[b]
    edges, n_loops, n_dups = _canonical_edges(pairs)

    # Nodes appearing only in dropped self-loops still count as nodes.
    graph = Graph(edges, uniq.shape[0], labels=uniq.copy())
    if return_stats:
        return graph, LoadStats(n_lines, graph.n_edges, n_loops, n_dups)
    return graph


def write_edge_list(graph: Graph, sink: PathOrFile) -> None:
    """Write dense-id edges, lexicographically sorted, one per line."""
    stream, should_close = _open_maybe(sink, "w")
    try:
        for u, v in graph.edges:
            stream.write(f"{u} {v}\n")
    finally:
        if should_close:
            stream.close()


def dumps_edge_list(graph: Graph) -> str:
    buf = io.StringIO()
    write_edge_list(graph, buf)
    return buf.getvalue()
