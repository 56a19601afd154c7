"""Classical centrality measures with per-component semantics.

All functions accept either a whole :class:`~modcen.graph.Graph` or a
:class:`~modcen.graph.SubgraphView` and return one score per parent node id.
Nodes outside the view score exactly 0.  Disconnected scopes are handled
component by component: shortest-path measures never mix components, and the
eigenvector measure is normalized to a maximum of 1 inside each component.
"""
from __future__ import annotations

import csv
import enum
import os
from typing import IO, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import shortest_path

from .graph import Graph, SubgraphView, connected_components

__all__ = [
    "CentralityKind",
    "PowerIterationError",
    "betweenness_centrality",
    "centrality",
    "closeness_centrality",
    "degree_centrality",
    "eigenvector_centrality",
    "write_scores_csv",
]

Scope = Union[Graph, SubgraphView]


class CentralityKind(str, enum.Enum):
    DEGREE = "degree"
    BETWEENNESS = "betweenness"
    CLOSENESS = "closeness"
    EIGENVECTOR = "eigenvector"


class PowerIterationError(RuntimeError):
    """Eigenvector iteration did not reach the target residual."""

    def __init__(self, residual: float, iterations: int):
        super().__init__(
            f"power iteration stopped after {iterations} iterations "
            f"with residual {residual:.3e}")
        self.residual = residual
        self.iterations = iterations


def _scope_arrays(scope: Scope):
    """(n, indptr, indices, component_of, n_components) over parent ids."""
    if isinstance(scope, SubgraphView):
        return (scope.parent.n_nodes, scope.indptr, scope.indices,
                scope.component_of, scope.n_components)
    comp, n_comp = connected_components(scope)
    return scope.n_nodes, scope.indptr, scope.indices, comp, n_comp


def degree_centrality(scope: Scope) -> np.ndarray:
    n, indptr, _, _, _ = _scope_arrays(scope)
    return np.diff(indptr).astype(np.float64)


def betweenness_centrality(scope: Scope) -> np.ndarray:
    """Shortest-path betweenness, unnormalized, each unordered pair once.

    Brandes' accumulation over BFS DAGs, run independently inside each
    component (cross-component pairs contribute nothing by construction).
    """
    n, indptr, indices, comp, _ = _scope_arrays(scope)
    # Python-level loops dominate here; plain lists beat numpy scalars.
    adj = [indices[indptr[v]:indptr[v + 1]].tolist() for v in range(n)]
    bc = [0.0] * n
    dist = [-1] * n
    sigma = [0.0] * n
    delta = [0.0] * n
    order = [0] * n

    for s in range(n):
        if comp[s] < 0:
            continue
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head, tail = 0, 1
        while head < tail:
            v = order[head]
            head += 1
            dv1 = dist[v] + 1
            sv = sigma[v]
            for w in adj[v]:
                dw = dist[w]
                if dw < 0:
                    dist[w] = dv1
                    dw = dv1
                    order[tail] = w
                    tail += 1
                if dw == dv1:
                    sigma[w] += sv
        for i in range(tail - 1, 0, -1):
            w = order[i]
            coeff = (1.0 + delta[w]) / sigma[w]
            dw1 = dist[w] - 1
            for v in adj[w]:
                if dist[v] == dw1:
                    delta[v] += sigma[v] * coeff
            bc[w] += delta[w]
        for i in range(tail):
            v = order[i]
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0

    # Each unordered pair was accumulated from both endpoints.
    return np.asarray(bc) / 2.0


def closeness_centrality(scope: Scope, *, chunk: int = 256) -> np.ndarray:
    """Inverse of the summed distances to same-component nodes.

    A node alone in its component scores 0.
    """
    n, indptr, indices, comp, _ = _scope_arrays(scope)
    if n == 0:
        return np.zeros(0)
    matrix = sp.csr_matrix(
        (np.ones(indices.shape[0]), indices, indptr), shape=(n, n))
    active = np.flatnonzero(comp >= 0)
    dist_sum = np.zeros(n)
    for start in range(0, active.shape[0], chunk):
        block = active[start:start + chunk]
        d = shortest_path(matrix, method="D", directed=False, unweighted=True,
                          indices=block)
        np.putmask(d, ~np.isfinite(d), 0.0)
        dist_sum[block] = d.sum(axis=1)
    out = np.zeros(n)
    reachable = dist_sum > 0
    out[reachable] = 1.0 / dist_sum[reachable]
    return out


def eigenvector_centrality(scope: Scope, *, tol: float = 1e-10,
                           max_iter: int = 10000) -> np.ndarray:
    """Principal adjacency eigenvector, max entry 1 per component.

    Power iteration starts from all ones and runs on A+I: the shift leaves
    component eigenvectors untouched while making the top eigenvalue
    strictly dominant, so bipartite components cannot oscillate.  The
    residual check is against A itself.

    Raises:
        PowerIterationError: if no component reaches
            ``max|Ax - lambda*x| < tol * max|x|`` within ``max_iter``.
    """
    n, indptr, indices, comp, n_comp = _scope_arrays(scope)
    scores = np.zeros(n)
    if n == 0:
        return scores
    matrix = sp.csr_matrix(
        (np.ones(indices.shape[0]), indices, indptr), shape=(n, n))
    for c in range(n_comp):
        nodes = np.flatnonzero(comp == c)
        if nodes.shape[0] < 2:
            continue  # singleton components score 0
        sub = matrix[nodes][:, nodes].tocsr()
        x = np.ones(nodes.shape[0])
        converged = False
        residual = np.inf
        for iteration in range(max_iter):
            ax = sub @ x
            lam = float(x @ ax) / float(x @ x)
            residual = float(np.abs(ax - lam * x).max())
            if residual < tol * float(np.abs(x).max()):
                converged = True
                break
            x = ax + x
            x /= x.max()
        if not converged:
            raise PowerIterationError(residual, max_iter)
        scores[nodes] = x / x.max()
    return scores


_DISPATCH = {
    CentralityKind.DEGREE: degree_centrality,
    CentralityKind.BETWEENNESS: betweenness_centrality,
    CentralityKind.CLOSENESS: closeness_centrality,
    CentralityKind.EIGENVECTOR: eigenvector_centrality,
}


def centrality(kind: CentralityKind | str, scope: Scope, **options) -> np.ndarray:
    """Compute one centrality measure; ``kind`` may be an enum or its name."""
    return _DISPATCH[CentralityKind(kind)](scope, **options)


def write_scores_csv(graph: Graph, scores: np.ndarray, sink) -> None:
    """Emit scores as ``node,score`` rows ordered by node id."""
    close = False
    if isinstance(sink, (str, os.PathLike)):
        sink = open(sink, "w", newline="", encoding="utf-8")
        close = True
    try:
        writer = csv.writer(sink)
        writer.writerow(["node", "score"])
        for v in range(graph.n_nodes):
            writer.writerow([graph.labels[v], f"{scores[v]:.12g}"])
    finally:
        if close:
            sink.close()
