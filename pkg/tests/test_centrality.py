import itertools

import numpy as np
import pytest

from modcen import (
    CentralityKind,
    Graph,
    Partition,
    PowerIterationError,
    betweenness_centrality,
    centrality,
    closeness_centrality,
    degree_centrality,
    eigenvector_centrality,
    local_network,
    write_scores_csv,
)

from conftest import random_graph, random_partition


# ------------------------------------------------------------- oracles
# Independent reference implementations: plain-dict BFS plus explicit
# shortest-path enumeration.  No code shared with the library versions.

def _adj(graph):
    table = {v: [] for v in range(graph.n_nodes)}
    for u, v in graph.edges.tolist():
        table[u].append(v)
        table[v].append(u)
    return table


def _bfs_dist(adj, source, n):
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist


def _all_shortest_paths(adj, dist, s, t):
    if t not in dist:
        return []
    if s == t:
        return [[s]]
    paths = []
    for prev in adj[t]:
        if dist.get(prev, -1) == dist[t] - 1:
            for head in _all_shortest_paths(adj, dist, s, prev):
                paths.append(head + [t])
    return paths


def oracle_betweenness(graph):
    adj = _adj(graph)
    scores = np.zeros(graph.n_nodes)
    for s, t in itertools.combinations(range(graph.n_nodes), 2):
        dist = _bfs_dist(adj, s, graph.n_nodes)
        paths = _all_shortest_paths(adj, dist, s, t)
        if not paths:
            continue
        for path in paths:
            for v in path[1:-1]:
                scores[v] += 1.0 / len(paths)
    return scores


def oracle_closeness(graph):
    adj = _adj(graph)
    scores = np.zeros(graph.n_nodes)
    for v in range(graph.n_nodes):
        dist = _bfs_dist(adj, v, graph.n_nodes)
        total = sum(d for u, d in dist.items() if u != v)
        scores[v] = 1.0 / total if total else 0.0
    return scores


def oracle_eigenvector(graph):
    labels, count = np.zeros(graph.n_nodes, dtype=int), 0
    adj = _adj(graph)
    seen = set()
    scores = np.zeros(graph.n_nodes)
    for start in range(graph.n_nodes):
        if start in seen:
            continue
        comp = sorted(_bfs_dist(adj, start, graph.n_nodes))
        seen.update(comp)
        if len(comp) < 2:
            continue
        dense = np.zeros((len(comp), len(comp)))
        pos = {v: i for i, v in enumerate(comp)}
        for u in comp:
            for v in adj[u]:
                dense[pos[u], pos[v]] = 1.0
        values, vectors = np.linalg.eigh(dense)
        lead = np.abs(vectors[:, np.argmax(values)])
        scores[comp] = lead / lead.max()
    return scores


# ------------------------------------------------------------- degree

def test_degree_triangle():
    g = Graph.from_edges([(0, 1), (1, 2), (0, 2)])
    assert degree_centrality(g).tolist() == [2, 2, 2]


def test_degree_toy_values(toy):
    g, _ = toy
    deg = degree_centrality(g)
    by_label = {g.label_of(v): deg[v] for v in range(g.n_nodes)}
    assert by_label[4] == 7
    assert by_label[13] == 1


# ------------------------------------------------------------- betweenness

def test_betweenness_path():
    g = Graph.from_edges([(0, 1), (1, 2)])
    assert betweenness_centrality(g).tolist() == [0.0, 1.0, 0.0]


def test_betweenness_star():
    g = Graph.from_edges([(0, 1), (0, 2), (0, 3), (0, 4)])
    scores = betweenness_centrality(g)
    assert scores[0] == 6.0
    assert scores[1:].tolist() == [0.0] * 4


def test_betweenness_matches_bruteforce_oracle(rng):
    # exact agreement with explicit path enumeration on small random graphs
    for _ in range(25):
        g = random_graph(rng, int(rng.integers(4, 11)), p=0.35)
        np.testing.assert_allclose(betweenness_centrality(g),
                                   oracle_betweenness(g), atol=1e-9)


# ------------------------------------------------------------- closeness

def test_closeness_path_center():
    g = Graph.from_edges([(0, 1), (1, 2)])
    assert closeness_centrality(g)[1] == 0.5


def test_closeness_complete_graph():
    g = Graph.from_edges([(i, j) for i in range(4) for j in range(i + 1, 4)])
    np.testing.assert_allclose(closeness_centrality(g), [1 / 3] * 4)


def test_closeness_matches_bfs_oracle(rng):
    g = random_graph(rng, 12, p=0.25)
    np.testing.assert_allclose(closeness_centrality(g), oracle_closeness(g),
                               atol=1e-12)


def test_closeness_isolated_node_scores_zero():
    g = Graph.from_edges([(0, 1)], n_nodes=3)
    assert closeness_centrality(g)[2] == 0.0


# ------------------------------------------------------------- eigenvector

def test_eigenvector_complete_graph():
    g = Graph.from_edges([(i, j) for i in range(4) for j in range(i + 1, 4)])
    np.testing.assert_allclose(eigenvector_centrality(g), np.ones(4), atol=1e-9)


def test_eigenvector_star():
    g = Graph.from_edges([(0, 1), (0, 2), (0, 3), (0, 4)])
    scores = eigenvector_centrality(g)
    assert scores[0] == pytest.approx(1.0)
    np.testing.assert_allclose(scores[1:], 0.5, atol=1e-8)


def test_eigenvector_path3():
    g = Graph.from_edges([(0, 1), (1, 2)])
    scores = eigenvector_centrality(g)
    np.testing.assert_allclose(scores, [2 ** -0.5, 1.0, 2 ** -0.5], atol=1e-8)


def test_eigenvector_matches_dense_oracle(rng):
    for _ in range(20):
        g = random_graph(rng, int(rng.integers(3, 9)), p=0.4)
        np.testing.assert_allclose(eigenvector_centrality(g),
                                   oracle_eigenvector(g), atol=1e-6)


def test_eigenvector_bipartite_component_converges():
    # even cycles oscillate under naive iteration; must still converge
    g = Graph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])
    np.testing.assert_allclose(eigenvector_centrality(g), np.ones(4), atol=1e-8)


def test_eigenvector_singleton_component_zero():
    g = Graph.from_edges([(0, 1)], n_nodes=3)
    assert eigenvector_centrality(g)[2] == 0.0


def test_eigenvector_residual_bound(rng):
    # recompute ||Ax - lambda x||_inf from the returned vector, per component
    tol = 1e-10
    g = random_graph(rng, 14, p=0.2)
    scores = eigenvector_centrality(g, tol=tol)
    from modcen import connected_components
    labels, count = connected_components(g)
    dense = g.adjacency().toarray()
    for c in range(count):
        nodes = np.flatnonzero(labels == c)
        if len(nodes) < 2:
            continue
        sub = dense[np.ix_(nodes, nodes)]
        x = scores[nodes]
        lam = x @ sub @ x / (x @ x)
        assert np.abs(sub @ x - lam * x).max() < tol * np.abs(x).max()


def test_eigenvector_nonconvergence_raises():
    # non-regular graph: the uniform start vector is not the fixed point
    g = Graph.from_edges([(0, 1), (1, 2), (2, 3)])
    with pytest.raises(PowerIterationError) as err:
        eigenvector_centrality(g, max_iter=1)
    assert err.value.iterations == 1
    assert err.value.residual > 0


# ------------------------------------------------------------- generic

def test_scores_finite_nonnegative(rng):
    g = random_graph(rng, 10, p=0.3)
    for kind in CentralityKind:
        scores = centrality(kind, g)
        assert np.isfinite(scores).all()
        assert (scores >= 0).all()


def test_excluded_scope_nodes_score_zero(rng):
    g = random_graph(rng, 10, p=0.3)
    p = random_partition(rng, 10, 3)
    from modcen import global_network
    view = global_network(g, p)
    outside = ~view.node_mask
    if outside.any():
        for kind in CentralityKind:
            scores = centrality(kind, view)
            assert (scores[outside] == 0).all()


def test_closeness_betweenness_relabel_invariant(rng):
    g = random_graph(rng, 9, p=0.35)
    perm = rng.permutation(g.n_nodes)
    remapped = Graph.from_edges([(perm[u], perm[v]) for u, v in g.edges.tolist()],
                                n_nodes=g.n_nodes)
    for fn in (closeness_centrality, betweenness_centrality):
        orig = fn(g)
        back = fn(remapped)[perm]
        np.testing.assert_allclose(back, orig, atol=1e-12)


def test_view_copy_equivalence_all_measures(rng):
    # scores on a view component equal scores on the extracted graph
    g = random_graph(rng, 12, p=0.3)
    p = random_partition(rng, 12, 3)
    view = local_network(g, p)
    for c in range(view.n_components):
        nodes = np.flatnonzero(view.component_of == c)
        extracted = view.component_subgraph(c)
        for kind in CentralityKind:
            on_view = centrality(kind, view)[nodes]
            on_copy = centrality(kind, extracted)
            np.testing.assert_allclose(on_view, on_copy, atol=1e-8)


def test_centrality_dispatch_accepts_strings(rng):
    g = random_graph(rng, 6)
    np.testing.assert_array_equal(centrality("degree", g), degree_centrality(g))


def test_write_scores_csv(tmp_path):
    g = Graph.from_edges([(0, 1), (1, 2)])
    path = tmp_path / "scores.csv"
    with open(path, "w", newline="") as sink:
        write_scores_csv(g, degree_centrality(g), sink)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "node,score"
    assert lines[1].startswith("0,")
