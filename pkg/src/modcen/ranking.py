"""Turn score pairs into spreader rankings.

Six strategies: the plain whole-graph measure, either half of the pair on
its own, and three combinations (Euclidean magnitude, global-to-local ratio,
and a mixing-weighted blend whose weight is each community's own
cross-community degree fraction).  Ordering is always by descending score
with ties going to the smaller node id; ratio scores of infinity outrank
everything and are ordered among themselves by the larger global part.
"""
from __future__ import annotations

import csv
import enum
import os
from dataclasses import dataclass

import numpy as np

from .centrality import CentralityKind, centrality
from .community import mixing_per_community
from .graph import Graph, Partition
from .modular import ModularScore, modular_centrality

__all__ = [
    "Ranking",
    "RankingStrategy",
    "modulus_score",
    "rank_nodes",
    "strategy_scores",
    "tangent_score",
    "weighted_score",
    "write_ranking_csv",
]


class RankingStrategy(str, enum.Enum):
    STANDARD = "standard"
    LOCAL_ONLY = "local"
    GLOBAL_ONLY = "global"
    MODULUS = "modulus"
    TANGENT = "tangent"
    WEIGHTED = "weighted"


def modulus_score(beta_local: np.ndarray, beta_global: np.ndarray) -> np.ndarray:
    """Euclidean magnitude of the score pair."""
    return np.hypot(beta_local, beta_global)


def tangent_score(beta_local: np.ndarray, beta_global: np.ndarray) -> np.ndarray:
    """Global-to-local ratio; (0, positive) maps to +inf, (0, 0) to 0."""
    out = np.zeros_like(beta_global, dtype=np.float64)
    positive = beta_local > 0
    np.divide(beta_global, beta_local, out=out, where=positive)
    out[(~positive) & (beta_global > 0)] = np.inf
    return out


def weighted_score(beta_local: np.ndarray, beta_global: np.ndarray,
                   community_mixing: np.ndarray, community: np.ndarray) -> np.ndarray:
    """Blend the pair with each community's cross-degree fraction as weight."""
    mu = community_mixing[community]
    return (1.0 - mu) * beta_local + mu * beta_global


@dataclass(frozen=True)
class Ranking:
    """Nodes in rank order (best first) with their scores."""

    nodes: np.ndarray
    scores: np.ndarray
    strategy: RankingStrategy
    kind: CentralityKind

    def top(self, k: int) -> np.ndarray:
        return self.nodes[:k]

    def __len__(self) -> int:
        return self.nodes.shape[0]


def strategy_scores(modular: ModularScore, strategy: RankingStrategy | str, *,
                    graph: Graph | None = None, partition: Partition | None = None,
                    **options) -> np.ndarray:
    """Per-node scalar scores for any strategy except ``standard``.

    ``weighted`` needs ``graph`` and ``partition`` for the community mixing
    fractions; the others work from the score pair alone.
    """
    strategy = RankingStrategy(strategy)
    if strategy is RankingStrategy.STANDARD:
        if graph is None:
            raise ValueError("standard scores need the graph")
        return centrality(modular.kind, graph, **options)
    if strategy is RankingStrategy.LOCAL_ONLY:
        return modular.beta_local
    if strategy is RankingStrategy.GLOBAL_ONLY:
        return modular.beta_global
    if strategy is RankingStrategy.MODULUS:
        return modulus_score(modular.beta_local, modular.beta_global)
    if strategy is RankingStrategy.TANGENT:
        return tangent_score(modular.beta_local, modular.beta_global)
    if graph is None or partition is None:
        raise ValueError("weighted scores need the graph and partition")
    return weighted_score(modular.beta_local, modular.beta_global,
                          mixing_per_community(graph, partition), modular.community)


def _order(scores: np.ndarray, beta_global: np.ndarray | None) -> np.ndarray:
    n = scores.shape[0]
    ids = np.arange(n)
    if beta_global is None:
        tie = np.zeros(n)
    else:
        # Only infinite ratio scores use the global part as a tie key
        # (larger first); finite ties fall through to the node id.
        tie = np.where(np.isinf(scores), -beta_global, 0.0)
    return np.lexsort((ids, tie, -scores))


def rank_nodes(graph: Graph, partition: Partition | None,
               kind: CentralityKind | str, strategy: RankingStrategy | str,
               *, modular: ModularScore | None = None, **options) -> Ranking:
    """Rank all nodes under one measure and strategy.

    ``partition`` may be None for the ``standard`` strategy only.  A
    precomputed :class:`ModularScore` can be passed to avoid recomputation.
    """
    kind = CentralityKind(kind)
    strategy = RankingStrategy(strategy)
    if strategy is RankingStrategy.STANDARD:
        scores = centrality(kind, graph, **options)
        order = _order(scores, None)
    else:
        if partition is None:
            raise ValueError(f"strategy {strategy.value!r} needs a partition")
        if modular is None:
            modular = modular_centrality(graph, partition, kind, **options)
        scores = strategy_scores(modular, strategy, graph=graph, partition=partition)
        order = _order(scores, modular.beta_global if strategy is RankingStrategy.TANGENT else None)
    return Ranking(nodes=order, scores=scores[order], strategy=strategy, kind=kind)


def write_ranking_csv(graph: Graph, ranking: Ranking, sink) -> None:
    """Emit ``rank,node,score`` rows, best node first; +inf prints as ``inf``."""
    close = False
    if isinstance(sink, (str, os.PathLike)):
        sink = open(sink, "w", newline="", encoding="utf-8")
        close = True
    try:
        writer = csv.writer(sink)
        writer.writerow(["rank", "node", "score"])
        for position, (v, s) in enumerate(zip(ranking.nodes, ranking.scores), start=1):
            writer.writerow([position, graph.labels[v], f"{s:.12g}"])
    finally:
        if close:
            sink.close()
