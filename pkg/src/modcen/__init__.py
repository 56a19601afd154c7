"""Community-aware centrality and spreader evaluation for modular networks."""
from __future__ import annotations

__version__ = "0.1.0"

from .graph import (
    EdgeListFormatError,
    Graph,
    LoadStats,
    Partition,
    SubgraphView,
    connected_components,
    global_network,
    largest_connected_component,
    load_edge_list,
    local_network,
    write_edge_list,
)
from .centrality import (
    CentralityKind,
    PowerIterationError,
    betweenness_centrality,
    centrality,
    closeness_centrality,
    degree_centrality,
    eigenvector_centrality,
    write_scores_csv,
)
from .community import (
    CommunityStats,
    Louvain,
    community_stats,
    global_mixing,
    louvain,
    mixing_per_community,
    modularity,
    read_partition,
    write_partition,
)
from .modular import (
    ModularCentrality,
    ModularScore,
    modular_centrality,
    write_modular_csv,
)
from .ranking import (
    Ranking,
    RankingStrategy,
    modulus_score,
    rank_nodes,
    strategy_scores,
    tangent_score,
    weighted_score,
    write_ranking_csv,
)
from .epidemic import (
    SirConfig,
    SirOutcome,
    SweepRow,
    delta_r,
    epidemic_threshold,
    seeds_from_ranking,
    sir_evaluate,
    sir_run,
    sir_trajectory,
    sweep,
    write_sweep_csv,
)
from .generator import (
    GenerationError,
    GenerationReport,
    GeneratorConfig,
    generate,
    make_modular_network,
    validate,
)
from .datasets import load_toy_network

__all__ = [
    "CentralityKind",
    "CommunityStats",
    "EdgeListFormatError",
    "GenerationError",
    "GenerationReport",
    "GeneratorConfig",
    "Graph",
    "LoadStats",
    "Louvain",
    "ModularCentrality",
    "ModularScore",
    "Partition",
    "PowerIterationError",
    "Ranking",
    "RankingStrategy",
    "SirConfig",
    "SirOutcome",
    "SubgraphView",
    "SweepRow",
    "betweenness_centrality",
    "centrality",
    "closeness_centrality",
    "community_stats",
    "connected_components",
    "degree_centrality",
    "delta_r",
    "eigenvector_centrality",
    "epidemic_threshold",
    "generate",
    "global_mixing",
    "global_network",
    "largest_connected_component",
    "load_edge_list",
    "load_toy_network",
    "local_network",
    "louvain",
    "make_modular_network",
    "mixing_per_community",
    "modular_centrality",
    "modularity",
    "modulus_score",
    "rank_nodes",
    "read_partition",
    "seeds_from_ranking",
    "sir_evaluate",
    "sir_run",
    "sir_trajectory",
    "strategy_scores",
    "sweep",
    "tangent_score",
    "validate",
    "weighted_score",
    "write_edge_list",
    "write_modular_csv",
    "write_partition",
    "write_ranking_csv",
    "write_scores_csv",
    "write_sweep_csv",
    "__version__",
]
