"""Synthetic modular benchmark graphs.

The procedure approximates the usual community benchmark recipe: truncated
power-law degrees rescaled to the target mean, power-law community sizes,
capacity-aware node assignment, a per-node split of degree stubs into
internal and external pools (stochastically rounded so the population-level
mixing is unbiased), configuration-model pairing inside each community and
across communities, and a bounded double-edge-swap repair pass.  Stubs that
cannot be repaired into a simple graph are dropped and counted; the output
graph is always simple.

The same seed always yields byte-identical edge lists.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import STREAM_GENERATOR, substream
from .community import global_mixing
from .graph import Graph, Partition

__all__ = [
    "GenerationError",
    "GenerationReport",
    "GeneratorConfig",
    "generate",
    "make_modular_network",
    "validate",
]


class GenerationError(RuntimeError):
    """The sampled configuration cannot be realized."""


@dataclass(frozen=True)
class GeneratorConfig:
    """Target properties of a generated network."""

    n_nodes: int
    mixing: float
    avg_degree: float = 7.0
    max_degree: int = 80
    degree_exponent: float = 2.8
    community_exponent: float = 2.0
    min_community: int = 15
    max_community: int = 200
    seed: int = 0
    max_rewire_rounds: int = 20

    def __post_init__(self):
        if self.n_nodes < 2:
            raise ValueError("n_nodes must be at least 2")
        if not 0.0 <= self.mixing <= 1.0:
            raise ValueError("mixing must be in [0, 1]")
        if self.avg_degree < 1.0 or self.avg_degree > self.max_degree:
            raise ValueError("avg_degree must be in [1, max_degree]")
        if self.max_degree >= self.n_nodes:
            raise ValueError("max_degree must be below n_nodes")
        if not 1 <= self.min_community <= self.max_community:
            raise ValueError("community size bounds out of order")
        if self.max_community > self.n_nodes:
            raise ValueError("max_community cannot exceed n_nodes")
        if self.degree_exponent <= 1.0 or self.community_exponent <= 1.0:
            raise ValueError("power-law exponents must exceed 1")
        if self.max_rewire_rounds < 0:
            raise ValueError("max_rewire_rounds must be non-negative")


@dataclass(frozen=True)
class GenerationReport:
    """What the sampler had to adjust to realize the configuration."""

    parity_conversions: int
    parity_drops: int
    rewired_edges: int
    dropped_stubs: int
    degree_scale: float


_DEGREE_TOLERANCE = 0.05


def _power_law(rng: np.random.Generator, size: int, exponent: float,
               low: float, high: float) -> np.ndarray:
    """Inverse-CDF samples of a continuous truncated power law."""
    u = rng.random(size)
    g = 1.0 - exponent
    return (low ** g + u * (high ** g - low ** g)) ** (1.0 / g)


def _sample_degrees(rng: np.random.Generator, config: GeneratorConfig
                    ) -> tuple[np.ndarray, float]:
    raw = _power_law(rng, config.n_nodes, config.degree_exponent,
                     1.0, float(config.max_degree))
    scale = config.avg_degree / raw.mean()
    # Aim tighter than the acceptance band so stub drops during repair
    # cannot push the realized mean outside it.
    target_tol = min(0.02, _DEGREE_TOLERANCE)
    best: tuple[float, np.ndarray, float] | None = None
    for _ in range(200):
        degrees = np.clip(np.rint(raw * scale), 1, config.max_degree).astype(np.int64)
        mean = degrees.mean()
        error = abs(mean - config.avg_degree)
        if best is None or error < best[0]:
            best = (error, degrees, scale)
        if error <= target_tol * config.avg_degree:
            return degrees, scale
        scale *= config.avg_degree / mean
    if best is not None and best[0] <= _DEGREE_TOLERANCE * config.avg_degree:
        return best[1], best[2]
    raise GenerationError("could not rescale degrees to the target mean")


def _sample_sizes(rng: np.random.Generator, config: GeneratorConfig) -> np.ndarray:
    sizes: list[int] = []
    total = 0
    while total < config.n_nodes:
        s = int(_power_law(rng, 1, config.community_exponent,
                           float(config.min_community),
                           float(config.max_community) + 1.0)[0])
        s = min(s, config.max_community)
        sizes.append(s)
        total += s
    sizes[-1] -= total - config.n_nodes
    if sizes[-1] < config.min_community - 1:
        # The trimmed remainder is too small to stand alone: fold it into
        # the other communities, largest first, one slot at a time.
        deficit = sizes.pop()
        if not sizes:
            raise GenerationError("n_nodes is below the minimum community size")
        order = np.argsort([-s for s in sizes], kind="stable")
        i = 0
        guard = 0
        while deficit > 0:
            c = order[i % len(order)]
            if sizes[c] < config.max_community:
                sizes[c] += 1
                deficit -= 1
                guard = 0
            else:
                guard += 1
                if guard > len(order):
                    raise GenerationError("cannot redistribute trimmed community")
            i += 1
    return np.asarray(sizes, dtype=np.int64)


def _assign_communities(rng: np.random.Generator, degrees: np.ndarray,
                        internal_target: np.ndarray, sizes: np.ndarray) -> np.ndarray:
    """Place nodes so each fits (internal degree < community size)."""
    n = degrees.shape[0]
    slots = sizes.copy()
    community = np.full(n, -1, dtype=np.int64)
    order = np.lexsort((np.arange(n), -internal_target))
    for v in order:
        feasible = np.flatnonzero((slots > 0) & (sizes > internal_target[v]))
        if feasible.shape[0] == 0:
            raise GenerationError(
                f"no community can host a node needing {internal_target[v]} "
                "internal neighbors")
        weights = slots[feasible] / slots[feasible].sum()
        community[v] = int(rng.choice(feasible, p=weights))
        slots[community[v]] -= 1
    return community


def _fix_parity(internal: np.ndarray, degrees: np.ndarray, community: np.ndarray,
                sizes: np.ndarray) -> tuple[int, int]:
    """Make internal sums even per community and the external pool even overall.

    Prefers flipping one stub between the pools (degree preserved); only the
    final external-pool fix may drop a stub.  Returns (conversions, drops).
    """
    conversions = 0
    drops = 0
    pool_is_internal_only = int((degrees - internal).sum()) == 0
    for c in range(sizes.shape[0]):
        members = np.flatnonzero(community == c)
        if int(internal[members].sum()) % 2 == 0:
            continue
        external = degrees[members] - internal[members]
        can_gain = (external > 0) & (internal[members] < sizes[c] - 1)
        if can_gain.any():
            pick = members[can_gain][np.argmax(external[can_gain])]
            internal[pick] += 1
            conversions += 1
        elif pool_is_internal_only:
            # a mixing-zero configuration must stay free of cross links, so
            # shed the odd stub instead of exporting it
            with_internal = members[internal[members] > 0]
            pick = with_internal[np.argmax(internal[with_internal])]
            internal[pick] -= 1
            degrees[pick] -= 1
            drops += 1
        else:
            with_internal = members[internal[members] > 0]
            internal[with_internal[0]] -= 1
            conversions += 1
    if int((degrees - internal).sum()) % 2 == 1:
        # Drop one external stub; choose the largest-degree holder so the
        # relative distortion is smallest.
        holders = np.flatnonzero(degrees - internal > 0)
        pick = holders[np.argmax(degrees[holders])]
        degrees[pick] -= 1
        drops += 1
    return conversions, drops


def _pair_stubs(rng: np.random.Generator, owners: np.ndarray,
                counts: np.ndarray) -> np.ndarray:
    stubs = np.repeat(owners, counts)
    rng.shuffle(stubs)
    return stubs.reshape(-1, 2)


def _repair(rng: np.random.Generator, community: np.ndarray,
            intra_pairs: np.ndarray, inter_pairs: np.ndarray,
            max_rounds: int) -> tuple[set, int, int]:
    """Admit pairs into a simple graph, double-edge-swapping conflicts away.

    Swaps stay inside their pool (intra swaps use a partner from the same
    community) so degree splits are preserved.  Returns the accepted edge
    set, the number of rewired edges, and the number of dropped stubs.
    """
    edge_set: set[tuple[int, int]] = set()
    good_intra: dict[int, list[tuple[int, int]]] = {}
    good_inter: list[tuple[int, int]] = []
    bad: list[tuple[int, int, int]] = []  # (u, v, community or -1 for inter)

    def admit(u: int, v: int, pool: int) -> bool:
        if u == v:
            return False
        key = (u, v) if u < v else (v, u)
        if key in edge_set:
            return False
        if pool < 0 and community[u] == community[v]:
            return False
        edge_set.add(key)
        if pool < 0:
            good_inter.append(key)
        else:
            good_intra.setdefault(pool, []).append(key)
        return True

    for u, v in intra_pairs:
        if not admit(int(u), int(v), int(community[u])):
            bad.append((int(u), int(v), int(community[u])))
    for u, v in inter_pairs:
        if not admit(int(u), int(v), -1):
            bad.append((int(u), int(v), -1))

    rewired = 0
    for _ in range(max_rounds):
        if not bad:
            break
        still_bad: list[tuple[int, int, int]] = []
        for u, v, pool in bad:
            partners = good_inter if pool < 0 else good_intra.get(pool, [])
            placed = False
            for _ in range(12):
                if not partners:
                    break
                j = int(rng.integers(len(partners)))
                x, y = partners[j]
                if rng.random() < 0.5:
                    x, y = y, x
                # Proposed replacement edges (u, x) and (v, y).
                a = (u, x) if u < x else (x, u)
                b = (v, y) if v < y else (y, v)
                if u == x or v == y or a in edge_set or b in edge_set or a == b:
                    continue
                if pool < 0 and (community[u] == community[x]
                                 or community[v] == community[y]):
                    continue
                old = (x, y) if x < y else (y, x)
                edge_set.remove(old)
                partners[j] = partners[-1]
                partners.pop()
                admit(*a, pool)
                admit(*b, pool)
                rewired += 1
                placed = True
                break
            if not placed:
                still_bad.append((u, v, pool))
        bad = still_bad

    dropped_stubs = 2 * len(bad)
    return edge_set, rewired, dropped_stubs


def generate(config: GeneratorConfig, *, return_report: bool = False):
    """Sample a graph and its planted partition.

    Returns ``(graph, partition)``, plus a :class:`GenerationReport` when
    ``return_report`` is set.

    Raises:
        GenerationError: if the configuration cannot be realized (degree
            rescaling fails, a hub fits in no community, or community sizes
            cannot be balanced).
    """
    degrees, scale = _sample_degrees(substream(config.seed, STREAM_GENERATOR, 0), config)
    sizes = _sample_sizes(substream(config.seed, STREAM_GENERATOR, 1), config)

    rng_assign = substream(config.seed, STREAM_GENERATOR, 2)
    exact = (1.0 - config.mixing) * degrees
    internal = np.floor(exact).astype(np.int64)
    internal += (rng_assign.random(config.n_nodes) < (exact - internal)).astype(np.int64)
    internal = np.minimum(internal, degrees)
    community = _assign_communities(rng_assign, degrees, internal, sizes)

    degrees = degrees.copy()
    conversions, parity_drops = _fix_parity(internal, degrees, community, sizes)
    external = degrees - internal

    rng_pair = substream(config.seed, STREAM_GENERATOR, 3)
    intra_blocks = []
    for c in range(sizes.shape[0]):
        members = np.flatnonzero(community == c)
        intra_blocks.append(_pair_stubs(rng_pair, members, internal[members]))
    intra_pairs = np.concatenate(intra_blocks) if intra_blocks else np.empty((0, 2), np.int64)
    inter_pairs = _pair_stubs(rng_pair, np.arange(config.n_nodes), external)

    edge_set, rewired, dropped = _repair(
        substream(config.seed, STREAM_GENERATOR, 4), community,
        intra_pairs, inter_pairs, config.max_rewire_rounds)

    edges = np.asarray(sorted(edge_set), dtype=np.int64).reshape(-1, 2)
    graph = Graph(edges, config.n_nodes)
    partition = Partition.from_labels(community)
    if return_report:
        return graph, partition, GenerationReport(
            parity_conversions=conversions,
            parity_drops=parity_drops,
            rewired_edges=rewired,
            dropped_stubs=dropped + parity_drops,
            degree_scale=float(scale))
    return graph, partition


def make_modular_network(n_nodes: int, mixing: float, seed: int = 0,
                         **overrides) -> tuple[Graph, Partition]:
    """Convenience wrapper building the config in one call."""
    return generate(GeneratorConfig(n_nodes=n_nodes, mixing=mixing, seed=seed,
                                    **overrides))


def _degree_exponent_mle(degrees: np.ndarray) -> float:
    """Continuous-approximation maximum-likelihood fit above the smallest degree."""
    k = degrees[degrees > 0].astype(np.float64)
    k_min = k.min()
    return float(1.0 + k.shape[0] / np.log(k / (k_min - 0.5)).sum())


def validate(graph: Graph, partition: Partition, config: GeneratorConfig) -> dict:
    """Check a generated network against its configuration.

    Returns a JSON-ready report; the ``ok`` flag aggregates all checks.
    """
    degrees = graph.degrees()
    sizes = partition.sizes()
    mean_degree = float(degrees.mean()) if graph.n_nodes else 0.0
    mixing = global_mixing(graph, partition) if graph.n_edges else 0.0
    duplicates = int(graph.edges.shape[0] - np.unique(graph.edges, axis=0).shape[0])
    checks = {
        "mean_degree_ok": abs(mean_degree - config.avg_degree)
        <= _DEGREE_TOLERANCE * config.avg_degree,
        "max_degree_ok": int(degrees.max(initial=0)) <= config.max_degree,
        "mixing_ok": abs(mixing - config.mixing) <= 0.05,
        "community_count_ok": partition.n_communities >= 1,
        "no_empty_community": bool((sizes > 0).all()),
        "min_size_ok": sizes.size > 0 and int(sizes.min()) >= config.min_community - 1,
        "max_size_ok": int(sizes.max(initial=0)) <= config.max_community,
        "simple_graph": bool((graph.edges[:, 0] != graph.edges[:, 1]).all())
        and duplicates == 0,
    }
    report = {
        "n_nodes": graph.n_nodes,
        "n_edges": graph.n_edges,
        "n_communities": partition.n_communities,
        "mean_degree": mean_degree,
        "mean_degree_target": config.avg_degree,
        "max_degree": int(degrees.max(initial=0)),
        "degree_exponent_mle": _degree_exponent_mle(degrees) if graph.n_edges else None,
        "mixing": mixing,
        "mixing_target": config.mixing,
        "community_size_min": int(sizes.min()) if sizes.size else 0,
        "community_size_max": int(sizes.max(initial=0)),
        "checks": checks,
        "ok": all(checks.values()),
    }
    return report
