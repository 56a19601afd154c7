"""Discrete-time SIR spreading and ranking evaluation.

The default contact process is synchronous and per-neighbor: each step,
every infected node tries to infect each currently susceptible neighbor
independently with probability ``alpha`` (new infections only transmit from
the next step on), then recovers with probability ``sigma``.  A
single-neighbor variant, where an infected node directs one attempt per step
at a uniformly chosen susceptible neighbor, is available through
``SirConfig.contact``.

A run's outcome is the number of recovered nodes beyond the initial seeds.
Runs are reproducible: run ``i`` under experiment seed ``s`` always draws
from the same substream, no matter how runs are scheduled or batched.
"""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._rng import STREAM_SIR, substream
from .centrality import CentralityKind
from .graph import Graph, Partition
from .modular import modular_centrality
from .ranking import Ranking, RankingStrategy, rank_nodes

__all__ = [
    "SirConfig",
    "SirOutcome",
    "SweepRow",
    "delta_r",
    "epidemic_threshold",
    "sir_evaluate",
    "sir_run",
    "sir_trajectory",
    "sweep",
    "write_sweep_csv",
]

CONTACT_MODELS = ("all_neighbors", "single_neighbor")


def epidemic_threshold(graph: Graph) -> float:
    """Degree-moment estimate of the epidemic threshold.

    Raises:
        ValueError: when the second moment does not exceed the first
            (threshold undefined), including edgeless or empty graphs.
    """
    if graph.n_nodes == 0:
        raise ValueError("threshold is undefined for an empty graph")
    k = graph.degrees().astype(np.float64)
    first = k.mean()
    second = (k * k).mean()
    if second <= first:
        raise ValueError("threshold is undefined: second degree moment "
                         "does not exceed the first")
    return float(first / (second - first))


@dataclass(frozen=True)
class SirConfig:
    """Parameters of one evaluation experiment."""

    alpha: float = 0.1
    sigma: float = 0.1
    f0: float = 0.02
    runs: int = 200
    seed: int = 0
    contact: str = "all_neighbors"

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")
        if not 0.0 < self.sigma <= 1.0:
            raise ValueError("sigma must be in (0, 1]")
        if self.runs < 1:
            raise ValueError("runs must be positive")
        if self.contact not in CONTACT_MODELS:
            raise ValueError(f"contact must be one of {CONTACT_MODELS}")


@dataclass(frozen=True)
class SirOutcome:
    """Mean and sample deviation of recovered-beyond-seeds over all runs."""

    r_av: float
    r_dev: float
    results: np.ndarray
    n_seeds: int


def _step_all_neighbors(adjacency, sus, inf, rec, alpha, sigma, rng):
    pressure = adjacency @ inf.astype(np.float64)
    candidates = np.flatnonzero(sus & (pressure > 0.0))
    p_infect = 1.0 - (1.0 - alpha) ** pressure[candidates]
    newly = candidates[rng.random(candidates.shape[0]) < p_infect]
    infected = np.flatnonzero(inf)
    recovering = infected[rng.random(infected.shape[0]) < sigma]
    inf[recovering] = False
    rec[recovering] = True
    inf[newly] = True
    sus[newly] = False


def _step_single_neighbor(indptr, indices, sus, inf, rec, alpha, sigma, rng):
    infected = np.flatnonzero(inf)
    starts = indptr[infected]
    counts = indptr[infected + 1] - starts
    total = int(counts.sum())
    if total:
        seg = np.repeat(np.arange(infected.shape[0]), counts)
        offsets = np.cumsum(counts) - counts
        flat = starts[seg] + (np.arange(total) - offsets[seg])
        nbrs = indices[flat]
        open_flags = sus[nbrs]
        open_counts = np.bincount(seg, weights=open_flags,
                                  minlength=infected.shape[0]).astype(np.int64)
        # One uniform per infected node picks among its susceptible
        # neighbors; a second driver decides whether the attempt lands.
        u = rng.random(infected.shape[0])
        attempt = rng.random(infected.shape[0]) < alpha
        eligible = (open_counts > 0) & attempt
        if eligible.any():
            pick = np.minimum((u * open_counts).astype(np.int64), open_counts - 1)
            base = np.cumsum(open_counts) - open_counts
            running = np.cumsum(open_flags)
            position = np.searchsorted(running, base[eligible] + pick[eligible] + 1,
                                       side="left")
            targets = np.unique(nbrs[position])
        else:
            targets = np.empty(0, dtype=np.int64)
    else:
        rng.random(infected.shape[0])
        rng.random(infected.shape[0])
        targets = np.empty(0, dtype=np.int64)
    recovering = infected[rng.random(infected.shape[0]) < sigma]
    inf[recovering] = False
    rec[recovering] = True
    inf[targets] = True
    sus[targets] = False


def _simulate(graph: Graph, seeds: np.ndarray, alpha: float, sigma: float,
              rng: np.random.Generator, contact: str,
              trajectory: list | None = None) -> int:
    n = graph.n_nodes
    sus = np.ones(n, dtype=bool)
    inf = np.zeros(n, dtype=bool)
    rec = np.zeros(n, dtype=bool)
    sus[seeds] = False
    inf[seeds] = True
    if trajectory is not None:
        trajectory.append((int(sus.sum()), int(inf.sum()), int(rec.sum())))
    if contact == "all_neighbors":
        adjacency = graph.adjacency()
        while inf.any():
            _step_all_neighbors(adjacency, sus, inf, rec, alpha, sigma, rng)
            if trajectory is not None:
                trajectory.append((int(sus.sum()), int(inf.sum()), int(rec.sum())))
    else:
        indptr, indices = graph.indptr, graph.indices
        while inf.any():
            _step_single_neighbor(indptr, indices, sus, inf, rec, alpha, sigma, rng)
            if trajectory is not None:
                trajectory.append((int(sus.sum()), int(inf.sum()), int(rec.sum())))
    return int(rec.sum()) - seeds.shape[0]


def _check_seeds(graph: Graph, seeds) -> np.ndarray:
    seeds = np.unique(np.asarray(seeds, dtype=np.int64))
    if seeds.shape[0] == 0:
        raise ValueError("at least one seed is required")
    if seeds.min() < 0 or seeds.max() >= graph.n_nodes:
        raise ValueError("seed id out of range")
    return seeds


def sir_run(graph: Graph, seeds: Sequence[int] | np.ndarray, alpha: float,
            sigma: float, rng: np.random.Generator, *,
            contact: str = "all_neighbors") -> int:
    """One simulation; returns recovered count minus the number of seeds."""
    if contact not in CONTACT_MODELS:
        raise ValueError(f"contact must be one of {CONTACT_MODELS}")
    if not 0.0 <= alpha <= 1.0 or not 0.0 < sigma <= 1.0:
        raise ValueError("alpha must be in [0, 1] and sigma in (0, 1]")
    return _simulate(graph, _check_seeds(graph, seeds), alpha, sigma, rng, contact)


def sir_trajectory(graph: Graph, seeds, alpha: float, sigma: float,
                   rng: np.random.Generator, *,
                   contact: str = "all_neighbors") -> np.ndarray:
    """Per-step (susceptible, infected, recovered) counts, seeds included."""
    steps: list = []
    _simulate(graph, _check_seeds(graph, seeds), alpha, sigma, rng, contact, steps)
    return np.asarray(steps, dtype=np.int64)


def _run_block(graph: Graph, seeds: np.ndarray, config: SirConfig,
               lo: int, hi: int) -> np.ndarray:
    out = np.empty(hi - lo, dtype=np.int64)
    for i in range(lo, hi):
        rng = substream(config.seed, STREAM_SIR, i)
        out[i - lo] = _simulate(graph, seeds, config.alpha, config.sigma,
                                rng, config.contact)
    return out


def _outcome(results: np.ndarray, n_seeds: int) -> SirOutcome:
    dev = float(results.std(ddof=1)) if results.shape[0] > 1 else 0.0
    return SirOutcome(float(results.mean()), dev, results, n_seeds)


def seeds_from_ranking(graph: Graph, ranking: Ranking, f0: float) -> np.ndarray:
    """Top ceil(n*f0) ranked nodes.

    Raises:
        ValueError: when the fraction selects less than one node, or exceeds 1.
    """
    if f0 > 1.0:
        raise ValueError("f0 cannot exceed 1")
    if graph.n_nodes * f0 < 1.0:
        raise ValueError(f"f0={f0} selects no seeds on {graph.n_nodes} nodes")
    return np.asarray(ranking.top(math.ceil(graph.n_nodes * f0)))


def sir_evaluate(graph: Graph, ranking: Ranking | Sequence[int],
                 config: SirConfig, *, workers: int | None = None) -> SirOutcome:
    """Monte Carlo evaluation of a seed ranking.

    Seeds are the top ceil(n*f0) nodes when a ranking is given, or the
    explicit node ids otherwise.  Run ``i`` uses the (config.seed, i)
    substream, so results do not depend on ``workers``.
    """
    if isinstance(ranking, Ranking):
        seeds = seeds_from_ranking(graph, ranking, config.f0)
    else:
        seeds = np.asarray(ranking, dtype=np.int64)
    seeds = _check_seeds(graph, seeds)
    if workers is None or workers <= 1 or config.runs < 2:
        return _outcome(_run_block(graph, seeds, config, 0, config.runs), seeds.shape[0])
    bounds = np.linspace(0, config.runs, min(workers, config.runs) + 1, dtype=int)
    results = np.empty(config.runs, dtype=np.int64)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [(lo, pool.submit(_run_block, graph, seeds, config, int(lo), int(hi)))
                   for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
        for lo, fut in futures:
            block = fut.result()
            results[lo:lo + block.shape[0]] = block
    return _outcome(results, seeds.shape[0])


def delta_r(candidate: SirOutcome, reference: SirOutcome) -> float:
    """Relative outbreak-size gain of ``candidate`` over ``reference``.

    Raises:
        ValueError: when the reference outbreak is empty.
    """
    if reference.r_av == 0.0:
        raise ValueError("reference outbreak size is zero; gain undefined")
    return (candidate.r_av - reference.r_av) / reference.r_av


@dataclass(frozen=True)
class SweepRow:
    strategy: str
    kind: str
    f0: float
    r_av: float
    r_dev: float
    delta_r: float


def sweep(graph: Graph, partition: Partition,
          kinds: Iterable[CentralityKind | str],
          strategies: Iterable[RankingStrategy | str],
          f0_grid: Sequence[float], config: SirConfig, *,
          workers: int | None = None) -> list[SweepRow]:
    """Evaluate strategy/measure combinations over a seed-fraction grid.

    The plain whole-graph ranking is always evaluated as the reference for
    ``delta_r``, whether or not it was requested.  Identical seed sets are
    simulated once and shared.
    """
    kinds = [CentralityKind(k) for k in kinds]
    strategies = [RankingStrategy(s) for s in strategies]
    if RankingStrategy.STANDARD not in strategies:
        strategies = [RankingStrategy.STANDARD] + strategies

    cache: dict[tuple, SirOutcome] = {}

    def evaluate(seeds: np.ndarray) -> SirOutcome:
        key = tuple(np.sort(seeds).tolist())
        if key not in cache:
            cache[key] = sir_evaluate(graph, seeds, config, workers=workers)
        return cache[key]

    rows: list[SweepRow] = []
    for kind in kinds:
        modular = modular_centrality(graph, partition, kind)
        rankings = {
            strategy: rank_nodes(graph, partition, kind, strategy, modular=modular)
            for strategy in strategies
        }
        for f0 in f0_grid:
            reference = evaluate(seeds_from_ranking(
                graph, rankings[RankingStrategy.STANDARD], f0))
            for strategy in strategies:
                if strategy is RankingStrategy.STANDARD:
                    outcome, gain = reference, 0.0
                else:
                    outcome = evaluate(seeds_from_ranking(graph, rankings[strategy], f0))
                    gain = delta_r(outcome, reference)
                rows.append(SweepRow(strategy.value, kind.value, float(f0),
                                     outcome.r_av, outcome.r_dev, gain))
    return rows


def write_sweep_csv(rows: Iterable[SweepRow], sink) -> None:
    """Emit ``strategy,kind,f0,r_av,r_dev,delta_r`` rows."""
    close = False
    if isinstance(sink, (str, os.PathLike)):
        sink = open(sink, "w", newline="", encoding="utf-8")
        close = True
    try:
        writer = csv.writer(sink)
        writer.writerow(["strategy", "kind", "f0", "r_av", "r_dev", "delta_r"])
        for row in rows:
            writer.writerow([row.strategy, row.kind, f"{row.f0:g}",
                             f"{row.r_av:.6g}", f"{row.r_dev:.6g}",
                             f"{row.delta_r:.6g}"])
    finally:
        if close:
            sink.close()
