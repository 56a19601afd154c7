"""Command-line front end.

Four subcommands cover the full pipeline: ``generate`` writes a synthetic
modular network, ``centrality`` ranks nodes, ``evaluate`` runs the SIR
seed-set comparison, and ``threshold`` prints the epidemic threshold.

Every command accepts a single ``--seed`` and derives all internal
randomness from it, writes its primary outputs deterministically (a rerun
with identical flags is byte-identical), and drops a ``manifest.json``
recording the exact invocation next to the outputs.

Exit codes: 0 on success, 1 on domain errors (bad data, infeasible
parameters), 2 on usage errors (argparse's convention).
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
from datetime import datetime, timezone

from . import __version__
from .community import louvain, read_partition, write_partition
from .epidemic import (
    CONTACT_MODELS,
    SirConfig,
    epidemic_threshold,
    sweep,
    write_sweep_csv,
)
from .generator import GenerationError, GeneratorConfig, generate, validate
from .graph import EdgeListFormatError, Graph, Partition, load_edge_list, write_edge_list
from .ranking import RankingStrategy, rank_nodes, write_ranking_csv

_KIND_CHOICES = ("degree", "betweenness", "closeness", "eigenvector")
_STRATEGY_CHOICES = tuple(s.value for s in RankingStrategy)


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def _write_manifest(path: str, command: str, parameters: dict,
                    inputs: dict[str, str], outputs: list[str],
                    extra: dict | None = None) -> None:
    manifest = {
        "command": command,
        "version": __version__,
        "parameters": parameters,
        "inputs": {name: _sha256(p) for name, p in inputs.items()},
        "outputs": outputs,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    if extra:
        manifest.update(extra)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _load_graph(path: str, labels: str) -> Graph:
    with open(path, "r", encoding="utf-8") as handle:
        return load_edge_list(handle, labels=labels)


def _resolve_partition(graph: Graph, args) -> tuple[Partition | None, dict]:
    """Partition from file, from detection, or absent."""
    if getattr(args, "partition", None):
        with open(args.partition, "r", encoding="utf-8") as handle:
            return read_partition(handle, graph), {}
    if getattr(args, "detect", False):
        part = louvain(graph, seed=args.seed)
        return part, {"detected_communities": part.n_communities}
    return None, {}


def cmd_generate(args) -> int:
    overrides = {
        key: getattr(args, key)
        for key in ("avg_degree", "max_degree", "degree_exponent",
                    "community_exponent", "min_community", "max_community")
        if getattr(args, key) is not None
    }
    config = GeneratorConfig(n_nodes=args.n, mixing=args.mu, seed=args.seed,
                             **overrides)
    graph, partition, report = generate(config, return_report=True)
    os.makedirs(args.output, exist_ok=True)
    edges_path = os.path.join(args.output, "edges.txt")
    partition_path = os.path.join(args.output, "partition.txt")
    report_path = os.path.join(args.output, "report.json")
    write_edge_list(graph, edges_path)
    with open(partition_path, "w", encoding="utf-8") as handle:
        write_partition(graph, partition, handle)
    summary = validate(graph, partition, config)
    summary["generation"] = dataclasses.asdict(report)
    with open(report_path, "w", encoding="utf-8") as handle:
        json.dump(summary, handle, indent=2, sort_keys=True)
        handle.write("\n")
    _write_manifest(
        os.path.join(args.output, "manifest.json"), "generate",
        {"n": args.n, "mu": args.mu, "seed": args.seed, **overrides},
        inputs={},
        outputs=["edges.txt", "partition.txt", "report.json"],
    )
    print(f"wrote {edges_path} ({graph.n_nodes} nodes, {graph.n_edges} edges)")
    return 0


def cmd_centrality(args) -> int:
    graph = _load_graph(args.graph, args.labels)
    partition, extra = _resolve_partition(graph, args)
    strategy = RankingStrategy(args.strategy)
    if partition is None and strategy is not RankingStrategy.STANDARD:
        raise ValueError(
            f"strategy {strategy.value!r} needs a partition; "
            "pass --partition FILE or --detect")
    ranking = rank_nodes(graph, partition, args.kind, strategy)
    with open(args.output, "w", encoding="utf-8", newline="") as handle:
        write_ranking_csv(graph, ranking, handle)
    inputs = {"graph": args.graph}
    if getattr(args, "partition", None):
        inputs["partition"] = args.partition
    _write_manifest(
        args.output + ".manifest.json", "centrality",
        {"graph": args.graph, "partition": getattr(args, "partition", None),
         "detect": args.detect, "kind": args.kind, "strategy": args.strategy,
         "labels": args.labels, "seed": args.seed},
        inputs=inputs, outputs=[os.path.basename(args.output)], extra=extra)
    print(f"wrote {args.output} ({len(ranking)} nodes)")
    return 0


def cmd_evaluate(args) -> int:
    graph = _load_graph(args.graph, args.labels)
    partition, extra = _resolve_partition(graph, args)
    if partition is None:
        raise ValueError("evaluate needs --partition FILE or --detect")
    threshold = None
    try:
        threshold = epidemic_threshold(graph)
    except ValueError:
        pass
    if threshold is not None and args.alpha <= threshold:
        print(f"warning: alpha={args.alpha:g} does not exceed the epidemic "
              f"threshold {threshold:.4g}; outbreaks may die out",
              file=sys.stderr)
    config = SirConfig(alpha=args.alpha, sigma=args.sigma, runs=args.runs,
                       seed=args.seed, contact=args.contact_model)
    rows = sweep(graph, partition, kinds=args.kinds, strategies=args.strategies,
                 f0_grid=args.f0_grid, config=config, workers=args.workers)
    with open(args.output, "w", encoding="utf-8", newline="") as handle:
        write_sweep_csv(rows, handle)
    inputs = {"graph": args.graph}
    if getattr(args, "partition", None):
        inputs["partition"] = args.partition
    _write_manifest(
        args.output + ".manifest.json", "evaluate",
        {"graph": args.graph, "partition": getattr(args, "partition", None),
         "detect": args.detect, "kinds": list(args.kinds),
         "strategies": list(args.strategies),
         "f0_grid": list(args.f0_grid), "alpha": args.alpha,
         "sigma": args.sigma, "runs": args.runs, "seed": args.seed,
         "contact_model": args.contact_model, "labels": args.labels,
         "workers": args.workers},
        inputs=inputs, outputs=[os.path.basename(args.output)], extra=extra)
    print(f"wrote {args.output} ({len(rows)} rows)")
    return 0


def cmd_threshold(args) -> int:
    graph = _load_graph(args.graph, args.labels)
    print(f"{epidemic_threshold(graph):.4g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modcen",
        description="Community-aware centrality and epidemic seed-set evaluation.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    gen = sub.add_parser("generate", help="write a synthetic modular network")
    gen.add_argument("--n", type=int, required=True, help="number of nodes")
    gen.add_argument("--mu", type=float, required=True,
                     help="target mixing parameter in (0,1)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--output", required=True, metavar="DIR",
                     help="output directory (created if missing)")
    gen.add_argument("--avg-degree", type=float, dest="avg_degree")
    gen.add_argument("--max-degree", type=int, dest="max_degree")
    gen.add_argument("--degree-exponent", type=float, dest="degree_exponent")
    gen.add_argument("--community-exponent", type=float, dest="community_exponent")
    gen.add_argument("--min-community", type=int, dest="min_community")
    gen.add_argument("--max-community", type=int, dest="max_community")
    gen.set_defaults(func=cmd_generate)

    def add_graph_args(p, with_partition=True):
        p.add_argument("graph", help="edge-list file, one edge per line")
        p.add_argument("--labels", choices=("int", "str"), default="int",
                       help="node label type in the edge list")
        if with_partition:
            group = p.add_mutually_exclusive_group()
            group.add_argument("--partition", metavar="FILE",
                               help="node-to-community assignment file")
            group.add_argument("--detect", action="store_true",
                               help="detect communities (modularity optimization)")

    cen = sub.add_parser("centrality", help="rank nodes by a centrality strategy")
    add_graph_args(cen)
    cen.add_argument("--kind", choices=_KIND_CHOICES, default="degree")
    cen.add_argument("--strategy", choices=_STRATEGY_CHOICES, default="standard")
    cen.add_argument("--seed", type=int, default=0,
                     help="seed for --detect")
    cen.add_argument("-o", "--output", required=True, metavar="FILE",
                     help="ranking CSV path")
    cen.set_defaults(func=cmd_centrality)

    ev = sub.add_parser("evaluate",
                        help="compare seed-selection strategies under SIR spreading")
    add_graph_args(ev)
    ev.add_argument("--kinds", nargs="+", choices=_KIND_CHOICES,
                    default=["degree"])
    ev.add_argument("--strategies", nargs="+", choices=_STRATEGY_CHOICES,
                    default=["standard", "local", "global"])
    ev.add_argument("--f0-grid", nargs="+", type=float, dest="f0_grid",
                    default=[0.02, 0.04, 0.06, 0.08, 0.10],
                    help="initial-spreader fractions")
    ev.add_argument("--alpha", type=float, default=0.1,
                    help="per-contact transmission probability")
    ev.add_argument("--sigma", type=float, default=0.1,
                    help="per-step recovery probability")
    ev.add_argument("--runs", type=int, default=200,
                    help="independent simulations per cell")
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--workers", type=int, default=None,
                    help="worker processes for runs (default: CPU count)")
    ev.add_argument("--contact-model", choices=CONTACT_MODELS,
                    default="all_neighbors", dest="contact_model",
                    help="per-step contact scheme for infected nodes")
    ev.add_argument("-o", "--output", required=True, metavar="FILE",
                    help="sweep CSV path")
    ev.set_defaults(func=cmd_evaluate)

    thr = sub.add_parser("threshold", help="print the epidemic threshold")
    add_graph_args(thr, with_partition=False)
    thr.set_defaults(func=cmd_threshold)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EdgeListFormatError, GenerationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
