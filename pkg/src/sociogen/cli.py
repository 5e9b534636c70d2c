"""Command-line driver.

Subcommands mirror the workflow left to right: ``gen-graph`` makes an edge
list, ``communities`` labels it, ``gen-data`` runs the full attribute
pipeline and writes the four output files plus a JSON manifest, and
``deviation`` repeats generation R times to benchmark cross-run stability.

Every command is deterministic given its inputs and seed flags.  Exit code 0
means success; domain errors (bad config, unreadable files, degenerate
graphs) print to stderr and exit 2.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import resources
from pathlib import Path

from . import __version__
from .errors import SociogenError
from .graph import hits, load_edge_list, save_edge_list
from .louvain import detect_communities, load_communities, save_communities
from .profiles import (
    GenerationConfig,
    config_to_dict,
    default_config,
    load_config,
    validate,
)
from .propagator import generate, write_user_table, write_weighted_edges
from .rmat import RmatParams, generate as rmat_generate, suggested_filename
from .stats import (
    community_summary,
    deviation_report,
    format_deviation_report,
    frequency_table,
    write_community_summary,
    write_frequency_table,
)

DEFAULT_INPUT_DIR = Path("resources/Input_files")
DEFAULT_GRAPH_RESOURCE = "1kby10k.csv"
DEFAULT_COMMUNITIES_RESOURCE = "1kby10kcommunities.csv"


def _data_path(name: str) -> Path:
    return Path(str(resources.files("sociogen").joinpath("data", name)))


def _cmd_gen_graph(args) -> int:
    params = RmatParams(
        num_nodes=args.nodes,
        num_edges=args.edges,
        a=args.a,
        b=args.b,
        c=args.c,
        d=args.d,
        rng_seed=args.seed,
    )
    g = rmat_generate(params)
    out = Path(args.out) if args.out else Path(args.out_dir) / suggested_filename(params)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_edge_list(g, out)
    print(
        f"wrote {out}: {g.num_nodes} nodes, {g.num_edges} edges "
        f"(requested {params.num_edges}, duplicates and self-loops dropped)"
    )
    return 0


def _cmd_communities(args) -> int:
    g = load_edge_list(args.graph)
    target = None if args.unconstrained else args.target
    labeling = detect_communities(
        g, target=target, timeout=args.timeout, rng_seed=args.seed
    )
    graph_path = Path(args.graph)
    out = Path(args.out) if args.out else graph_path.parent / f"{graph_path.stem}communities.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    save_communities(labeling, out)
    print(f"{labeling.raw_num_communities} communities found before constraint")
    if target is not None:
        print(
            f"labeled {labeling.num_communities} communities "
            f"(resolution {labeling.resolution:.2f})"
        )
    print(f"quality {labeling.quality:.4f}")
    print(f"wrote {out}")
    if labeling.incomplete:
        print(
            f"warning: only {labeling.num_communities} communities reachable "
            f"within the time budget",
            file=sys.stderr,
        )
    return 0


def _resolve_inputs(config: GenerationConfig):
    """Pick the configured graph/communities pair, or the bundled default."""
    if (config.graph_path is None) != (config.communities_path is None):
        raise SociogenError(
            "config must set paths.graph and paths.communities together "
            "(or neither, to use the bundled default pair)"
        )
    if config.graph_path is None:
        graph_path = _data_path(DEFAULT_GRAPH_RESOURCE)
        comm_path = _data_path(DEFAULT_COMMUNITIES_RESOURCE)
    else:
        graph_path = Path(config.graph_path)
        comm_path = Path(config.communities_path)
    g = load_edge_list(graph_path)
    labels = load_communities(comm_path)
    if labels.shape[0] != g.num_nodes:
        raise SociogenError(
            f"{comm_path}: covers {labels.shape[0]} nodes but {graph_path} has {g.num_nodes}"
        )
    return g, labels, graph_path, comm_path


def _load_run_config(args) -> GenerationConfig:
    config = load_config(args.config) if args.config else default_config()
    if args.master_seed is not None:
        config = config.copy_with(rng_seed=args.master_seed)
    if getattr(args, "output_dir", None):
        config = config.copy_with(output_dir=args.output_dir)
    problems = validate(config)
    if problems:
        for p in problems:
            print(f"config error: {p}", file=sys.stderr)
        raise SociogenError(f"configuration invalid ({len(problems)} problem(s))")
    return config


def _output_base(config: GenerationConfig, graph_path: Path) -> str:
    return config.output_base if config.output_base else graph_path.stem


def _cmd_gen_data(args) -> int:
    started = time.perf_counter()
    config = _load_run_config(args)
    g, labels, graph_path, comm_path = _resolve_inputs(config)
    result = generate(g, labels, config)
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    base = _output_base(config, graph_path)
    paths = {
        "out": out_dir / f"{base}_out.csv",
        "outg": out_dir / f"{base}_outg.csv",
        "out1": out_dir / f"{base}_out1.csv",
        "out2": out_dir / f"{base}_out2.csv",
    }
    write_user_table(result.users, paths["out"])
    write_weighted_edges(result.weighted_edges, paths["outg"])
    write_frequency_table(frequency_table(result.users), paths["out1"])
    write_community_summary(community_summary(labels), paths["out2"])
    report = result.report
    manifest = {
        "tool": "sociogen",
        "version": __version__,
        "command": "gen-data",
        "master_seed": config.rng_seed,
        "inputs": {"graph": str(graph_path), "communities": str(comm_path)},
        "outputs": {k: str(v) for k, v in paths.items()},
        "config": config_to_dict(config),
        "num_nodes": report.num_nodes,
        "num_edges": report.num_edges,
        "sigma_requested": report.sigma_requested,
        "sigma_achieved": report.sigma_achieved,
        "coverage": report.coverage,
        "assigned_after_neighbors": report.assigned_after_neighbors,
        "remainder_count": report.remainder_count,
        "timings": report.timings,
        "wall_time": time.perf_counter() - started,
    }
    manifest_path = out_dir / f"{base}_manifest.json"
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(
        f"seeds: {report.sigma_achieved} placed of {report.sigma_requested} requested; "
        f"coverage {report.coverage:.1%}"
    )
    print(
        f"assigned {report.assigned_after_neighbors} of {report.num_nodes} nodes "
        f"as seeds or seed neighbors; {report.remainder_count} filled from "
        f"assigned neighborhoods"
    )
    for key in ("out", "outg", "out1", "out2"):
        print(f"wrote {paths[key]}")
    print(f"wrote {manifest_path}")
    return 0


def _cmd_deviation(args) -> int:
    if args.runs < 2:
        raise SociogenError("deviation needs at least 2 runs")
    config = _load_run_config(args)
    g, labels, _, _ = _resolve_inputs(config)
    metrics = hits(g)
    tables = []
    for r in range(args.runs):
        run_config = config.copy_with(rng_seed=config.rng_seed + r)
        result = generate(g, labels, run_config, metrics=metrics)
        tables.append(frequency_table(result.users))
    scopes = ["ALL"] + [c.strip() for c in args.communities.split(",") if c.strip()]
    report = deviation_report(tables, scopes=scopes)
    text = format_deviation_report(report)
    print(text, end="")
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}")
    if args.json:
        Path(args.json).parent.mkdir(parents=True, exist_ok=True)
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {args.json}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sociogen",
        description="Synthetic social graph and attribute data generator.",
    )
    parser.add_argument("--version", action="version", version=f"sociogen {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-graph", help="generate an RMAT edge-list file")
    p.add_argument("nodes", type=int)
    p.add_argument("edges", type=int)
    p.add_argument("--a", type=float, default=0.45)
    p.add_argument("--b", type=float, default=0.15)
    p.add_argument("--c", type=float, default=0.15)
    p.add_argument("--d", type=float, default=0.25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="explicit output file path")
    p.add_argument(
        "--out-dir",
        default=str(DEFAULT_INPUT_DIR),
        help="directory for the conventional <N>by<E>.csv name",
    )
    p.set_defaults(func=_cmd_gen_graph)

    p = sub.add_parser("communities", help="detect and label communities")
    p.add_argument("graph", help="edge-list file")
    p.add_argument("--target", type=int, default=10)
    p.add_argument("--timeout", type=float, default=30.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--unconstrained",
        action="store_true",
        help="report plain Louvain communities without the fixed-count constraint",
    )
    p.add_argument("--out", help="output file (default <graph>communities.csv)")
    p.set_defaults(func=_cmd_communities)

    p = sub.add_parser("gen-data", help="run the full attribute pipeline")
    p.add_argument("config", nargs="?", help="YAML config (default: bundled)")
    p.add_argument("--master-seed", type=int, default=None)
    p.add_argument("--output-dir", default=None)
    p.set_defaults(func=_cmd_gen_data)

    p = sub.add_parser("deviation", help="cross-run share deviation benchmark")
    p.add_argument("config", nargs="?", help="YAML config (default: bundled)")
    p.add_argument("--runs", type=int, default=3)
    p.add_argument(
        "--communities",
        default="1,4",
        help="comma-separated community scopes reported next to ALL",
    )
    p.add_argument("--master-seed", type=int, default=None)
    p.add_argument("--out", help="write the table to this file")
    p.add_argument("--json", help="write the machine-readable report here")
    p.set_defaults(func=_cmd_deviation)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SociogenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
